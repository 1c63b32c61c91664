//! Text formats for graphs, weighted graphs, stabilizers and circuits, plus a
//! little-endian binary λ vector. Vertex numbers in files are 1-based.

use std::collections::HashSet;

use crate::clifford::{Axis, Clifford, Named};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pauli::PauliString;
use crate::sim::Instruction;
use crate::stabilizer::GeneratorMatrix;
use crate::weighted::WeightedGraph;

/// Contents of a graph file: two columns per edge line, or three with a phase.
#[derive(Clone, Debug, PartialEq)]
pub enum GraphFile {
    Simple(Graph),
    Weighted(WeightedGraph),
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

// (1-based line number, tokens) for every line with content
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn parse_vertex(tok: &str, n: usize, line: usize) -> Result<usize> {
    let v: usize = tok.parse().map_err(|_| perr(line, format!("bad vertex {tok:?}")))?;
    if v == 0 || v > n {
        return Err(perr(line, format!("vertex {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

pub fn parse_graph_file(text: &str) -> Result<GraphFile> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| perr(1, "empty graph file"))?;
    if header.len() != 1 {
        return Err(perr(hline, "first line must hold the vertex count"));
    }
    let n: usize = header[0]
        .parse()
        .map_err(|_| perr(hline, format!("bad vertex count {:?}", header[0])))?;
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let mut width = None;
    for (line, toks) in lines {
        if toks.len() != 2 && toks.len() != 3 {
            return Err(perr(line, format!("expected `a b` or `a b phase`, got {} fields", toks.len())));
        }
        if *width.get_or_insert(toks.len()) != toks.len() {
            return Err(perr(line, "mixed weighted and unweighted edge lines"));
        }
        let a = parse_vertex(toks[0], n, line)?;
        let b = parse_vertex(toks[1], n, line)?;
        if a == b {
            return Err(perr(line, format!("self-loop at vertex {}", a + 1)));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(perr(line, format!("duplicate edge {} {}", a + 1, b + 1)));
        }
        let phi = match toks.get(2) {
            Some(t) => {
                let phi: f64 = t.parse().map_err(|_| perr(line, format!("bad phase {t:?}")))?;
                if !phi.is_finite() {
                    return Err(perr(line, format!("phase {t} is not finite")));
                }
                phi
            }
            None => 0.0,
        };
        edges.push((a, b, phi));
    }
    if width == Some(3) {
        Ok(GraphFile::Weighted(WeightedGraph::from_phases(n, &edges)?))
    } else {
        let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();
        Ok(GraphFile::Simple(Graph::from_edges(n, &pairs)?))
    }
}

/// Parse a simple graph; a weighted file is rejected.
pub fn parse_graph(text: &str) -> Result<Graph> {
    match parse_graph_file(text)? {
        GraphFile::Simple(g) => Ok(g),
        GraphFile::Weighted(_) => Err(perr(1, "expected a simple graph, got phases")),
    }
}

/// Parse a weighted graph; a simple file gets phase π on every edge.
pub fn parse_weighted(text: &str) -> Result<WeightedGraph> {
    match parse_graph_file(text)? {
        GraphFile::Simple(g) => Ok(WeightedGraph::from_graph(&g, std::f64::consts::PI)),
        GraphFile::Weighted(w) => Ok(w),
    }
}

/// Canonical text: vertex count, then edges `a b` with a < b in order.
pub fn emit_graph(g: &Graph) -> String {
    let mut s = format!("{}\n", g.n());
    for (a, b) in g.edges() {
        s.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    s
}

/// Phases are written in the shortest form that parses back exactly.
pub fn emit_weighted(wg: &WeightedGraph) -> String {
    let mut s = format!("{}\n", wg.n());
    for (a, b, phi) in wg.edges() {
        s.push_str(&format!("{} {} {}\n", a + 1, b + 1, phi));
    }
    s
}

pub fn parse_stabilizer(text: &str) -> Result<GeneratorMatrix> {
    let mut rows = Vec::new();
    let mut width = None;
    for (line, toks) in content_lines(text) {
        if toks.len() != 1 {
            return Err(perr(line, "one generator per line"));
        }
        let p = PauliString::parse(toks[0]).map_err(|e| perr(line, e.to_string()))?;
        if *width.get_or_insert(p.n()) != p.n() {
            return Err(perr(line, format!("generator has {} qubits, expected {}", p.n(), width.unwrap_or(0))));
        }
        rows.push(p);
    }
    if rows.is_empty() {
        return Err(perr(1, "no generators"));
    }
    GeneratorMatrix::from_rows(rows)
}

pub fn emit_stabilizer(m: &GeneratorMatrix) -> String {
    m.rows().iter().map(|p| format!("{p}\n")).collect()
}

fn parse_forced(rest: &[&str], line: usize) -> Result<Option<i8>> {
    if rest.is_empty() {
        return Ok(None);
    }
    let joined: String = rest.concat();
    match joined.strip_prefix('=').map(str::trim) {
        Some("+1") | Some("1") => Ok(Some(1)),
        Some("-1") => Ok(Some(-1)),
        _ => Err(perr(line, format!("expected `= +1` or `= -1`, got {joined:?}"))),
    }
}

// Vertex numbers in circuits carry no declared width, so only 1-based-ness
// is checked here.
fn circuit_vertex(tok: &str, line: usize) -> Result<usize> {
    parse_vertex(tok, usize::MAX, line)
}

pub fn parse_circuit(text: &str) -> Result<Vec<Instruction>> {
    let mut out = Vec::new();
    for (line, toks) in content_lines(text) {
        let op = toks[0].to_ascii_uppercase();
        let ins = match op.as_str() {
            "CZ" | "CNOT" => {
                if toks.len() != 3 {
                    return Err(perr(line, format!("{op} takes two vertices")));
                }
                let a = circuit_vertex(toks[1], line)?;
                let b = circuit_vertex(toks[2], line)?;
                if a == b {
                    return Err(perr(line, format!("{op} on a single vertex {}", a + 1)));
                }
                if op == "CZ" {
                    Instruction::Cz(a, b)
                } else {
                    Instruction::Cnot(a, b)
                }
            }
            "MX" | "MY" | "MZ" => {
                if toks.len() < 2 {
                    return Err(perr(line, format!("{op} takes a vertex")));
                }
                let axis = match op.as_str() {
                    "MX" => Axis::X,
                    "MY" => Axis::Y,
                    _ => Axis::Z,
                };
                Instruction::Measure {
                    axis,
                    vertex: circuit_vertex(toks[1], line)?,
                    forced: parse_forced(&toks[2..], line)?,
                }
            }
            _ => {
                let named = Named::from_mnemonic(&op).ok_or_else(|| perr(line, format!("unknown gate {:?}", toks[0])))?;
                if toks.len() != 2 {
                    return Err(perr(line, format!("{op} takes one vertex")));
                }
                Instruction::Local(Clifford::named(named), circuit_vertex(toks[1], line)?)
            }
        };
        out.push(ins);
    }
    Ok(out)
}

/// Smallest register that holds every vertex the circuit touches.
pub fn circuit_width(circuit: &[Instruction]) -> usize {
    circuit
        .iter()
        .map(|ins| match *ins {
            Instruction::Local(_, a) => a + 1,
            Instruction::Cz(a, b) | Instruction::Cnot(a, b) => a.max(b) + 1,
            Instruction::Measure { vertex, .. } => vertex + 1,
        })
        .max()
        .unwrap_or(0)
}

/// Local gates are written by mnemonic when one exists, otherwise by the
/// shortest named word that composes to the gate.
pub fn emit_circuit(circuit: &[Instruction]) -> String {
    let mut s = String::new();
    for ins in circuit {
        match *ins {
            Instruction::Local(c, a) => {
                for name in clifford_word(c) {
                    s.push_str(&format!("{} {}\n", name.mnemonic(), a + 1));
                }
            }
            Instruction::Cz(a, b) => s.push_str(&format!("CZ {} {}\n", a + 1, b + 1)),
            Instruction::Cnot(a, b) => s.push_str(&format!("CNOT {} {}\n", a + 1, b + 1)),
            Instruction::Measure { axis, vertex, forced } => {
                s.push_str(&format!("M{} {}", axis.letter(), vertex + 1));
                match forced {
                    Some(1) => s.push_str(" = +1"),
                    Some(_) => s.push_str(" = -1"),
                    None => {}
                }
                s.push('\n');
            }
        }
    }
    s
}

// Gates are applied left to right.
fn clifford_word(c: Clifford) -> Vec<Named> {
    if let Some(n) = Named::ALL.iter().copied().find(|&n| Clifford::named(n) == c) {
        return vec![n];
    }
    for &x in &Named::ALL {
        for &y in &Named::ALL {
            if Clifford::named(x).then(Clifford::named(y)) == c {
                return vec![x, y];
            }
        }
    }
    unreachable!("every single-qubit Clifford is a product of two named gates")
}

/// λ as little-endian f64 values, index U in increasing bit order.
pub fn lambda_to_bytes(lambda: &[f64]) -> Vec<u8> {
    lambda.iter().flat_map(|x| x.to_le_bytes()).collect()
}

pub fn lambda_from_bytes(bytes: &[u8]) -> Result<Vec<f64>> {
    if bytes.len() % 8 != 0 || !(bytes.len() / 8).is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "λ byte length {} is not 8·2^n",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect())
}
