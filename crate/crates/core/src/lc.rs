//! Local-Clifford equivalence of graph states and the classification of small
//! connected graphs into LC classes.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::canon::{canonical_code, connected_graph_codes, SmallGraph};
use crate::clifford::{Axis, Clifford, Named, SignedAxis};
use crate::entanglement::{max_schmidt_rank, pauli_persistency, rank_index};
use crate::error::{check_limit, Error, Result};
use crate::f2::{self, BitMatrix, BitVec};
use crate::graph::Graph;
use crate::stabilizer::{generator_matrix, same_stabilizer, stabilizer_element};

/// Default cap on the number of labelled graphs in an orbit.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// Largest n accepted by [`classify`].
pub const CLASSIFY_LIMIT: usize = 8;

/// Per-vertex binary symplectic matrices [[A, B], [C, D]] and a matching
/// Clifford frame with |g2⟩ ∝ (⊗ frame_a)|g1⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcWitness {
    pub q: Vec<[[bool; 2]; 2]>,
    pub frame: Vec<Clifford>,
}

impl LcWitness {
    pub fn determinants_ok(&self) -> bool {
        self.q
            .iter()
            .all(|m| (m[0][0] & m[1][1]) ^ (m[0][1] & m[1][0]))
    }
}

// Unknowns: a_i at i, b_i at n+i, c_i at 2n+i, d_i at 3n+i.
fn lc_system(g1: &Graph, g2: &Graph) -> BitMatrix {
    let n = g1.n();
    let mut m = BitMatrix::zeros(n * n, 4 * n);
    for j in 0..n {
        for k in 0..n {
            let row = j * n + k;
            // (Γ' B Γ)_jk + (D Γ)_jk + (Γ' A)_jk + C_jk = 0
            for i in 0..n {
                if g2.has_edge(j, i) && g1.has_edge(i, k) {
                    m.toggle(row, n + i);
                }
            }
            if g1.has_edge(j, k) {
                m.toggle(row, 3 * n + j);
            }
            if g2.has_edge(j, k) {
                m.toggle(row, k);
            }
            if j == k {
                m.toggle(row, 2 * n + j);
            }
        }
    }
    m
}

fn invertible_everywhere(v: &BitVec, n: usize) -> bool {
    (0..n).all(|i| {
        let (a, b, c, d) = (v.get(i), v.get(n + i), v.get(2 * n + i), v.get(3 * n + i));
        (a & d) ^ (b & c)
    })
}

// Full span for small dimension, else basis vectors and pairwise sums.
fn find_invertible(basis: &[BitVec], n: usize) -> Option<BitVec> {
    let len = 4 * n;
    if basis.len() <= 16 {
        return f2::span(basis, len)
            .into_iter()
            .find(|v| invertible_everywhere(v, n));
    }
    for (i, b) in basis.iter().enumerate() {
        if invertible_everywhere(b, n) {
            return Some(b.clone());
        }
        for c in &basis[i + 1..] {
            let s = b.xor(c);
            if invertible_everywhere(&s, n) {
                return Some(s);
            }
        }
    }
    None
}

fn clifford_from_symplectic(m: [[bool; 2]; 2]) -> Clifford {
    let x = Axis::from_bits(m[0][0], m[1][0]).expect("invertible column");
    let z = Axis::from_bits(m[0][1], m[1][1]).expect("invertible column");
    Clifford::from_images(SignedAxis::new(x, false), SignedAxis::new(z, false))
        .expect("invertible matrix")
}

fn pauli_clifford(x: bool, z: bool) -> Clifford {
    match (x, z) {
        (false, false) => Clifford::identity(),
        (true, false) => Clifford::named(Named::X),
        (true, true) => Clifford::named(Named::Y),
        (false, true) => Clifford::named(Named::Z),
    }
}

/// LC witness mapping |g1⟩ to |g2⟩, if one exists.
pub fn are_lc_equivalent(g1: &Graph, g2: &Graph) -> Result<Option<LcWitness>> {
    let n = g1.n();
    if g2.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g2.n(),
        });
    }
    if n == 0 {
        return Ok(Some(LcWitness {
            q: Vec::new(),
            frame: Vec::new(),
        }));
    }
    let sys = lc_system(g1, g2);
    let basis = f2::kernel_basis(&sys);
    let Some(v) = find_invertible(&basis, n) else {
        return Ok(None);
    };
    let q: Vec<[[bool; 2]; 2]> = (0..n)
        .map(|i| [[v.get(i), v.get(n + i)], [v.get(2 * n + i), v.get(3 * n + i)]])
        .collect();
    let mut frame: Vec<Clifford> = q.iter().map(|&m| clifford_from_symplectic(m)).collect();

    // Fix signs with a Pauli P: row k flips iff it anticommutes with P.
    let conj = generator_matrix(g1).conjugated(&frame);
    let mut sys = BitMatrix::zeros(n, 2 * n);
    let mut rhs = BitVec::zeros(n);
    for (k, r) in conj.rows().iter().enumerate() {
        let target = stabilizer_element(g2, &r.x);
        debug_assert_eq!(target.z, r.z);
        if target.phase != r.phase {
            rhs.set(k, true);
        }
        for q in r.z.iter_ones() {
            sys.toggle(k, q);
        }
        for q in r.x.iter_ones() {
            sys.toggle(k, n + q);
        }
    }
    let p = f2::solve(&sys, &rhs).expect("independent rows");
    for (a, c) in frame.iter_mut().enumerate() {
        *c = pauli_clifford(p.get(a), p.get(n + a)).compose(*c);
    }
    debug_assert!(same_stabilizer(&generator_matrix(g1).conjugated(&frame), &generator_matrix(g2))
        .unwrap_or(false));
    Ok(Some(LcWitness { q, frame }))
}

/// All labelled graphs reachable from `g` by local complementations.
pub fn lc_orbit(g: &Graph) -> Result<HashSet<Graph>> {
    lc_orbit_with_cap(g, DEFAULT_ORBIT_CAP)
}

pub fn lc_orbit_with_cap(g: &Graph, cap: usize) -> Result<HashSet<Graph>> {
    let mut seen: HashSet<Graph> = HashSet::from([g.clone()]);
    let mut q = VecDeque::from([g.clone()]);
    while let Some(h) = q.pop_front() {
        for a in 0..h.n() {
            if h.degree(a) < 2 {
                continue;
            }
            let mut t = h.clone();
            t.local_complement_in_place(a);
            if !seen.contains(&t) {
                seen.insert(t.clone());
                check_limit("orbit size", seen.len(), cap)?;
                q.push_back(t);
            }
        }
    }
    Ok(seen)
}

/// One LC-plus-isomorphism class of connected graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    pub representative: Graph,
    /// Non-isomorphic graphs in the class.
    pub orbit_size: usize,
    pub n: usize,
    pub edges: usize,
    pub sr_max: usize,
    pub pp: usize,
    /// Counts of ranks k, k-1, ..., 1 over the 2-vertex cuts.
    pub ri2: Vec<usize>,
    pub ri3: Vec<usize>,
    /// Some member of the class is two-colorable.
    pub two_colorable: bool,
}

// Canonical codes reachable by one local complementation.
fn lc_neighbors(n: usize, code: u128) -> Vec<u128> {
    let g = SmallGraph::from_code(n, code);
    (0..n)
        .filter(|&a| g.rows[a].count_ones() >= 2)
        .map(|a| canonical_code(&g.local_complement(a)))
        .collect()
}

/// Group the connected isomorphism classes on `n` vertices into LC classes.
/// Each inner vector lists canonical codes.
pub fn lc_classes(n: usize) -> Result<Vec<Vec<u128>>> {
    check_limit("vertex count", n, CLASSIFY_LIMIT)?;
    let codes = connected_graph_codes(n)?;
    let index: HashMap<u128, usize> = codes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let adjacency: Vec<Vec<usize>> = codes
        .par_iter()
        .map(|&c| lc_neighbors(n, c).into_iter().map(|d| index[&d]).collect())
        .collect();
    let mut class_of = vec![usize::MAX; codes.len()];
    let mut classes = Vec::new();
    for s in 0..codes.len() {
        if class_of[s] != usize::MAX {
            continue;
        }
        let id = classes.len();
        class_of[s] = id;
        let mut members = vec![codes[s]];
        let mut q = VecDeque::from([s]);
        while let Some(v) = q.pop_front() {
            for &w in &adjacency[v] {
                if class_of[w] == usize::MAX {
                    class_of[w] = id;
                    members.push(codes[w]);
                    q.push_back(w);
                }
            }
        }
        classes.push(members);
    }
    Ok(classes)
}

/// Classification report for connected graphs on `n` vertices.
///
/// Classes are ordered by representative edge count, then by code; the
/// representative is the member with fewest edges, ties broken by the
/// smallest canonical code.
pub fn classify(n: usize) -> Result<Vec<ClassRecord>> {
    let classes = lc_classes(n)?;
    let mut records: Vec<(usize, u128, ClassRecord)> = classes
        .par_iter()
        .map(|members| {
            let graphs: Vec<(u128, SmallGraph)> =
                members.iter().map(|&c| (c, SmallGraph::from_code(n, c))).collect();
            let &(code, rep) = graphs
                .iter()
                .min_by_key(|(c, g)| (g.edge_count(), *c))
                .expect("nonempty class");
            let g = rep.to_graph();
            let two_colorable = graphs.iter().any(|(_, h)| h.to_graph().is_two_colorable());
            let (ri2, ri3) = rank_index(&g);
            let rec = ClassRecord {
                orbit_size: members.len(),
                n,
                edges: g.edge_count(),
                sr_max: max_schmidt_rank(&g).expect("n within sweep limit"),
                pp: pauli_persistency(&g).expect("n within search limit"),
                ri2,
                ri3,
                two_colorable,
                representative: g,
            };
            (rec.edges, code, rec)
        })
        .collect();
    records.sort_by_key(|(e, c, _)| (*e, *c));
    Ok(records.into_iter().map(|(_, _, r)| r).collect())
}
