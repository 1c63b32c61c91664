//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use gslab_core::canon::enumerate_connected_graphs;
use gslab_core::dense::{dense_state_vector, partial_trace, CMatrix};
use gslab_core::stabilizer::generator_matrix;
use gslab_core::{
    Axis, Clifford, DenseState, Graph, GraphDiagonalState, Instruction, Named, PauliChannel, PauliString, VertexSet,
    WeightedGraph,
};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                g.add_edge(a, b);
            }
        }
    }
    g
}

pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    loop {
        let g = random_graph(rng, n, p);
        if g.is_connected() {
            return g;
        }
    }
}

pub fn random_channel(rng: &mut ChaCha8Rng) -> PauliChannel {
    let mut p = [0.0; 4];
    p.iter_mut().for_each(|x| *x = rng.random::<f64>());
    p[0] += 1.0;
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    p[0] = 1.0 - p[1] - p[2] - p[3];
    PauliChannel::new(p).unwrap()
}

pub fn random_weighted(rng: &mut ChaCha8Rng, n: usize, p: f64) -> WeightedGraph {
    let mut wg = WeightedGraph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                wg.set_phase(a, b, rng.random::<f64>() * 2.0 * PI).unwrap();
            }
        }
    }
    wg
}

pub fn random_instruction(rng: &mut ChaCha8Rng, n: usize, measure: bool) -> Instruction {
    let k = rng.random_range(0..if measure { 10 } else { 8 });
    let a = rng.random_range(0..n);
    match k {
        0..=3 => Instruction::Local(Clifford::from_index(rng.random_range(0..24)), a),
        4..=6 if n > 1 => {
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            if k == 6 {
                Instruction::Cnot(a, b)
            } else {
                Instruction::Cz(a, b)
            }
        }
        4..=7 => Instruction::Local(Clifford::named(Named::H), a),
        _ => Instruction::Measure {
            axis: Axis::ALL[rng.random_range(0..3)],
            vertex: a,
            forced: Some(if rng.random_bool(0.5) { 1 } else { -1 }),
        },
    }
}

pub fn plus_state(g: &Graph) -> DenseState {
    dense_state_vector(g, &VertexSet::zeros(g.n())).unwrap()
}

// λ_U = ⟨U|ρ|U⟩ with |U⟩ = σz^U|G⟩ built densely.
pub fn project_dense(rho: &CMatrix, g: &Graph) -> Vec<f64> {
    let n = g.n();
    (0..1u64 << n)
        .map(|u| {
            let psi = dense_state_vector(g, &VertexSet::from_mask(n, u)).unwrap();
            let v = CMatrix::from_column_slice(1 << n, 1, psi.amplitudes());
            (v.adjoint() * rho * &v)[(0, 0)].re
        })
        .collect()
}

// |+⟩^n followed by one controlled phase per edge
pub fn circuit_state(wg: &WeightedGraph) -> DenseState {
    let mut psi = DenseState::plus(wg.n()).unwrap();
    for (a, b, phi) in wg.edges() {
        psi.apply_cphase(a, b, phi);
    }
    psi
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

// Projector onto outcome `bit` of σx (x_basis) or σz.
fn projector(x_basis: bool, bit: usize) -> CMatrix {
    let s = if bit == 0 { 1.0 } else { -1.0 };
    if x_basis {
        CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.5 * s), c(0.5 * s), c(0.5)])
    } else {
        let mut m = CMatrix::zeros(2, 2);
        m[(bit, bit)] = c(1.0);
        m
    }
}

// Two copies, copy 1 on qubits 0..n and copy 2 on n..2n. Multilateral CNOTs
// (kept color: copy 2 → copy 1; summed color: copy 1 → copy 2), then copy 2
// is measured: kept color in σx, summed color in σz. Returns the unnormalized
// kept state of copy 1.
pub fn two_copy_oracle(s: &GraphDiagonalState, keep: &[usize]) -> CMatrix {
    let g = s.graph();
    let n = g.n();
    let rho = s.to_density_matrix().unwrap();
    let joint = rho.kronecker(&rho);
    let d = 1usize << (2 * n);
    let is_keep = |v: usize| keep.contains(&v);
    let perm = |mut i: usize| {
        for v in 0..n {
            let (ctrl, tgt) = if is_keep(v) { (v + n, v) } else { (v, v + n) };
            if i >> ctrl & 1 == 1 {
                i ^= 1 << tgt;
            }
        }
        i
    };
    let mut after = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            after[(perm(i), perm(j))] = joint[(i, j)];
        }
    }
    let mut kept = CMatrix::zeros(1 << n, 1 << n);
    for outcome in 0..1usize << n {
        let bit = |v: usize| outcome >> v & 1;
        let ok = (0..n)
            .filter(|&v| is_keep(v))
            .all(|v| (bit(v) + g.neighbors(v).iter().map(|&w| bit(w)).sum::<usize>()) % 2 == 0);
        if !ok {
            continue;
        }
        // copy 2 is the high factor; qubit n + v is bit v of the high index
        let mut pi = CMatrix::identity(1, 1);
        for v in (0..n).rev() {
            pi = pi.kronecker(&projector(is_keep(v), bit(v)));
        }
        let full = pi.kronecker(&CMatrix::identity(1 << n, 1 << n));
        kept += partial_trace(&(&full * &after * &full), 2 * n, &(0..n).collect::<Vec<_>>());
    }
    kept
}

pub fn bipartite_connected(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        out.extend(enumerate_connected_graphs(n).unwrap().into_iter().filter(|g| g.is_two_colorable()));
    }
    out
}

pub fn relabel(rng: &mut ChaCha8Rng, g: &Graph) -> Graph {
    let n = g.n();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    g.permuted(&perm)
}

// C by direct enumeration of ±1 assignments per site and setting, using the
// generator products for the stabilizer.
pub fn lhv_oracle(g: &Graph) -> u64 {
    let n = g.n();
    let gens = generator_matrix(g);
    let elems: Vec<PauliString> = (0..1u64 << n)
        .map(|u| gens.element(&VertexSet::from_mask(n, u)))
        .collect();
    let mut best = 0;
    let mut values = vec![[1i64; 3]; n];
    for assign in 0..1u64 << (3 * n) {
        for (q, v) in values.iter_mut().enumerate() {
            for (k, slot) in v.iter_mut().enumerate() {
                *slot = if assign >> (3 * q + k) & 1 == 1 { -1 } else { 1 };
            }
        }
        let total: i64 = elems
            .iter()
            .map(|p| {
                let mut s = p.sign() as i64;
                for (q, v) in values.iter().enumerate() {
                    match (p.x.get(q), p.z.get(q)) {
                        (true, false) => s *= v[0],
                        (true, true) => s *= v[1],
                        (false, true) => s *= v[2],
                        (false, false) => {}
                    }
                }
                s
            })
            .sum();
        best = best.max(total.unsigned_abs());
    }
    best
}
