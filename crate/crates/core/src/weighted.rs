//! Weighted graph states: Ising phases φ_ab on the edges of a graph acting on
//! |+⟩^V, with reduced density matrices in time linear in the rest system.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use nalgebra::Matrix3;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::dense::{von_neumann_entropy, CMatrix, DenseState, DENSE_LIMIT};
use crate::error::{check_index, check_limit, Error, Result};
use crate::graph::{Graph, VertexSet};

/// Largest |A| for [`reduced_density_matrix`].
pub const REDUCED_LIMIT: usize = 10;

/// Eigenvalues below this count as zero in entropies.
pub const ENTROPY_FLOOR: f64 = 1e-14;

// below this many (b, entry) products the rest system is not split
const PAR_WORK: usize = 1 << 16;

/// Symmetric phase matrix stored as sorted neighbour lists; a zero phase is
/// no edge.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    adj: Vec<Vec<(usize, f64)>>,
}

fn reduce_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to TAU itself
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl WeightedGraph {
    pub fn empty(n: usize) -> Self {
        WeightedGraph { adj: vec![Vec::new(); n] }
    }

    /// Every edge of `g` with the same phase.
    pub fn from_graph(g: &Graph, phi: f64) -> Self {
        let mut wg = WeightedGraph::empty(g.n());
        for (a, b) in g.edges() {
            wg.set_phase(a, b, phi).expect("edge endpoints are in range");
        }
        wg
    }

    pub fn from_phases(n: usize, phases: &[(usize, usize, f64)]) -> Result<Self> {
        let mut wg = WeightedGraph::empty(n);
        for &(a, b, phi) in phases {
            wg.set_phase(a, b, phi)?;
        }
        Ok(wg)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Set φ_ab (taken mod 2π); a phase of zero removes the edge.
    pub fn set_phase(&mut self, a: usize, b: usize, phi: f64) -> Result<()> {
        let n = self.n();
        check_index(a, n)?;
        check_index(b, n)?;
        if a == b {
            return Err(Error::InvalidArgument(format!("self-loop at vertex {a}")));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidArgument(format!("phase {phi} is not finite")));
        }
        let phi = reduce_phase(phi);
        for (x, y) in [(a, b), (b, a)] {
            let row = &mut self.adj[x];
            match row.binary_search_by_key(&y, |e| e.0) {
                Ok(i) if phi == 0.0 => {
                    row.remove(i);
                }
                Ok(i) => row[i].1 = phi,
                Err(_) if phi == 0.0 => {}
                Err(i) => row.insert(i, (y, phi)),
            }
        }
        Ok(())
    }

    pub fn phase(&self, a: usize, b: usize) -> f64 {
        match self.adj[a].binary_search_by_key(&b, |e| e.0) {
            Ok(i) => self.adj[a][i].1,
            Err(_) => 0.0,
        }
    }

    /// (b, φ_ab) for every b with a nonzero phase, sorted by b.
    pub fn neighbors(&self, a: usize) -> &[(usize, f64)] {
        &self.adj[a]
    }

    /// Edges (a, b, φ) with a < b.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (a, row) in self.adj.iter().enumerate() {
            for &(b, phi) in row {
                if a < b {
                    out.push((a, b, phi));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// The simple graph, if every phase is π.
    pub fn to_simple(&self) -> Option<Graph> {
        let mut g = Graph::empty(self.n());
        for (a, b, phi) in self.edges() {
            if (phi - PI).abs() > 1e-12 {
                return None;
            }
            g.add_edge(a, b);
        }
        Some(g)
    }
}

/// 2^{-n/2} e^{i Σ_{a<b} φ_ab W_a W_b} at every basis index W.
pub fn wgs_amplitudes(wg: &WeightedGraph) -> Result<DenseState> {
    let n = wg.n();
    check_limit("weighted register size", n, DENSE_LIMIT)?;
    let edges = wg.edges();
    let amp = (0.5f64).powf(n as f64 / 2.0);
    let amps = (0..1usize << n)
        .map(|w| {
            let theta: f64 = edges
                .iter()
                .filter(|&&(a, b, _)| w >> a & 1 == 1 && w >> b & 1 == 1)
                .map(|e| e.2)
                .sum();
            Complex64::from_polar(amp, theta)
        })
        .collect();
    DenseState::from_amplitudes(n, amps)
}

/// Reduced state on A; basis bit k is the k-th smallest vertex of A.
#[derive(Clone, Debug)]
pub struct ReducedState {
    vertices: Vec<usize>,
    rho: CMatrix,
}

impl ReducedState {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> CMatrix {
        self.rho
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(&self.rho, ENTROPY_FLOOR)
    }
}

fn members(wg: &WeightedGraph, a_set: &VertexSet) -> Result<Vec<usize>> {
    if a_set.len() != wg.n() {
        return Err(Error::DimensionMismatch {
            expected: wg.n(),
            got: a_set.len(),
        });
    }
    let a: Vec<usize> = a_set.iter_ones().collect();
    check_limit("reduced subsystem size", a.len(), REDUCED_LIMIT)?;
    Ok(a)
}

// Phases from each b outside A to the vertices of A, for the b that touch A.
fn cross_phases(wg: &WeightedGraph, a: &[usize]) -> Vec<Vec<f64>> {
    let mut cols: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for (k, &v) in a.iter().enumerate() {
        for &(b, phi) in wg.neighbors(v) {
            if a.binary_search(&b).is_err() {
                cols.entry(b).or_insert_with(|| vec![0.0; a.len()])[k] = phi;
            }
        }
    }
    cols.into_values().collect()
}

// e^{i Σ_{k∈S} t_k} for every subset S of the k positions.
fn subset_phases(t: &[f64]) -> Vec<Complex64> {
    let mut u = vec![Complex64::new(1.0, 0.0); 1 << t.len()];
    for (k, &tk) in t.iter().enumerate() {
        let e = Complex64::from_polar(1.0, tk);
        for s in 0..1usize << k {
            u[s | 1 << k] = u[s] * e;
        }
    }
    u
}

// Entrywise Π_b (1 + u_b(i) conj u_b(j)) / 2 over the given columns.
fn hadamard_factor(cols: &[Vec<f64>], k: usize) -> Vec<Complex64> {
    let d = 1usize << k;
    let mut acc = vec![Complex64::new(1.0, 0.0); d * d];
    for t in cols {
        let u = subset_phases(t);
        for i in 0..d {
            for j in 0..d {
                acc[i * d + j] *= (Complex64::new(1.0, 0.0) + u[i] * u[j].conj()) * 0.5;
            }
        }
    }
    acc
}

fn tilde_from_columns(cols: &[Vec<f64>], k: usize) -> CMatrix {
    let d = 1usize << k;
    let acc = if cols.len() * d * d < PAR_WORK {
        hadamard_factor(cols, k)
    } else {
        let chunk = (PAR_WORK / (d * d)).max(1);
        cols.par_chunks(chunk)
            .map(|c| hadamard_factor(c, k))
            .reduce_with(|mut x, y| {
                x.iter_mut().zip(&y).for_each(|(p, q)| *p *= q);
                x
            })
            .unwrap_or_else(|| vec![Complex64::new(1.0, 0.0); d * d])
    };
    let norm = 1.0 / d as f64;
    CMatrix::from_fn(d, d, |i, j| acc[i * d + j] * norm)
}

/// ρ̃^A with only the rest-system vertices in `rest` contributing, i.e. the
/// reduced state of the graph keeping edges between A and `rest` only.
pub fn reduced_tilde(wg: &WeightedGraph, a_set: &VertexSet, rest: &[usize]) -> Result<CMatrix> {
    let a = members(wg, a_set)?;
    for &b in rest {
        check_index(b, wg.n())?;
        if a.binary_search(&b).is_ok() {
            return Err(Error::InvalidArgument(format!("vertex {b} is inside A")));
        }
    }
    let cols: Vec<Vec<f64>> = rest
        .iter()
        .map(|&b| a.iter().map(|&v| wg.phase(v, b)).collect())
        .collect();
    Ok(tilde_from_columns(&cols, a.len()))
}

/// ρ^A = tr_B |G⟩⟨G| in O(4^{|A|} |B|) time, independent of n otherwise.
pub fn reduced_density_matrix(wg: &WeightedGraph, a_set: &VertexSet) -> Result<ReducedState> {
    let a = members(wg, a_set)?;
    let k = a.len();
    let mut rho = tilde_from_columns(&cross_phases(wg, &a), k);
    // intra-A phases e^{i f(S)}, f(S) = Σ_{k<l in S} φ
    let mut intra = Vec::new();
    for (i, &v) in a.iter().enumerate() {
        for (j, &w) in a.iter().enumerate().skip(i + 1) {
            let phi = wg.phase(v, w);
            if phi != 0.0 {
                intra.push((i, j, phi));
            }
        }
    }
    if !intra.is_empty() {
        let f: Vec<f64> = (0..1usize << k)
            .map(|s| {
                intra
                    .iter()
                    .filter(|&&(i, j, _)| s >> i & 1 == 1 && s >> j & 1 == 1)
                    .map(|e| e.2)
                    .sum()
            })
            .collect();
        let d = 1usize << k;
        for i in 0..d {
            for j in 0..d {
                rho[(i, j)] *= Complex64::from_polar(1.0, f[i] - f[j]);
            }
        }
    }
    Ok(ReducedState { vertices: a, rho })
}

/// S(ρ^A) in bits.
pub fn entropy_of_entanglement(wg: &WeightedGraph, a_set: &VertexSet) -> Result<f64> {
    Ok(reduced_density_matrix(wg, a_set)?.entropy())
}

/// E_MW = 2[1 - (1/N) Σ_a tr ρ_a²].
pub fn meyer_wallach(wg: &WeightedGraph) -> f64 {
    let n = wg.n();
    if n == 0 {
        return 0.0;
    }
    let mut purity_sum = 0.0;
    for a in 0..n {
        let set = VertexSet::from_indices(n, &[a]);
        purity_sum += reduced_density_matrix(wg, &set)
            .expect("single vertex reduction")
            .purity();
    }
    (2.0 * (1.0 - purity_sum / n as f64)).clamp(0.0, 1.0)
}

/// Connected two-point correlations and their largest singular value.
#[derive(Clone, Debug, PartialEq)]
pub struct PairCorrelations {
    /// q[i][j] = ⟨σ_i^a σ_j^b⟩ - ⟨σ_i^a⟩⟨σ_j^b⟩ with i, j over x, y, z.
    pub q: [[f64; 3]; 3],
    pub q_max: f64,
}

fn paulis() -> [[[Complex64; 2]; 2]; 3] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [[[o, l], [l, o]], [[o, -i], [i, o]], [[l, o], [o, -l]]]
}

pub fn pair_correlations(wg: &WeightedGraph, a: usize, b: usize) -> Result<PairCorrelations> {
    let n = wg.n();
    check_index(a, n)?;
    check_index(b, n)?;
    if a == b {
        return Err(Error::InvalidArgument(format!("pair needs two distinct vertices, got {a} twice")));
    }
    let rho = reduced_density_matrix(wg, &VertexSet::from_indices(n, &[a, b]))?.into_matrix();
    let s = paulis();
    let id = 3;
    // ⟨σ_i ⊗ σ_j⟩ with basis bit 0 the smaller vertex; index 3 is the identity
    let ev = |i: usize, j: usize| -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..4usize {
            for c in 0..4usize {
                let f = |p: usize, x: usize, y: usize| {
                    if p == id {
                        if x == y {
                            Complex64::new(1.0, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    } else {
                        s[p][x][y]
                    }
                };
                acc += f(i, r & 1, c & 1) * f(j, r >> 1, c >> 1) * rho[(c, r)];
            }
        }
        acc.re
    };
    let mut q = [[0.0; 3]; 3];
    for (i, row) in q.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let (lo, hi) = if a < b { (i, j) } else { (j, i) };
            *v = ev(lo, hi) - ev(lo, id) * ev(id, hi);
        }
    }
    let m = Matrix3::from_fn(|i, j| q[i][j]);
    let q_max = m.singular_values().max();
    Ok(PairCorrelations { q, q_max })
}
