//! Entanglement of graph states: Schmidt ranks, bounds on the Schmidt
//! measure, two-party correlations, localizable Bell pairs, Bell inequalities
//! and witnesses.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::canon::{canonical_code, SmallGraph, MAX_CANON_N};
use crate::clifford::Axis;
use crate::decoherence::GraphDiagonalState;
use crate::dense::DenseState;
use crate::error::{check_index, check_limit, Error, Result};
use crate::f2::{self, rank_masks};
use crate::graph::{Graph, VertexSet};
use crate::pauli::PauliString;
use crate::sim::Register;
use crate::stabilizer::{correlation_operator, stabilizer_element};

/// Largest n for the exhaustive cut sweep.
pub const SR_SWEEP_LIMIT: usize = 24;
/// Largest n for the exact Pauli-persistency search.
pub const PP_LIMIT: usize = 12;
/// Largest n for the vertex-cover branch and bound.
pub const VC_LIMIT: usize = 30;
/// Largest n for the LHV enumeration.
pub const LHV_LIMIT: usize = 4;

fn masks(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|a| g.neighborhood(a).iter_ones().fold(0u64, |m, b| m | 1 << b))
        .collect()
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

// Rank of Γ_AB with A given by `amask`.
fn cut_rank(rows: &[u64], amask: u64, n: usize) -> usize {
    let bmask = full_mask(n) & !amask;
    let mut block: Vec<u64> = Vec::with_capacity(amask.count_ones() as usize);
    let mut m = amask;
    while m != 0 {
        let a = m.trailing_zeros() as usize;
        m &= m - 1;
        block.push(rows[a] & bmask);
    }
    rank_masks(&mut block)
}

/// SR_A(G): rank over F2 of the cross block Γ_AB.
pub fn schmidt_rank(g: &Graph, a_set: &VertexSet) -> usize {
    let a: Vec<usize> = a_set.iter_ones().collect();
    let b: Vec<usize> = (0..g.n()).filter(|&v| !a_set.get(v)).collect();
    f2::rank(&g.cut_matrix(&a, &b))
}

/// Rank counts over the k-vertex cuts, ranks k down to 1. Unordered cuts, so
/// when n = 2k each split is counted once.
fn rank_counts(rows: &[u64], n: usize, k: usize) -> Vec<usize> {
    let mut counts = vec![0usize; k + 1];
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let amask = idx.iter().fold(0u64, |m, &v| m | 1 << v);
        // for n = 2k keep only the side containing vertex 0
        if !(2 * k == n && idx[0] != 0) {
            counts[cut_rank(rows, amask, n)] += 1;
        }
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return counts[1..].iter().rev().copied().collect();
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// (RI₂, RI₃); a component is empty when n is too small for it.
pub fn rank_index(g: &Graph) -> (Vec<usize>, Vec<usize>) {
    let n = g.n();
    assert!(n <= 64, "rank index uses 64-bit masks");
    let rows = masks(g);
    let ri2 = if n >= 4 { rank_counts(&rows, n, 2) } else { Vec::new() };
    let ri3 = if n >= 6 { rank_counts(&rows, n, 3) } else { Vec::new() };
    (ri2, ri3)
}

fn sr_max_masks(rows: &[u64], n: usize) -> usize {
    if n < 2 {
        return 0;
    }
    // vertex n-1 always on the B side
    let cuts = 1u64 << (n - 1);
    let cap = n / 2;
    let sweep = |lo: u64, hi: u64| {
        let mut best = 0;
        for amask in lo.max(1)..hi {
            let k = amask.count_ones() as usize;
            if k.min(n - k) <= best {
                continue;
            }
            best = best.max(cut_rank(rows, amask, n));
            if best == cap {
                break;
            }
        }
        best
    };
    if n <= 14 {
        sweep(0, cuts)
    } else {
        let chunk = 1u64 << 12;
        (0..cuts.div_ceil(chunk))
            .into_par_iter()
            .map(|c| sweep(c * chunk, ((c + 1) * chunk).min(cuts)))
            .max()
            .unwrap_or(0)
    }
}

/// SR_max(G) = max_A SR_A(G) over all bipartitions.
pub fn max_schmidt_rank(g: &Graph) -> Result<usize> {
    check_limit("vertex count", g.n(), SR_SWEEP_LIMIT)?;
    Ok(sr_max_masks(&masks(g), g.n()))
}

/// Sufficient test for SR_A = |A|: the cross graph G_AB is a forest and in
/// every component the A side is the smaller one and holds at most one leaf.
pub fn max_rank_certificate(g: &Graph, a_set: &VertexSet) -> bool {
    let n = g.n();
    let k = a_set.count_ones();
    if k == 0 || k == n {
        return false;
    }
    let mut cross = Graph::empty(n);
    for (u, v) in g.edges() {
        if a_set.get(u) != a_set.get(v) {
            cross.add_edge(u, v);
        }
    }
    for comp in cross.components() {
        let edges: usize = comp.iter().map(|&v| cross.degree(v)).sum::<usize>() / 2;
        if edges + 1 != comp.len() {
            return false;
        }
        let na = comp.iter().filter(|&&v| a_set.get(v)).count();
        if na > comp.len() - na {
            return false;
        }
        let leaves = comp
            .iter()
            .filter(|&&v| a_set.get(v) && cross.degree(v) == 1)
            .count();
        if leaves > 1 {
            return false;
        }
    }
    true
}

/// Exact minimum vertex cover by branch and bound.
pub fn min_vertex_cover(g: &Graph) -> Result<usize> {
    check_limit("vertex count", g.n(), VC_LIMIT)?;
    Ok(vc_masks(&masks(g)))
}

fn vc_masks(rows: &[u64]) -> usize {
    let mut best = rows.iter().filter(|&&r| r != 0).count();
    vc_branch(rows, 0, 0, &mut best);
    best
}

// `removed`: vertices already deleted (in the cover or excluded).
fn vc_branch(rows: &[u64], removed: u64, size: usize, best: &mut usize) {
    if size >= *best {
        return;
    }
    // highest remaining degree
    let mut pick = None;
    let mut maxd = 0;
    for (v, &r) in rows.iter().enumerate() {
        if removed >> v & 1 == 1 {
            continue;
        }
        let d = (r & !removed).count_ones();
        if d > maxd {
            maxd = d;
            pick = Some(v);
        }
    }
    let Some(v) = pick else {
        *best = size;
        return;
    };
    // a cover of the remaining edges needs at least edges / maxd vertices
    let edges: u32 = rows
        .iter()
        .enumerate()
        .filter(|(u, _)| removed >> u & 1 == 0)
        .map(|(_, &r)| (r & !removed).count_ones())
        .sum::<u32>()
        / 2;
    if size + edges.div_ceil(maxd) as usize >= *best {
        return;
    }
    // either v is in the cover, or all of its neighbors are
    vc_branch(rows, removed | 1 << v, size + 1, best);
    let nb = rows[v] & !removed;
    if maxd > 1 {
        vc_branch(rows, removed | nb | 1 << v, size + nb.count_ones() as usize, best);
    }
}

/// Graph after measuring σ_axis at `a`, with `a` isolated (both outcomes give
/// the same graph).
pub fn measurement_residue(g: &SmallGraph, a: usize, axis: Axis) -> SmallGraph {
    let isolate = |mut h: SmallGraph| {
        let mut r = h.rows[a];
        while r != 0 {
            let b = r.trailing_zeros() as usize;
            r &= r - 1;
            h.toggle_edge(a, b);
        }
        h
    };
    match axis {
        Axis::Z => isolate(*g),
        Axis::Y => isolate(g.local_complement(a)),
        Axis::X => {
            if g.rows[a] == 0 {
                return *g;
            }
            let b0 = g.rows[a].trailing_zeros() as usize;
            let h = g.local_complement(b0).local_complement(a).local_complement(b0);
            isolate(h)
        }
    }
}

// Drop isolated vertices.
fn compact(g: &SmallGraph) -> SmallGraph {
    let n = g.n as usize;
    let keep: Vec<usize> = (0..n).filter(|&v| g.rows[v] != 0).collect();
    let mut pos = [u8::MAX; MAX_CANON_N];
    for (i, &v) in keep.iter().enumerate() {
        pos[v] = i as u8;
    }
    let mut h = SmallGraph::empty(keep.len());
    for (i, &v) in keep.iter().enumerate() {
        let mut r = g.rows[v];
        while r != 0 {
            let w = r.trailing_zeros() as usize;
            r &= r - 1;
            h.rows[i] |= 1 << pos[w];
        }
    }
    h
}

fn small_masks(g: &SmallGraph) -> Vec<u64> {
    (0..g.n as usize).map(|v| g.rows[v] as u64).collect()
}

struct PpSearch {
    // (n, code) -> (lower, upper) bounds on PP
    bounds: HashMap<(u8, u128), (usize, usize)>,
}

impl PpSearch {
    fn bounds_of(&mut self, g: &SmallGraph) -> ((u8, u128), (usize, usize)) {
        let key = (g.n, canonical_code(g));
        let b = *self.bounds.entry(key).or_insert_with(|| {
            let rows = small_masks(g);
            (sr_max_masks(&rows, g.n as usize), vc_masks(&rows))
        });
        (key, b)
    }

    /// Can `g` (compact, no isolated vertices) be disentangled with k
    /// measurements?
    fn feasible(&mut self, g: &SmallGraph, k: usize) -> bool {
        if g.n == 0 {
            return true;
        }
        let (key, (lo, hi)) = self.bounds_of(g);
        if hi <= k {
            return true;
        }
        if lo > k || k == 0 {
            return false;
        }
        let n = g.n as usize;
        let mut children: Vec<SmallGraph> = Vec::with_capacity(3 * n);
        for a in 0..n {
            for axis in [Axis::Y, Axis::Z, Axis::X] {
                children.push(compact(&measurement_residue(g, a, axis)));
            }
        }
        children.sort_by_key(|c| c.edge_count());
        for c in &children {
            if self.feasible(c, k - 1) {
                let e = self.bounds.get_mut(&key).expect("inserted above");
                e.1 = e.1.min(k);
                return true;
            }
        }
        let e = self.bounds.get_mut(&key).expect("inserted above");
        e.0 = e.0.max(k + 1);
        false
    }
}

/// Minimal number of local Pauli measurements that leaves no edges.
///
/// Exact search for n ≤ 12; above that only when SR_max meets VC.
pub fn pauli_persistency(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > PP_LIMIT {
        check_limit("vertex count", n, VC_LIMIT.min(SR_SWEEP_LIMIT))?;
        let lo = max_schmidt_rank(g)?;
        let hi = min_vertex_cover(g)?;
        if lo == hi {
            return Ok(lo);
        }
        return Err(Error::LimitExceeded {
            what: "vertex count for exact Pauli persistency",
            got: n,
            limit: PP_LIMIT,
        });
    }
    let g = compact(&SmallGraph::from_graph(g));
    let mut s = PpSearch {
        bounds: HashMap::new(),
    };
    let (_, (lo, hi)) = s.bounds_of(&g);
    for k in lo..hi {
        if s.feasible(&g, k) {
            return Ok(k);
        }
    }
    Ok(hi)
}

/// Bounds SR_max ≤ E_S ≤ PP ≤ VC on the Schmidt measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchmidtReport {
    pub lower: usize,
    pub upper_pp: usize,
    pub upper_vc: usize,
    pub tight: bool,
}

pub fn schmidt_measure_bounds(g: &Graph) -> Result<SchmidtReport> {
    let lower = max_schmidt_rank(g)?;
    let upper_vc = min_vertex_cover(g)?;
    let upper_pp = pauli_persistency(g)?;
    Ok(SchmidtReport {
        lower,
        upper_pp,
        upper_vc,
        tight: lower == upper_pp,
    })
}

/// Q_max^{ab} for graph states; `isolated` marks the product-state case where
/// every correlation vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Qmax {
    pub value: u8,
    pub isolated: bool,
}

pub fn qmax_correlation(g: &Graph, a: usize, b: usize) -> Result<Qmax> {
    check_index(a, g.n())?;
    check_index(b, g.n())?;
    if a == b {
        return Err(Error::InvalidArgument("correlation of a vertex with itself".into()));
    }
    if g.is_isolated(a) || g.is_isolated(b) {
        return Ok(Qmax {
            value: 0,
            isolated: true,
        });
    }
    let mut na = g.neighborhood(a).clone();
    na.set(b, false);
    let mut nb = g.neighborhood(b).clone();
    nb.set(a, false);
    let value = if !na.is_zero() && !nb.is_zero() && na != nb { 0 } else { 1 };
    Ok(Qmax {
        value,
        isolated: false,
    })
}

/// Measurements that leave a Bell pair on {a, b}: σz off the shortest path,
/// then σx on its interior.
pub fn bell_pair_plan(g: &Graph, a: usize, b: usize) -> Result<Vec<(usize, Axis)>> {
    check_index(a, g.n())?;
    check_index(b, g.n())?;
    if a == b {
        return Err(Error::InvalidArgument("endpoints coincide".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let path = g.shortest_path(a, b).ok_or(Error::Disconnected)?;
    let mut on_path = vec![false; g.n()];
    for &v in &path {
        on_path[v] = true;
    }
    let mut plan: Vec<(usize, Axis)> = (0..g.n())
        .filter(|&v| !on_path[v])
        .map(|v| (v, Axis::Z))
        .collect();
    plan.extend(path[1..path.len() - 1].iter().map(|&v| (v, Axis::X)));
    Ok(plan)
}

/// Run [`bell_pair_plan`] on the simulator with random outcomes.
pub fn localize_bell_pair(
    g: &Graph,
    a: usize,
    b: usize,
    seed: u64,
) -> Result<(Vec<(usize, Axis)>, Register)> {
    let plan = bell_pair_plan(g, a, b)?;
    let mut r = Register::from_graph(g.clone(), seed);
    for &(v, axis) in &plan {
        r.measure_pauli(v, axis, None)?;
    }
    Ok((plan, r))
}

/// Signed letters of a Hermitian Pauli string: (sign, per-qubit axis).
fn letters(p: &PauliString) -> (i8, Vec<Option<Axis>>) {
    (p.sign(), (0..p.n()).map(|q| p.axis_at(q)).collect())
}

/// All 2^n stabilizer elements as (sign, letters).
pub fn stabilizer_letters(g: &Graph) -> Vec<(i8, Vec<Option<Axis>>)> {
    let n = g.n();
    (0..1u64 << n)
        .map(|u| letters(&stabilizer_element(g, &VertexSet::from_mask(n, u))))
        .collect()
}

/// C = max over deterministic local assignments of |Σ_{σ∈S} value(σ)|.
pub fn lhv_bound(g: &Graph) -> Result<u64> {
    let n = g.n();
    check_limit("vertex count", n, LHV_LIMIT)?;
    let elems = stabilizer_letters(g);
    let best = (0..1u64 << (3 * n))
        .into_par_iter()
        .map(|assign| {
            // bit 3v + axis index is 1 for the value -1
            let total: i64 = elems
                .iter()
                .map(|(s, ls)| {
                    let mut v = *s as i64;
                    for (q, l) in ls.iter().enumerate() {
                        if let Some(ax) = l {
                            if assign >> (3 * q + ax.index()) & 1 == 1 {
                                v = -v;
                            }
                        }
                    }
                    v
                })
                .sum();
            total.unsigned_abs()
        })
        .max()
        .unwrap_or(0);
    Ok(best)
}

/// Σ_{σ∈S} ⟨ψ|σ|ψ⟩ on a dense state.
pub fn stabilizer_sum(g: &Graph, psi: &DenseState) -> Result<f64> {
    let n = g.n();
    if psi.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: psi.n(),
        });
    }
    check_limit("vertex count", n, 12)?;
    Ok((0..1u64 << n)
        .map(|u| psi.expectation(&stabilizer_element(g, &VertexSet::from_mask(n, u))))
        .sum())
}

/// State for witness evaluation.
#[derive(Clone, Copy, Debug)]
pub enum WitnessState<'a> {
    Dense(&'a DenseState),
    Diagonal(&'a GraphDiagonalState),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessReport {
    /// ⟨W₁^{ab}⟩ = 1 - ⟨K_a⟩ - ⟨K_b⟩ per edge (a, b).
    pub w1: Vec<((usize, usize), f64)>,
    /// ⟨W₂⟩ = (N-1) - Σ_a ⟨K_a⟩
    pub w2: f64,
}

pub fn witness_expectations(g: &Graph, state: WitnessState<'_>) -> Result<WitnessReport> {
    let n = g.n();
    let k: Vec<f64> = match state {
        WitnessState::Dense(psi) => {
            if psi.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: psi.n(),
                });
            }
            (0..n).map(|a| psi.expectation(&correlation_operator(g, a))).collect()
        }
        WitnessState::Diagonal(s) => {
            if s.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: s.n(),
                });
            }
            (0..n).map(|a| s.correlation_expectation(a)).collect()
        }
    };
    let w1 = g
        .edges()
        .into_iter()
        .map(|(a, b)| ((a, b), 1.0 - k[a] - k[b]))
        .collect();
    let w2 = n as f64 - 1.0 - k.iter().sum::<f64>();
    Ok(WitnessReport { w1, w2 })
}

/// Four stabilizer elements whose local-realistic values cannot all be +1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhzCertificate {
    pub vertices: [usize; 3],
    /// Subsets U ⊆ {a, b, c} with settings K^U; each entry has exact sign.
    pub subsets: Vec<Vec<usize>>,
    pub settings: Vec<PauliString>,
    /// Product of the four signs; -1 for a contradiction.
    pub sign_product: i8,
}

/// GHZ-type contradiction on a connected triple a - b - c.
pub fn ghz_contradiction_certificate(g: &Graph) -> Result<GhzCertificate> {
    let n = g.n();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 vertices, got {n}"
        )));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let b = (0..n).find(|&v| g.degree(v) >= 2).expect("connected with n >= 3");
    let nb = g.neighbors(b);
    let (a, c) = (nb[0], nb[1]);
    let triple = [a, b, c];
    // nonempty subsets of the triple, singletons first
    let mut subsets: Vec<u8> = (1u8..8).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let elem = |s: u8| {
        let set: Vec<usize> = (0..3).filter(|i| s >> i & 1 == 1).map(|i| triple[i]).collect();
        (set.clone(), stabilizer_element(g, &VertexSet::from_indices(n, &set)))
    };
    let elems: Vec<(u8, Vec<usize>, PauliString)> = subsets
        .iter()
        .map(|&s| {
            let (set, p) = elem(s);
            (s, set, p)
        })
        .collect();
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            for k in j + 1..elems.len() {
                for l in k + 1..elems.len() {
                    let pick = [&elems[i], &elems[j], &elems[k], &elems[l]];
                    if pick.iter().fold(0u8, |m, e| m ^ e.0) != 0 {
                        continue;
                    }
                    // each letter must occur an even number of times per vertex
                    let even = (0..n).all(|q| {
                        let mut cnt = [0u8; 3];
                        for e in &pick {
                            if let Some(ax) = e.2.axis_at(q) {
                                cnt[ax.index()] += 1;
                            }
                        }
                        cnt.iter().all(|c| c % 2 == 0)
                    });
                    if !even {
                        continue;
                    }
                    let sign_product = pick.iter().map(|e| e.2.sign()).product::<i8>();
                    if sign_product < 0 {
                        return Ok(GhzCertificate {
                            vertices: triple,
                            subsets: pick.iter().map(|e| e.1.clone()).collect(),
                            settings: pick.iter().map(|e| e.2.clone()).collect(),
                            sign_product,
                        });
                    }
                }
            }
        }
    }
    unreachable!("every connected triple admits a GHZ argument")
}
