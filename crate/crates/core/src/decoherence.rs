//! Graph-diagonal mixed states: twirling, individual Pauli channels, partial
//! transposition and lifetime bounds under depolarizing noise.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dense::{mask_of, CMatrix};
use crate::error::{check_index, check_limit, Error, Result};
use crate::graph::{Graph, VertexSet};

/// Largest N for a stored λ vector.
pub const LAMBDA_LIMIT: usize = 20;
/// Largest N for dense-matrix conversions and the channel closed form.
pub const DENSE_DIAGONAL_LIMIT: usize = 10;
/// Largest N for the literal sum over all error patterns.
pub const CLOSED_FORM_LIMIT: usize = 12;
/// Largest N for a report over all cuts.
pub const PPT_REPORT_LIMIT: usize = 16;
/// A cut is PPT when its smallest eigenvalue is at least this.
pub const PPT_TOLERANCE: f64 = -1e-12;

const SUM_TOLERANCE: f64 = 1e-9;

/// ρ = Σ_U λ_U |U⟩⟨U| with |U⟩ = σz^U |G⟩; bit a of the index U is vertex a.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphDiagonalState {
    graph: Graph,
    lambda: Vec<f64>,
}

impl GraphDiagonalState {
    pub fn new(graph: Graph, lambda: Vec<f64>) -> Result<Self> {
        let n = graph.n();
        check_limit("vertex count", n, LAMBDA_LIMIT)?;
        if lambda.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: lambda.len(),
            });
        }
        if let Some(u) = lambda.iter().position(|&l| !(l >= -1e-12)) {
            return Err(Error::InvalidArgument(format!(
                "coefficient {u} is negative: {}",
                lambda[u]
            )));
        }
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidArgument(format!("coefficients sum to {sum}")));
        }
        Ok(GraphDiagonalState { graph, lambda })
    }

    /// The pure graph state, λ_∅ = 1.
    pub fn pure(graph: Graph) -> Result<Self> {
        check_limit("vertex count", graph.n(), LAMBDA_LIMIT)?;
        let mut lambda = vec![0.0; 1 << graph.n()];
        lambda[0] = 1.0;
        Ok(GraphDiagonalState { graph, lambda })
    }

    /// The maximally mixed state.
    pub fn uniform(graph: Graph) -> Result<Self> {
        check_limit("vertex count", graph.n(), LAMBDA_LIMIT)?;
        let d = 1usize << graph.n();
        Ok(GraphDiagonalState {
            graph,
            lambda: vec![1.0 / d as f64; d],
        })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn into_parts(self) -> (Graph, Vec<f64>) {
        (self.graph, self.lambda)
    }

    /// ⟨G|ρ|G⟩ = λ_∅.
    pub fn fidelity(&self) -> f64 {
        self.lambda[0]
    }

    /// ⟨K_a⟩ = Σ_U (-1)^{U_a} λ_U.
    pub fn correlation_expectation(&self, a: usize) -> f64 {
        self.lambda
            .iter()
            .enumerate()
            .map(|(u, &l)| if u >> a & 1 == 1 { -l } else { l })
            .sum()
    }

    /// Apply one Pauli channel at vertex a.
    ///
    /// σx^a|U⟩ ∝ |U + N_a⟩, σz^a|U⟩ = |U + a⟩ and σy^a|U⟩ ∝ |U + N_a + a⟩.
    pub fn apply_channel(&mut self, a: usize, ch: &PauliChannel) -> Result<()> {
        check_index(a, self.n())?;
        let [p0, px, py, pz] = ch.p;
        let na = mask_of(self.graph.neighborhood(a)) as usize;
        let za = 1usize << a;
        let old = &self.lambda;
        self.lambda = (0..old.len())
            .map(|u| p0 * old[u] + px * old[u ^ na] + py * old[u ^ na ^ za] + pz * old[u ^ za])
            .collect();
        Ok(())
    }

    /// Dense 2^N × 2^N matrix in the computational basis.
    pub fn to_density_matrix(&self) -> Result<CMatrix> {
        let n = self.n();
        check_limit("vertex count", n, DENSE_DIAGONAL_LIMIT)?;
        let g = graph_signs(&self.graph);
        // ρ_xy = g_x g_y Σ_U λ_U (-1)^{(x+y)·U}
        let mut w = self.lambda.clone();
        walsh_hadamard(&mut w);
        let d = 1usize << n;
        let scale = 1.0 / d as f64;
        Ok(CMatrix::from_fn(d, d, |x, y| {
            Complex64::new(g[x] * g[y] * w[x ^ y] * scale, 0.0)
        }))
    }
}

// (-1)^{edges inside x}
fn graph_signs(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let rows: Vec<u64> = (0..n).map(|a| mask_of(g.neighborhood(a))).collect();
    (0..1u64 << n)
        .map(|x| {
            let mut e = 0;
            for (a, &r) in rows.iter().enumerate() {
                if x >> a & 1 == 1 {
                    e += (r & x).count_ones();
                }
            }
            if (e / 2) % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect()
}

/// Unnormalized in-place Walsh-Hadamard transform.
pub fn walsh_hadamard(v: &mut [f64]) {
    let d = v.len();
    let mut h = 1;
    while h < d {
        for i in (0..d).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Single-qubit Pauli channel ρ ↦ Σ p_i σ_i ρ σ_i with (p₀, p_x, p_y, p_z).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliChannel {
    p: [f64; 4],
}

impl PauliChannel {
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if p.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::InvalidArgument(format!("negative probability in {p:?}")));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("probabilities sum to {s}")));
        }
        Ok(PauliChannel { p })
    }

    fn check_param(p: f64) -> Result<()> {
        if (0.0..=1.0).contains(&p) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("channel parameter {p} outside [0, 1]")))
        }
    }

    pub fn identity() -> Self {
        PauliChannel {
            p: [1.0, 0.0, 0.0, 0.0],
        }
    }

    /// ρ ↦ pρ + (1-p) 1/2.
    pub fn depolarizing(p: f64) -> Result<Self> {
        Self::check_param(p)?;
        let e = (1.0 - p) / 4.0;
        Ok(PauliChannel {
            p: [(1.0 + 3.0 * p) / 4.0, e, e, e],
        })
    }

    /// ρ ↦ pρ + (1-p)/2 (ρ + σz ρ σz).
    pub fn dephasing(p: f64) -> Result<Self> {
        Self::check_param(p)?;
        Ok(PauliChannel {
            p: [(1.0 + p) / 2.0, 0.0, 0.0, (1.0 - p) / 2.0],
        })
    }

    /// ρ ↦ pρ + (1-p)/2 (ρ + σx ρ σx).
    pub fn bitflip(p: f64) -> Result<Self> {
        Self::check_param(p)?;
        Ok(PauliChannel {
            p: [(1.0 + p) / 2.0, (1.0 - p) / 2.0, 0.0, 0.0],
        })
    }

    pub fn probabilities(&self) -> [f64; 4] {
        self.p
    }

    /// q_i = p_i / p₀ for i = 1, 2, 3.
    pub fn ratios(&self) -> [f64; 3] {
        [self.p[1] / self.p[0], self.p[2] / self.p[0], self.p[3] / self.p[0]]
    }
}

/// λ of ⊗_a D_a(|G⟩⟨G|), one channel per vertex.
pub fn pauli_channel_lambdas(g: &Graph, channels: &[PauliChannel]) -> Result<GraphDiagonalState> {
    if channels.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: channels.len(),
        });
    }
    let mut s = GraphDiagonalState::pure(g.clone())?;
    for (a, ch) in channels.iter().enumerate() {
        s.apply_channel(a, ch)?;
    }
    Ok(s)
}

/// Same channel on every vertex.
pub fn uniform_channel_lambdas(g: &Graph, ch: &PauliChannel) -> Result<GraphDiagonalState> {
    pauli_channel_lambdas(g, &vec![*ch; g.n()])
}

/// λ_U = p₀^{|V|} Σ_{U'} q₁^{|U'∖(ΓU'+U)|} q₂^{|U'∩(ΓU'+U)|} q₃^{|(ΓU'+U)∖U'|},
/// or q^{|U' ∪ (ΓU'+U)|} when the channel is depolarizing.
pub fn pauli_channel_lambdas_closed_form(g: &Graph, ch: &PauliChannel) -> Result<GraphDiagonalState> {
    let n = g.n();
    check_limit("vertex count", n, CLOSED_FORM_LIMIT)?;
    let rows: Vec<u64> = (0..n).map(|a| mask_of(g.neighborhood(a))).collect();
    let d = 1usize << n;
    let [p0, p1, p2, p3] = ch.p;
    let gamma = |u: usize| {
        let mut out = 0u64;
        for (a, &r) in rows.iter().enumerate() {
            if u >> a & 1 == 1 {
                out ^= r;
            }
        }
        out as usize
    };
    let depolarizing = p1 == p2 && p2 == p3;
    let lambda: Vec<f64> = if p0 > 0.0 {
        let [q1, q2, q3] = ch.ratios();
        let pref = p0.powi(n as i32);
        let images: Vec<usize> = (0..d).map(gamma).collect();
        (0..d)
            .into_par_iter()
            .map(|u| {
                let s: f64 = (0..d)
                    .map(|up| {
                        let w = images[up] ^ u;
                        if depolarizing {
                            q1.powi((up | w).count_ones() as i32)
                        } else {
                            q1.powi((up & !w).count_ones() as i32)
                                * q2.powi((up & w).count_ones() as i32)
                                * q3.powi((w & !up).count_ones() as i32)
                        }
                    })
                    .sum();
                pref * s
            })
            .collect()
    } else {
        // p₀ = 0: multiply the powers out term by term
        let images: Vec<usize> = (0..d).map(gamma).collect();
        (0..d)
            .into_par_iter()
            .map(|u| {
                (0..d)
                    .map(|up| {
                        let w = images[up] ^ u;
                        let k1 = (up & !w).count_ones() as i32;
                        let k2 = (up & w).count_ones() as i32;
                        let k3 = (w & !up).count_ones() as i32;
                        p0.powi(n as i32 - k1 - k2 - k3) * p1.powi(k1) * p2.powi(k2) * p3.powi(k3)
                    })
                    .sum()
            })
            .collect()
    };
    GraphDiagonalState::new(g.clone(), lambda)
}

/// λ_U = ⟨U|ρ|U⟩ for a dense ρ on N qubits.
pub fn twirl_to_graph_diagonal(rho: &CMatrix, g: &Graph) -> Result<GraphDiagonalState> {
    let n = g.n();
    check_limit("vertex count", n, DENSE_DIAGONAL_LIMIT)?;
    let d = 1usize << n;
    if rho.nrows() != d || rho.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: rho.nrows(),
        });
    }
    let sg = graph_signs(g);
    // M_e = Σ_x g_x g_{x+e} ρ_{x,x+e}; λ_U = 2^{-N} Σ_e (-1)^{e·U} M_e
    let mut m: Vec<f64> = (0..d)
        .into_par_iter()
        .map(|e| (0..d).map(|x| sg[x] * sg[x ^ e] * rho[(x, x ^ e)].re).sum())
        .collect();
    walsh_hadamard(&mut m);
    let scale = 1.0 / d as f64;
    let lambda = m.into_iter().map(|v| (v * scale).max(0.0)).collect();
    GraphDiagonalState::new(g.clone(), lambda)
}

fn check_cut(n: usize, a_set: &VertexSet) -> Result<()> {
    if a_set.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a_set.len(),
        });
    }
    Ok(())
}

/// Eigenvalues λ'_U of ρ^{T_A}, indexed by U.
///
/// |A| = 1 with a non-isolated vertex and |A| = 2 with independent cross
/// neighborhoods use the short formulas; everything else goes through the
/// sum over (ker Γ')^⊥ × Im Γ'.
pub fn partial_transpose_spectrum(s: &GraphDiagonalState, a_set: &VertexSet) -> Result<Vec<f64>> {
    let n = s.n();
    check_cut(n, a_set)?;
    let a: Vec<usize> = a_set.iter_ones().collect();
    let amask = mask_of(a_set) as usize;
    let bmask = ((1usize << n) - 1) & !amask;
    let cross = |v: usize| mask_of(s.graph.neighborhood(v)) as usize & bmask;
    let l = &s.lambda;
    match a.len() {
        0 => return Ok(l.clone()),
        1 if cross(a[0]) != 0 => {
            let (x, na) = (1usize << a[0], cross(a[0]));
            return Ok((0..l.len())
                .map(|u| 0.5 * (l[u] + l[u ^ na] + l[u ^ x] - l[u ^ na ^ x]))
                .collect());
        }
        2 => {
            let (na, nb) = (cross(a[0]), cross(a[1]));
            if na != 0 && nb != 0 && na != nb {
                let (x, y) = (1usize << a[0], 1usize << a[1]);
                let plus = [0, x, y, x ^ y, na, nb, na ^ nb, x ^ nb, y ^ na, x ^ y ^ na ^ nb];
                let minus = [x ^ na, y ^ nb, x ^ na ^ nb, y ^ na ^ nb, x ^ y ^ na, x ^ y ^ nb];
                return Ok((0..l.len())
                    .map(|u| {
                        let p: f64 = plus.iter().map(|&m| l[u ^ m]).sum();
                        let q: f64 = minus.iter().map(|&m| l[u ^ m]).sum();
                        0.25 * (p - q)
                    })
                    .collect());
            }
        }
        _ => {}
    }
    Ok(pt_general(s, &a, bmask, None))
}

/// The general sum only, with A_Y drawn among all preimages by `seed`.
pub fn partial_transpose_spectrum_seeded(
    s: &GraphDiagonalState,
    a_set: &VertexSet,
    seed: u64,
) -> Result<Vec<f64>> {
    let n = s.n();
    check_cut(n, a_set)?;
    let a: Vec<usize> = a_set.iter_ones().collect();
    let bmask = ((1usize << n) - 1) & !(mask_of(a_set) as usize);
    Ok(pt_general(s, &a, bmask, Some(seed)))
}

fn pt_general(s: &GraphDiagonalState, a: &[usize], bmask: usize, seed: Option<u64>) -> Vec<f64> {
    let g = &s.graph;
    let k = a.len();
    // Γ' A₂ for every A₂ ⊆ A, with A₂ as a local bit pattern
    let image = |loc: usize| {
        let mut y = 0usize;
        for (i, &v) in a.iter().enumerate() {
            if loc >> i & 1 == 1 {
                y ^= mask_of(g.neighborhood(v)) as usize & bmask;
            }
        }
        y
    };
    let to_global = |loc: usize| {
        let mut x = 0usize;
        for (i, &v) in a.iter().enumerate() {
            if loc >> i & 1 == 1 {
                x |= 1 << v;
            }
        }
        x
    };
    let mut ker = Vec::new();
    // Y ↦ A_Y, first preimage found
    let mut im: Vec<(usize, usize)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for loc in 0..1usize << k {
        let y = image(loc);
        if y == 0 {
            ker.push(loc);
        }
        if seen.insert(y) {
            im.push((y, loc));
        }
    }
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (_, ay) in im.iter_mut() {
            *ay ^= ker[rng.random_range(0..ker.len())];
        }
    }
    let perp: Vec<usize> = (0..1usize << k)
        .filter(|&x| ker.iter().all(|&kv| (x & kv).count_ones() % 2 == 0))
        .collect();
    let factor = ker.len() as f64 / (1u64 << k) as f64;
    let terms: Vec<(usize, f64)> = perp
        .iter()
        .flat_map(|&x| {
            im.iter().map(move |&(y, ay)| {
                let sign = if (x & ay).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                (to_global(x) ^ y, sign * factor)
            })
        })
        .collect();
    let l = &s.lambda;
    (0..l.len())
        .into_par_iter()
        .map(|u| terms.iter().map(|&(m, c)| c * l[u ^ m]).sum())
        .collect()
}

/// Walsh-domain evaluation of the same spectrum, reusing one transform of λ
/// across cuts: the transform of λ' is that of λ times (-1)^{s_A·Γ_AB s_B}.
pub struct SpectrumCache {
    rows: Vec<u64>,
    hat: Vec<f64>,
}

impl SpectrumCache {
    pub fn new(s: &GraphDiagonalState) -> Self {
        let mut hat = s.lambda.clone();
        walsh_hadamard(&mut hat);
        SpectrumCache {
            rows: (0..s.n()).map(|a| mask_of(s.graph.neighborhood(a))).collect(),
            hat,
        }
    }

    pub fn spectrum(&self, amask: u64) -> Vec<f64> {
        let d = self.hat.len();
        let full = (d as u64) - 1;
        let bmask = full & !amask;
        let mut v: Vec<f64> = (0..d as u64)
            .map(|s| {
                let (sa, sb) = (s & amask, s & bmask);
                let mut par = 0;
                let mut m = sa;
                while m != 0 {
                    let a = m.trailing_zeros() as usize;
                    m &= m - 1;
                    par ^= (self.rows[a] & sb).count_ones() & 1;
                }
                if par == 0 {
                    self.hat[s as usize]
                } else {
                    -self.hat[s as usize]
                }
            })
            .collect();
        walsh_hadamard(&mut v);
        let scale = 1.0 / d as f64;
        v.iter_mut().for_each(|x| *x *= scale);
        v
    }

    pub fn min_eigenvalue(&self, amask: u64) -> f64 {
        self.spectrum(amask).into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// Minimal partial-transpose eigenvalue for one cut.
#[derive(Clone, Debug, PartialEq)]
pub struct CutPpt {
    pub a_set: Vec<usize>,
    pub min_eigenvalue: f64,
    pub ppt: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PptReport {
    /// Every nontrivial cut once; the last vertex is always on the B side.
    pub cuts: Vec<CutPpt>,
    /// Some cut is PPT.
    pub some_ppt: bool,
    pub all_ppt: bool,
}

pub fn ppt_report(s: &GraphDiagonalState) -> Result<PptReport> {
    let n = s.n();
    check_limit("vertex count", n, PPT_REPORT_LIMIT)?;
    if n < 2 {
        return Ok(PptReport {
            cuts: Vec::new(),
            some_ppt: false,
            all_ppt: true,
        });
    }
    let cache = SpectrumCache::new(s);
    let cuts: Vec<CutPpt> = (1u64..1 << (n - 1))
        .into_par_iter()
        .map(|amask| {
            let m = cache.min_eigenvalue(amask);
            CutPpt {
                a_set: (0..n).filter(|&v| amask >> v & 1 == 1).collect(),
                min_eigenvalue: m,
                ppt: m >= PPT_TOLERANCE,
            }
        })
        .collect();
    Ok(PptReport {
        some_ppt: cuts.iter().any(|c| c.ppt),
        all_ppt: cuts.iter().all(|c| c.ppt),
        cuts,
    })
}

/// Which PPT event [`critical_depolarizing_p`] locates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PptMode {
    /// Some cut has become PPT.
    FirstCut,
    /// Every cut has become PPT.
    AllCuts,
}

const BISECTION_TOLERANCE: f64 = 1e-6;

fn bisect_ppt(event: impl Fn(f64) -> Result<bool>) -> Result<f64> {
    if event(1.0)? {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if event(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Depolarizing parameter p_crit below which the chosen PPT event holds.
pub fn critical_depolarizing_p(g: &Graph, mode: PptMode) -> Result<f64> {
    check_limit("vertex count", g.n(), DENSE_DIAGONAL_LIMIT)?;
    bisect_ppt(|p| {
        let s = uniform_channel_lambdas(g, &PauliChannel::depolarizing(p)?)?;
        let r = ppt_report(&s)?;
        Ok(match mode {
            PptMode::FirstCut => r.some_ppt,
            PptMode::AllCuts => r.all_ppt,
        })
    })
}

/// Depolarizing parameter below which the cut `a_set` is PPT.
pub fn cut_critical_p(g: &Graph, a_set: &VertexSet) -> Result<f64> {
    check_limit("vertex count", g.n(), LAMBDA_LIMIT)?;
    check_cut(g.n(), a_set)?;
    let amask = mask_of(a_set);
    bisect_ppt(|p| {
        let s = uniform_channel_lambdas(g, &PauliChannel::depolarizing(p)?)?;
        Ok(SpectrumCache::new(&s).min_eigenvalue(amask) >= PPT_TOLERANCE)
    })
}

/// Root p* of p^{|N_a|+1} + p^{|N_a+N_b|} + p^{|N_b|+1} = 1; the pair left
/// by σz measurements elsewhere is distillable for p > p*.
pub fn pair_distillability_threshold(g: &Graph, a: usize, b: usize) -> Result<f64> {
    check_index(a, g.n())?;
    check_index(b, g.n())?;
    if a == b {
        return Err(Error::InvalidArgument("pair endpoints coincide".into()));
    }
    let na = g.neighborhood(a);
    let nb = g.neighborhood(b);
    let e1 = na.count_ones() as i32 + 1;
    let e2 = na.xor(nb).count_ones() as i32;
    let e3 = nb.count_ones() as i32 + 1;
    if e2 == 0 {
        return Ok(0.0);
    }
    let f = |p: f64| p.powi(e1) + p.powi(e2) + p.powi(e3) - 1.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// κt = -ln p for p = e^{-κt}.
pub fn kappa_t(p: f64) -> f64 {
    -p.ln()
}
