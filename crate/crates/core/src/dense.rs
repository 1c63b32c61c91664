//! Dense state-vector and density-matrix oracle for small registers.
//!
//! Basis index bit `q` is the computational-basis value of qubit `q`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::clifford::Axis;
use crate::error::{check_limit, Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::pauli::PauliString;

/// Largest register the dense oracle accepts.
pub const DENSE_LIMIT: usize = 12;

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Unit-norm state vector on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    /// Wrap raw amplitudes; the caller is responsible for normalization.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: amps.len(),
            });
        }
        Ok(DenseState { n, amps })
    }

    /// |0…0⟩
    pub fn zero(n: usize) -> Result<Self> {
        check_limit("dense register size", n, DENSE_LIMIT)?;
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(DenseState { n, amps })
    }

    /// |+⟩^n
    pub fn plus(n: usize) -> Result<Self> {
        check_limit("dense register size", n, DENSE_LIMIT)?;
        let a = Complex64::new((0.5f64).powf(n as f64 / 2.0), 0.0);
        Ok(DenseState {
            n,
            amps: vec![a; 1 << n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let s = self.norm();
        if s > 0.0 {
            for a in &mut self.amps {
                *a /= s;
            }
        }
    }

    pub fn inner(&self, other: &DenseState) -> Complex64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |⟨self|other⟩|, which is 1 iff the states agree up to global phase.
    pub fn overlap(&self, other: &DenseState) -> f64 {
        self.inner(other).norm()
    }

    pub fn apply_1q(&mut self, q: usize, u: &[[Complex64; 2]; 2]) {
        let m = 1usize << q;
        for i in 0..self.amps.len() {
            if i & m == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | m];
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[i | m] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let m = (1usize << a) | (1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & m == m {
                *amp = -*amp;
            }
        }
    }

    /// Diagonal two-qubit phase diag(1, 1, 1, e^{iφ}).
    pub fn apply_cphase(&mut self, a: usize, b: usize, phi: f64) {
        let m = (1usize << a) | (1usize << b);
        let ph = Complex64::from_polar(1.0, phi);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & m == m {
                *amp *= ph;
            }
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let c = 1usize << control;
        let t = 1usize << target;
        for i in 0..self.amps.len() {
            if i & c != 0 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    pub fn apply_pauli(&mut self, p: &PauliString) {
        *self = self.pauli_image(p);
    }

    /// P|ψ⟩
    pub fn pauli_image(&self, p: &PauliString) -> DenseState {
        assert_eq!(p.n(), self.n);
        let xm = mask_of(&p.x);
        let zm = mask_of(&p.z);
        // σ(x,z) = i^{x·z} X^x Z^z
        let e = (p.phase as u32 + (xm & zm).count_ones()) % 4;
        let ph = i_pow(e);
        let mut out = vec![ZERO; self.amps.len()];
        for (w, &a) in self.amps.iter().enumerate() {
            let s = if (zm & w as u64).count_ones() % 2 == 1 { -ph } else { ph };
            out[w ^ xm as usize] = s * a;
        }
        DenseState { n: self.n, amps: out }
    }

    pub fn expectation(&self, p: &PauliString) -> f64 {
        self.inner(&self.pauli_image(p)).re
    }

    /// Project qubit q onto the ±1 eigenspace of σ_axis and renormalize.
    /// Returns the outcome probability; the state is left unchanged when it is 0.
    pub fn project(&mut self, q: usize, axis: Axis, outcome: i8) -> f64 {
        let p = PauliString::single(self.n, q, axis);
        let img = self.pauli_image(&p);
        let s = outcome as f64 * 0.5;
        let proj: Vec<Complex64> = self
            .amps
            .iter()
            .zip(&img.amps)
            .map(|(a, b)| a * 0.5 + b * s)
            .collect();
        let prob: f64 = proj.iter().map(|a| a.norm_sqr()).sum();
        if prob > 1e-14 {
            self.amps = proj;
            self.normalize();
        }
        prob
    }

    pub fn density_matrix(&self) -> CMatrix {
        let d = self.amps.len();
        CMatrix::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj())
    }

    /// tr_B |ψ⟩⟨ψ| keeping the qubits in `keep` (in increasing order).
    pub fn reduced(&self, keep: &[usize]) -> CMatrix {
        partial_trace_vector(self, keep)
    }
}

fn i_pow(e: u32) -> Complex64 {
    match e % 4 {
        0 => ONE,
        1 => Complex64::new(0.0, 1.0),
        2 => -ONE,
        _ => Complex64::new(0.0, -1.0),
    }
}

pub(crate) fn mask_of(v: &VertexSet) -> u64 {
    let mut m = 0u64;
    for i in v.iter_ones() {
        m |= 1 << i;
    }
    m
}

/// Amplitude at W: 2^{-N/2} (-1)^{Σ_{a<b} Γ_ab W_a W_b} (-1)^{⟨offset, W⟩}.
pub fn dense_state_vector(g: &Graph, z_offset: &VertexSet) -> Result<DenseState> {
    let n = g.n();
    check_limit("dense register size", n, DENSE_LIMIT)?;
    if z_offset.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: z_offset.len(),
        });
    }
    let rows: Vec<u64> = (0..n).map(|a| mask_of(g.neighborhood(a))).collect();
    let off = mask_of(z_offset);
    let amp = (0.5f64).powf(n as f64 / 2.0);
    let amps = (0..1usize << n)
        .map(|w| {
            let w64 = w as u64;
            let mut edges = 0u32;
            for (a, &row) in rows.iter().enumerate() {
                if w64 >> a & 1 == 1 {
                    // each edge inside W counted from its lower endpoint
                    edges += (row & w64 & !((2u64 << a) - 1)).count_ones();
                }
            }
            let par = edges + (off & w64).count_ones();
            Complex64::new(if par % 2 == 0 { amp } else { -amp }, 0.0)
        })
        .collect();
    Ok(DenseState { n, amps })
}

fn partial_trace_vector(psi: &DenseState, keep: &[usize]) -> CMatrix {
    let n = psi.n;
    let k = keep.len();
    let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dk = 1usize << k;
    let mut rho = CMatrix::zeros(dk, dk);
    for r in 0..(1usize << rest.len()) {
        let base = scatter(r, &rest);
        let col: Vec<Complex64> = (0..dk).map(|i| psi.amps[base | scatter(i, keep)]).collect();
        for i in 0..dk {
            for j in 0..dk {
                rho[(i, j)] += col[i] * col[j].conj();
            }
        }
    }
    rho
}

/// Spread the low bits of `bits` onto the positions in `pos`.
pub fn scatter(bits: usize, pos: &[usize]) -> usize {
    let mut out = 0;
    for (k, &p) in pos.iter().enumerate() {
        if bits >> k & 1 == 1 {
            out |= 1 << p;
        }
    }
    out
}

/// Inverse of [`scatter`].
pub fn gather(index: usize, pos: &[usize]) -> usize {
    let mut out = 0;
    for (k, &p) in pos.iter().enumerate() {
        if index >> p & 1 == 1 {
            out |= 1 << k;
        }
    }
    out
}

/// Partial trace of a density matrix on `n` qubits, keeping `keep`.
pub fn partial_trace(rho: &CMatrix, n: usize, keep: &[usize]) -> CMatrix {
    let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let dk = 1usize << keep.len();
    let mut out = CMatrix::zeros(dk, dk);
    for r in 0..(1usize << rest.len()) {
        let base = scatter(r, &rest);
        for i in 0..dk {
            let ii = base | scatter(i, keep);
            for j in 0..dk {
                out[(i, j)] += rho[(ii, base | scatter(j, keep))];
            }
        }
    }
    out
}

/// Partial transpose on the qubits of `a_set`.
pub fn partial_transpose(rho: &CMatrix, a_set: &[usize]) -> CMatrix {
    let d = rho.nrows();
    let m = scatter((1 << a_set.len()) - 1, a_set);
    CMatrix::from_fn(d, d, |i, j| {
        // swap the A bits between row and column
        let ii = (i & !m) | (j & m);
        let jj = (j & !m) | (i & m);
        rho[(ii, jj)]
    })
}

/// Dense matrix of a Pauli string.
pub fn pauli_matrix(p: &PauliString) -> CMatrix {
    let d = 1usize << p.n();
    let mut m = CMatrix::zeros(d, d);
    add_pauli(&mut m, p, ONE);
    m
}

/// m += coeff · P, touching only the 2^n nonzero entries of P.
pub fn add_pauli(m: &mut CMatrix, p: &PauliString, coeff: Complex64) {
    let d = 1usize << p.n();
    let xm = mask_of(&p.x) as usize;
    let zm = mask_of(&p.z) as usize;
    let ph = i_pow(p.phase as u32 + (xm & zm).count_ones()) * coeff;
    for w in 0..d {
        let s = if (zm & w).count_ones() % 2 == 1 { -ph } else { ph };
        m[(w ^ xm, w)] += s;
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let e = m.clone().symmetric_eigen();
    let mut v: Vec<f64> = e.eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    v
}

/// Von Neumann entropy in bits; eigenvalues below `floor` count as zero.
pub fn von_neumann_entropy(rho: &CMatrix, floor: f64) -> f64 {
    hermitian_eigenvalues(rho)
        .into_iter()
        .filter(|&l| l > floor)
        .map(|l| -l * l.log2())
        .sum()
}

/// Apply a single-qubit Kraus-free Pauli channel Σ p_i σ_i ρ σ_i at qubit q.
pub fn apply_pauli_channel_dense(rho: &CMatrix, n: usize, q: usize, p: [f64; 4]) -> CMatrix {
    let mut out = rho * Complex64::new(p[0], 0.0);
    for (k, axis) in Axis::ALL.into_iter().enumerate() {
        if p[k + 1] == 0.0 {
            continue;
        }
        let s = pauli_matrix(&PauliString::single(n, q, axis));
        out += (&s * rho * &s) * Complex64::new(p[k + 1], 0.0);
    }
    out
}
