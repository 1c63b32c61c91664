//! Stabilizer presentations, the graph standard form and reduced states of
//! graph states.

use num_complex::Complex64;

use crate::clifford::{Axis, Clifford, Named};
use crate::dense::{add_pauli, CMatrix};
use crate::error::{check_limit, Error, Result};
use crate::f2::{self, BitMatrix, BitVec};
use crate::graph::{Graph, VertexSet};
use crate::pauli::PauliString;

/// N generators of a full-rank stabilizer on N qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    rows: Vec<PauliString>,
}

impl GeneratorMatrix {
    /// Wrap generators after checking shape and hermiticity. Commutation and
    /// independence are checked by [`GeneratorMatrix::validate`].
    pub fn from_rows(rows: Vec<PauliString>) -> Result<Self> {
        let n = rows.len();
        for (k, r) in rows.iter().enumerate() {
            if r.n() != n {
                return Err(Error::MalformedStabilizer(format!(
                    "generator {} acts on {} qubits, expected {n}",
                    k + 1,
                    r.n()
                )));
            }
            if !r.is_hermitian() {
                return Err(Error::MalformedStabilizer(format!(
                    "generator {} has an imaginary phase",
                    k + 1
                )));
            }
        }
        Ok(GeneratorMatrix { rows })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[PauliString] {
        &self.rows
    }

    /// The N×2N block matrix (X|Z).
    pub fn xz(&self) -> BitMatrix {
        let n = self.n();
        let rows = self
            .rows
            .iter()
            .map(|r| binary(r, n))
            .collect();
        BitMatrix::from_rows(2 * n, rows)
    }

    /// `true` for generators carrying a minus sign.
    pub fn signs(&self) -> Vec<bool> {
        self.rows.iter().map(|r| r.sign() < 0).collect()
    }

    /// Rows must pairwise commute and be independent.
    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in self.rows.iter().enumerate().skip(i + 1) {
                if !a.commutes_with(b) {
                    return Err(Error::MalformedStabilizer(format!(
                        "generators {} and {} anticommute",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let r = f2::rank(&self.xz());
        if r < self.n() {
            return Err(Error::MalformedStabilizer(format!(
                "generators have rank {r}, expected {}",
                self.n()
            )));
        }
        Ok(())
    }

    /// Conjugate every generator by the local Clifford `frame[q]` at each q.
    pub fn conjugated(&self, frame: &[Clifford]) -> GeneratorMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                for (q, &c) in frame.iter().enumerate() {
                    r.conjugate_at(q, c);
                }
                r
            })
            .collect();
        GeneratorMatrix { rows }
    }

    /// Product of the generators selected by `mask`, with exact phase.
    pub fn element(&self, mask: &BitVec) -> PauliString {
        let mut p = PauliString::identity(self.n());
        for k in mask.iter_ones() {
            p = p.mul(&self.rows[k]);
        }
        p
    }
}

fn binary(p: &PauliString, n: usize) -> BitVec {
    let mut v = BitVec::zeros(2 * n);
    for q in p.x.iter_ones() {
        v.set(q, true);
    }
    for q in p.z.iter_ones() {
        v.set(n + q, true);
    }
    v
}

/// K_a = σx^a σz^{N_a}, all signs +.
pub fn correlation_operator(g: &Graph, a: usize) -> PauliString {
    let n = g.n();
    PauliString::from_xz(BitVec::from_indices(n, &[a]), g.neighborhood(a).clone())
}

/// The standard form (1|Γ).
pub fn generator_matrix(g: &Graph) -> GeneratorMatrix {
    GeneratorMatrix {
        rows: (0..g.n()).map(|a| correlation_operator(g, a)).collect(),
    }
}

/// Stabilizer element K^U = Π_{a∈U} K_a = ±σx^U σz^{ΓU}.
pub fn stabilizer_element(g: &Graph, u: &VertexSet) -> PauliString {
    let mut p = PauliString::identity(g.n());
    for a in u.iter_ones() {
        p = p.mul(&correlation_operator(g, a));
    }
    p
}

/// Whether `a` and `b` generate the same signed stabilizer group.
pub fn same_stabilizer(a: &GeneratorMatrix, b: &GeneratorMatrix) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    a.validate()?;
    b.validate()?;
    // A maximal abelian group contains every Pauli commuting with all of it,
    // up to sign.
    for r in b.rows() {
        if a.rows().iter().any(|s| !s.commutes_with(r)) {
            return Ok(false);
        }
    }
    let n = a.n();
    // Columns of `basis` are the binary generators of a.
    let basis = a.xz().transpose();
    for r in b.rows() {
        let coeffs = match f2::solve(&basis, &binary(r, n)) {
            Some(c) => c,
            None => return Ok(false),
        };
        if a.element(&coeffs).phase != r.phase {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Local Clifford frame C and graph G with C S(m) C† = S(G).
///
/// Equivalently the stabilizer state of `m` is (⊗ C_q†)|G⟩.
pub fn stabilizer_to_graph(m: &GeneratorMatrix) -> Result<(Graph, Vec<Clifford>)> {
    m.validate()?;
    let n = m.n();
    let mut rows: Vec<PauliString> = m.rows().to_vec();
    let mut frame = vec![Clifford::identity(); n];

    let conj = |rows: &mut Vec<PauliString>, frame: &mut Vec<Clifford>, q: usize, c: Clifford| {
        for r in rows.iter_mut() {
            r.conjugate_at(q, c);
        }
        frame[q] = c.compose(frame[q]);
    };

    // Row-echelon on X; the remaining rows are Z-only.
    let k = echelon(&mut rows, |r, q| r.x.get(q), 0);
    if k < n {
        // Hadamards on the pivot columns of the Z-only block make X full
        // rank; commutation forces the other rows to have full X rank off
        // those columns.
        let pivots = echelon_pivots(&mut rows, |r, q| r.z.get(q), k);
        let h = Clifford::named(Named::H);
        for q in pivots {
            conj(&mut rows, &mut frame, q, h);
        }
    }
    let k = gauss_jordan(&mut rows, n);
    debug_assert_eq!(k, n);
    if k < n {
        return Err(Error::MalformedStabilizer("X block not invertible".into()));
    }
    // Now row i has X exactly at qubit i. Turn diagonal Y into X.
    let y_to_x = Clifford::all()
        .find(|c| {
            let z = c.image(Axis::Z);
            let y = c.image(Axis::Y);
            z.axis == Axis::Z && !z.negative && y.axis == Axis::X
        })
        .expect("phase gate exists");
    for q in 0..n {
        if rows[q].z.get(q) {
            conj(&mut rows, &mut frame, q, y_to_x);
        }
    }
    let zc = Clifford::named(Named::Z);
    for q in 0..n {
        if rows[q].sign() < 0 {
            conj(&mut rows, &mut frame, q, zc);
        }
    }
    let mut adj = BitMatrix::zeros(n, n);
    for (q, r) in rows.iter().enumerate() {
        *adj.row_mut(q) = r.z.clone();
    }
    let g = Graph::from_adjacency(adj)
        .map_err(|e| Error::MalformedStabilizer(format!("standard form is not a graph: {e}")))?;
    debug_assert!(same_stabilizer(&m.conjugated(&frame), &generator_matrix(&g)).unwrap_or(false));
    Ok((g, frame))
}

// Row echelon on the bit selected by `bit`, starting at row `start`.
// Returns the number of pivot rows found (plus `start`).
fn echelon(rows: &mut [PauliString], bit: impl Fn(&PauliString, usize) -> bool, start: usize) -> usize {
    echelon_inner(rows, &bit, start).0
}

fn echelon_pivots(
    rows: &mut [PauliString],
    bit: impl Fn(&PauliString, usize) -> bool,
    start: usize,
) -> Vec<usize> {
    echelon_inner(rows, &bit, start).1
}

fn echelon_inner(
    rows: &mut [PauliString],
    bit: &dyn Fn(&PauliString, usize) -> bool,
    start: usize,
) -> (usize, Vec<usize>) {
    let n = rows.first().map_or(0, |r| r.n());
    let mut r = start;
    let mut pivots = Vec::new();
    for q in 0..n {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| bit(&rows[i], q)) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if bit(&rows[i], q) {
                rows[i] = rows[i].mul(&rows[r]);
            }
        }
        pivots.push(q);
        r += 1;
    }
    (r, pivots)
}

// Reduce the X block to the identity. Returns its rank.
fn gauss_jordan(rows: &mut [PauliString], n: usize) -> usize {
    for q in 0..n {
        let Some(p) = (q..rows.len()).find(|&i| rows[i].x.get(q)) else {
            return q;
        };
        rows.swap(q, p);
        for i in 0..rows.len() {
            if i != q && rows[i].x.get(q) {
                rows[i] = rows[i].mul(&rows[q]);
            }
        }
    }
    n
}

/// Basis of the stabilizer subgroup supported on A, as elements K^U with U ⊆ A
/// and Γ_BA U = 0 (U given as a vertex set of the full graph).
pub fn local_subgroup_basis(g: &Graph, a_set: &VertexSet) -> Vec<VertexSet> {
    let n = g.n();
    let a: Vec<usize> = a_set.iter_ones().collect();
    let b: Vec<usize> = (0..n).filter(|&v| !a_set.get(v)).collect();
    let gba = g.cut_matrix(&b, &a);
    f2::kernel_basis(&gba)
        .into_iter()
        .map(|k| {
            let mut u = VertexSet::zeros(n);
            for i in k.iter_ones() {
                u.set(a[i], true);
            }
            u
        })
        .collect()
}

/// All elements of S_A restricted to the qubits of A (ascending order).
pub fn local_subgroup(g: &Graph, a_set: &VertexSet) -> Vec<PauliString> {
    let a: Vec<usize> = a_set.iter_ones().collect();
    let basis = local_subgroup_basis(g, a_set);
    f2::span(&basis, g.n())
        .iter()
        .map(|u| {
            let p = stabilizer_element(g, u);
            PauliString {
                x: p.x.select(&a),
                z: p.z.select(&a),
                phase: p.phase,
            }
        })
        .collect()
}

/// Largest |A| accepted by [`reduced_density_matrix_simple`].
pub const REDUCED_LIMIT: usize = 10;

/// ρ_G^A = 2^{-|A|} Σ_{σ∈S_A} σ, qubits of A in ascending order.
pub fn reduced_density_matrix_simple(g: &Graph, a_set: &VertexSet) -> Result<CMatrix> {
    if a_set.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: a_set.len(),
        });
    }
    let k = a_set.count_ones();
    check_limit("subsystem size", k, REDUCED_LIMIT)?;
    let d = 1usize << k;
    let norm = Complex64::new(1.0 / d as f64, 0.0);
    let mut rho = CMatrix::zeros(d, d);
    for p in local_subgroup(g, a_set) {
        add_pauli(&mut rho, &p, norm);
    }
    Ok(rho)
}
