//! Stabilizer-circuit simulation by graph rewriting.
//!
//! A register holds a graph G and a local Clifford C_a per vertex and stands
//! for the state (⊗_a C_a)|G⟩ up to global phase.

use std::collections::VecDeque;
use std::sync::OnceLock;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::{Axis, Clifford, Named, SignedAxis};
use crate::dense::{dense_state_vector, DenseState};
use crate::error::{check_index, Error, Result};
use crate::graph::{Graph, VertexSet};

/// Initial product state of a fresh register.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Initial {
    Plus,
    Zero,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub vertex: usize,
    pub basis: Axis,
    pub outcome: i8,
    pub probability: f64,
}

/// One circuit instruction, 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instruction {
    Local(Clifford, usize),
    Cz(usize, usize),
    Cnot(usize, usize),
    Measure {
        axis: Axis,
        vertex: usize,
        forced: Option<i8>,
    },
}

#[derive(Clone, Debug)]
pub struct Register {
    graph: Graph,
    frame: Vec<Clifford>,
    rng: ChaCha8Rng,
    seed: u64,
}

impl Register {
    pub fn new(n: usize, initial: Initial, seed: u64) -> Self {
        let c = match initial {
            Initial::Plus => Clifford::identity(),
            Initial::Zero => Clifford::named(Named::H),
        };
        Register {
            graph: Graph::empty(n),
            frame: vec![c; n],
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    /// Register for (⊗ C_a)|G⟩.
    pub fn from_parts(graph: Graph, frame: Vec<Clifford>, seed: u64) -> Result<Self> {
        if frame.len() != graph.n() {
            return Err(Error::DimensionMismatch {
                expected: graph.n(),
                got: frame.len(),
            });
        }
        Ok(Register {
            graph,
            frame,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        })
    }

    pub fn from_graph(graph: Graph, seed: u64) -> Self {
        let n = graph.n();
        Register {
            graph,
            frame: vec![Clifford::identity(); n],
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn frame(&self) -> &[Clifford] {
        &self.frame
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// C_a ← u ∘ C_a
    pub fn apply_local_gate(&mut self, a: usize, u: Clifford) -> Result<()> {
        check_index(a, self.n())?;
        self.frame[a] = u.compose(self.frame[a]);
        Ok(())
    }

    /// Replace G by τ_v(G) and absorb the LC unitary into the frame; the
    /// represented state does not change.
    pub fn local_complement(&mut self, v: usize) -> Result<()> {
        check_index(v, self.n())?;
        self.lc(v);
        Ok(())
    }

    fn lc(&mut self, v: usize) {
        // |τ_v G⟩ = e^{-iπ/4 σx^v} Π_{b∈N_v} e^{iπ/4 σz^b} |G⟩
        self.graph.local_complement_in_place(v);
        self.frame[v] = self.frame[v].compose(Clifford::named(Named::SQX));
        let sqzd = Clifford::named(Named::SQZD);
        for b in self.graph.neighbors(v) {
            self.frame[b] = self.frame[b].compose(sqzd);
        }
    }

    /// Lowest neighbor of `a` other than `avoid`.
    fn other_neighbor(&self, a: usize, avoid: usize) -> Option<usize> {
        self.graph.neighborhood(a).iter_ones().find(|&c| c != avoid)
    }

    // Make C_a diagonal by LC at a and at neighbors other than `avoid`.
    // Requires a neighbor other than `avoid`.
    fn reduce(&mut self, a: usize, avoid: usize) {
        for &mv in reduction_word(self.frame[a]) {
            match mv {
                Move::Own => self.lc(a),
                Move::Neighbor => {
                    let c = self
                        .other_neighbor(a, avoid)
                        .expect("a neighbor survives LC at a neighbor");
                    self.lc(c);
                }
            }
        }
        debug_assert!(self.frame[a].is_diagonal());
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        check_index(a, self.n())?;
        check_index(b, self.n())?;
        if a == b {
            return Err(Error::InvalidArgument(format!("CZ on a single vertex {a}")));
        }
        if !self.frame[a].is_diagonal() && self.other_neighbor(a, b).is_some() {
            self.reduce(a, b);
        }
        if !self.frame[b].is_diagonal() && self.other_neighbor(b, a).is_some() {
            self.reduce(b, a);
        }
        if !self.frame[a].is_diagonal() && self.other_neighbor(a, b).is_some() {
            self.reduce(a, b);
        }
        let (ca, cb) = (self.frame[a], self.frame[b]);
        if ca.is_diagonal() && cb.is_diagonal() {
            self.graph.toggle_edge(a, b);
            return Ok(());
        }
        // Each side is now diagonal or has no neighbor besides its partner.
        let e = self.graph.has_edge(a, b);
        let out = cz_table_lookup(e, ca, cb);
        if out.edge != e {
            self.graph.toggle_edge(a, b);
        }
        self.frame[a] = out.ca;
        self.frame[b] = out.cb;
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        let h = Clifford::named(Named::H);
        self.apply_local_gate(target, h)?;
        self.apply_cz(control, target)?;
        self.apply_local_gate(target, h)
    }

    /// Measure σ_basis at `a`; the vertex is left isolated in the graph.
    pub fn measure_pauli(
        &mut self,
        a: usize,
        basis: Axis,
        forced: Option<i8>,
    ) -> Result<MeasurementRecord> {
        check_index(a, self.n())?;
        if let Some(f) = forced {
            if f != 1 && f != -1 {
                return Err(Error::InvalidArgument(format!("outcome {f} is not ±1")));
            }
        }
        let p = SignedAxis::new(basis, false);
        let effective = |r: &Register| r.frame[a].conjugate_inverse(p);
        let mut x_pivot = None;
        loop {
            let q = effective(self);
            match q.axis {
                Axis::Z => break,
                Axis::Y => self.lc(a),
                Axis::X => {
                    if self.graph.is_isolated(a) {
                        // |+⟩ at a: deterministic
                        let outcome = q.sign();
                        if forced.is_some_and(|f| f != outcome) {
                            return Err(Error::ImpossibleOutcome {
                                vertex: a,
                                outcome: forced.unwrap_or(outcome),
                            });
                        }
                        return Ok(MeasurementRecord {
                            vertex: a,
                            basis,
                            outcome,
                            probability: 1.0,
                        });
                    }
                    let b0 = self.graph.neighborhood(a).first_one().expect("not isolated");
                    x_pivot = Some(b0);
                    self.lc(b0);
                }
            }
        }
        let s = effective(self).sign();
        let outcome = match forced {
            Some(f) => f,
            None => {
                if self.rng.random::<bool>() {
                    1
                } else {
                    -1
                }
            }
        };
        // σz^a on |G⟩ with outcome m' = s·m
        let minus = s * outcome < 0;
        let nb = self.graph.neighbors(a);
        self.graph.isolate(a);
        let h = Clifford::named(Named::H);
        let z = Clifford::named(Named::Z);
        self.frame[a] = if minus {
            self.frame[a].compose(h).compose(z)
        } else {
            self.frame[a].compose(h)
        };
        if minus {
            for b in nb {
                self.frame[b] = self.frame[b].compose(z);
            }
        }
        if let Some(b0) = x_pivot {
            self.lc(b0);
        }
        Ok(MeasurementRecord {
            vertex: a,
            basis,
            outcome,
            probability: 0.5,
        })
    }

    pub fn apply(&mut self, ins: &Instruction) -> Result<Option<MeasurementRecord>> {
        match *ins {
            Instruction::Local(c, a) => self.apply_local_gate(a, c).map(|_| None),
            Instruction::Cz(a, b) => self.apply_cz(a, b).map(|_| None),
            Instruction::Cnot(a, b) => self.apply_cnot(a, b).map(|_| None),
            Instruction::Measure {
                axis,
                vertex,
                forced,
            } => self.measure_pauli(vertex, axis, forced).map(Some),
        }
    }

    /// Dense amplitudes of (⊗ C_a)|G⟩.
    pub fn to_dense(&self) -> Result<DenseState> {
        let mut psi = dense_state_vector(&self.graph, &VertexSet::zeros(self.n()))?;
        for (a, c) in self.frame.iter().enumerate() {
            psi.apply_1q(a, &c.unitary());
        }
        Ok(psi)
    }
}

/// Run instructions in order, stopping at the first error.
pub fn run_circuit(r: &mut Register, circuit: &[Instruction]) -> Result<Vec<MeasurementRecord>> {
    let mut out = Vec::new();
    for ins in circuit {
        if let Some(m) = r.apply(ins)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// Dense reference for one instruction. Measurements return the outcome
/// probability and project; `None` outcome picks +1.
pub fn apply_dense(psi: &mut DenseState, ins: &Instruction) -> f64 {
    match *ins {
        Instruction::Local(c, a) => {
            psi.apply_1q(a, &c.unitary());
            1.0
        }
        Instruction::Cz(a, b) => {
            psi.apply_cz(a, b);
            1.0
        }
        Instruction::Cnot(a, b) => {
            psi.apply_cnot(a, b);
            1.0
        }
        Instruction::Measure {
            axis,
            vertex,
            forced,
        } => psi.project(vertex, axis, forced.unwrap_or(1)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    /// LC at the vertex itself: C ← C ∘ SQX
    Own,
    /// LC at a neighbor: C ← C ∘ SQZD
    Neighbor,
}

fn reduction_word(c: Clifford) -> &'static [Move] {
    static WORDS: OnceLock<Vec<Vec<Move>>> = OnceLock::new();
    let words = WORDS.get_or_init(|| {
        let sqx = Clifford::named(Named::SQX);
        let sqzd = Clifford::named(Named::SQZD);
        (0..Clifford::COUNT)
            .map(|i| {
                let start = Clifford::from_index(i);
                let mut seen = [false; Clifford::COUNT];
                let mut q = VecDeque::from([(start, Vec::new())]);
                seen[i] = true;
                while let Some((c, w)) = q.pop_front() {
                    if c.is_diagonal() {
                        return w;
                    }
                    for (mv, g) in [(Move::Own, sqx), (Move::Neighbor, sqzd)] {
                        let d = c.compose(g);
                        if !seen[d.index()] {
                            seen[d.index()] = true;
                            let mut w2 = w.clone();
                            w2.push(mv);
                            q.push_back((d, w2));
                        }
                    }
                }
                unreachable!("SQX and SQZD generate the group")
            })
            .collect()
    });
    &words[c.index()]
}

/// Length of the longest frame-reduction word.
pub fn max_reduction_length() -> usize {
    Clifford::all().map(|c| reduction_word(c).len()).max().unwrap_or(0)
}

/// Output of the two-vertex CZ table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CzEntry {
    pub edge: bool,
    pub ca: Clifford,
    pub cb: Clifford,
}

fn two_qubit_state(edge: bool, ca: Clifford, cb: Clifford) -> [Complex64; 4] {
    let h = Complex64::new(0.5, 0.0);
    let mut v = [h; 4];
    if edge {
        v[3] = -h;
    }
    let apply = |v: &mut [Complex64; 4], q: usize, u: [[Complex64; 2]; 2]| {
        let m = 1 << q;
        for i in 0..4 {
            if i & m == 0 {
                let (a0, a1) = (v[i], v[i | m]);
                v[i] = u[0][0] * a0 + u[0][1] * a1;
                v[i | m] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    };
    apply(&mut v, 0, ca.unitary());
    apply(&mut v, 1, cb.unitary());
    v
}

fn same_ray(u: &[Complex64; 4], v: &[Complex64; 4]) -> bool {
    let ip: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    (ip.norm() - 1.0).abs() < 1e-9
}

/// (edge, C_a, C_b) ↦ representation of CZ (C_a ⊗ C_b)|edge⟩, keeping each
/// side diagonal when it enters diagonal.
pub fn cz_table_lookup(edge: bool, ca: Clifford, cb: Clifford) -> CzEntry {
    static TABLE: OnceLock<Vec<CzEntry>> = OnceLock::new();
    let table = TABLE.get_or_init(build_cz_table);
    table[cz_key(edge, ca, cb)]
}

fn cz_key(edge: bool, ca: Clifford, cb: Clifford) -> usize {
    (edge as usize * Clifford::COUNT + ca.index()) * Clifford::COUNT + cb.index()
}

fn build_cz_table() -> Vec<CzEntry> {
    let mut cands = Vec::with_capacity(2 * 24 * 24);
    for edge in [false, true] {
        for ca in Clifford::all() {
            for cb in Clifford::all() {
                cands.push((CzEntry { edge, ca, cb }, two_qubit_state(edge, ca, cb)));
            }
        }
    }
    let mut table = vec![
        CzEntry {
            edge: false,
            ca: Clifford::identity(),
            cb: Clifford::identity(),
        };
        cands.len()
    ];
    for (inp, state) in &cands {
        let mut target = *state;
        // CZ flips the sign of |11⟩
        target[3] = -target[3];
        let keep_a = inp.ca.is_diagonal();
        let keep_b = inp.cb.is_diagonal();
        let best = cands
            .iter()
            .filter(|(c, _)| (!keep_a || c.ca.is_diagonal()) && (!keep_b || c.cb.is_diagonal()))
            .filter(|(_, s)| same_ray(s, &target))
            .map(|(c, _)| *c)
            // prefer leaving frames untouched where possible
            .min_by_key(|c| ((c.ca != inp.ca) as u8 + (c.cb != inp.cb) as u8, c.edge != inp.edge));
        table[cz_key(inp.edge, inp.ca, inp.cb)] =
            best.expect("every two-vertex CZ input has a diagonal-preserving representation");
    }
    table
}
