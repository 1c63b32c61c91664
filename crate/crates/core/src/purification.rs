//! Recurrence purification of two-colorable graph states acting on the
//! graph-diagonal coefficients λ_{W_A,W_B}.

use crate::decoherence::{uniform_channel_lambdas, walsh_hadamard, GraphDiagonalState, PauliChannel};
use crate::dense::scatter;
use crate::error::{check_limit, Error, Result};
use crate::graph::{Graph, VertexSet};

/// Largest graph accepted by [`threshold_search`].
pub const THRESHOLD_LIMIT: usize = 12;

/// Bisection tolerance of [`threshold_search`] on the channel parameter.
pub const THRESHOLD_TOLERANCE: f64 = 1e-3;

/// Graph-diagonal state together with a two-coloring (A, B) of its graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ColoredDiagonalState {
    state: GraphDiagonalState,
    a: Vec<usize>,
    b: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subprotocol {
    P1,
    P2,
}

impl ColoredDiagonalState {
    /// Uses the coloring found by [`Graph::two_coloring`].
    pub fn new(state: GraphDiagonalState) -> Result<Self> {
        let (a, _) = state
            .graph()
            .two_coloring()
            .parts()
            .map(|(a, b)| (a.clone(), b.clone()))
            .ok_or(Error::NotTwoColorable)?;
        Self::with_coloring(state, &a)
    }

    /// Coloring with color class A given; B is the complement.
    pub fn with_coloring(state: GraphDiagonalState, a_set: &VertexSet) -> Result<Self> {
        let g = state.graph();
        let n = g.n();
        if a_set.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: a_set.len() });
        }
        let a: Vec<usize> = a_set.iter_ones().collect();
        let b: Vec<usize> = (0..n).filter(|v| !a_set.get(*v)).collect();
        for (x, y) in g.edges() {
            if a_set.get(x) == a_set.get(y) {
                return Err(Error::NotTwoColorable);
            }
        }
        Ok(ColoredDiagonalState { state, a, b })
    }

    pub fn state(&self) -> &GraphDiagonalState {
        &self.state
    }

    pub fn into_state(self) -> GraphDiagonalState {
        self.state
    }

    pub fn color_a(&self) -> &[usize] {
        &self.a
    }

    pub fn color_b(&self) -> &[usize] {
        &self.b
    }

    pub fn fidelity(&self) -> f64 {
        self.state.fidelity()
    }

    /// Same state with the two color classes exchanged.
    pub fn swapped(&self) -> Self {
        ColoredDiagonalState {
            state: self.state.clone(),
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    /// λ_{W_A,W_B} with W_A, W_B indexing subsets of A and B in increasing order.
    pub fn coefficient(&self, wa: usize, wb: usize) -> f64 {
        self.state.lambda()[scatter(wa, &self.a) | scatter(wb, &self.b)]
    }
}

// λ̃_{U_K,U_S} ∝ Σ_{W_S+V_S=U_S} λ_{U_K,W_S} λ_{U_K,V_S}: the kept color K
// must agree between the copies and the summed color S is convolved.
fn recurrence(lambda: &[f64], keep: &[usize], sum: &[usize]) -> (Vec<f64>, f64) {
    let ds = 1usize << sum.len();
    let mut out = vec![0.0; lambda.len()];
    let mut total = 0.0;
    let mut f = vec![0.0; ds];
    for uk in 0..1usize << keep.len() {
        let base = scatter(uk, keep);
        for (ws, x) in f.iter_mut().enumerate() {
            *x = lambda[base | scatter(ws, sum)];
        }
        let marginal: f64 = f.iter().sum();
        total += marginal * marginal;
        // XOR convolution via the Walsh transform; its inverse carries 1/ds
        walsh_hadamard(&mut f);
        f.iter_mut().for_each(|x| *x *= *x);
        walsh_hadamard(&mut f);
        for (us, &x) in f.iter().enumerate() {
            out[base | scatter(us, sum)] = (x / ds as f64).max(0.0);
        }
    }
    (out, total)
}

/// One sub-protocol on two copies. Returns the kept state and the
/// probability that the measurement outcomes pass the parity check.
pub fn purification_step(s: &ColoredDiagonalState, which: Subprotocol) -> Result<(ColoredDiagonalState, f64)> {
    let (keep, sum) = match which {
        Subprotocol::P1 => (&s.a, &s.b),
        Subprotocol::P2 => (&s.b, &s.a),
    };
    let (mut lambda, k) = recurrence(s.state.lambda(), keep, sum);
    if k <= 0.0 {
        return Err(Error::InvalidArgument("success probability is zero".into()));
    }
    let norm: f64 = lambda.iter().sum();
    lambda.iter_mut().for_each(|x| *x /= norm);
    let state = GraphDiagonalState::new(s.state.graph().clone(), lambda)?;
    Ok((
        ColoredDiagonalState {
            state,
            a: s.a.clone(),
            b: s.b.clone(),
        },
        k,
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PurifyOptions {
    /// Sub-protocols applied in turn, repeated cyclically.
    pub schedule: Vec<Subprotocol>,
    pub max_rounds: usize,
    /// Stop once the fidelity exceeds 1 - target_infidelity.
    pub target_infidelity: f64,
    /// Strength ε of the depolarizing noise applied to every qubit before
    /// each step (the channel keeps the state with weight 1 - ε).
    pub local_noise: f64,
}

impl Default for PurifyOptions {
    fn default() -> Self {
        PurifyOptions {
            schedule: vec![Subprotocol::P1, Subprotocol::P2],
            max_rounds: 100,
            target_infidelity: 1e-6,
            local_noise: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundRecord {
    pub round: usize,
    pub which: Subprotocol,
    pub fidelity: f64,
    pub success_probability: f64,
}

#[derive(Clone, Debug)]
pub struct PurifyTrace {
    pub initial_fidelity: f64,
    pub rounds: Vec<RoundRecord>,
    pub converged: bool,
    pub final_state: ColoredDiagonalState,
}

fn apply_local_noise(s: &mut ColoredDiagonalState, eps: f64) -> Result<()> {
    if eps == 0.0 {
        return Ok(());
    }
    let ch = PauliChannel::depolarizing(1.0 - eps)?;
    let mut st = s.state.clone();
    for a in 0..st.n() {
        st.apply_channel(a, &ch)?;
    }
    s.state = st;
    Ok(())
}

/// Iterate the schedule until the fidelity target or `max_rounds` is reached.
pub fn purify_iterate(s: &ColoredDiagonalState, opts: &PurifyOptions) -> Result<PurifyTrace> {
    if opts.schedule.is_empty() {
        return Err(Error::InvalidArgument("empty purification schedule".into()));
    }
    if !(0.0..=1.0).contains(&opts.local_noise) {
        return Err(Error::InvalidArgument(format!("local noise {} outside [0, 1]", opts.local_noise)));
    }
    let goal = 1.0 - opts.target_infidelity;
    let mut cur = s.clone();
    let mut rounds = Vec::new();
    let mut converged = cur.fidelity() > goal;
    for round in 0..opts.max_rounds {
        if converged {
            break;
        }
        let which = opts.schedule[round % opts.schedule.len()];
        apply_local_noise(&mut cur, opts.local_noise)?;
        let (next, k) = purification_step(&cur, which)?;
        cur = next;
        rounds.push(RoundRecord {
            round: round + 1,
            which,
            fidelity: cur.fidelity(),
            success_probability: k,
        });
        converged = cur.fidelity() > goal;
    }
    Ok(PurifyTrace {
        initial_fidelity: s.fidelity(),
        rounds,
        converged,
        final_state: cur,
    })
}

/// Pure graph state of `g` sent through depolarizing(p) on every qubit.
pub fn depolarized_input(g: &Graph, p: f64) -> Result<ColoredDiagonalState> {
    let ch = PauliChannel::depolarizing(p)?;
    ColoredDiagonalState::new(uniform_channel_lambdas(g, &ch)?)
}

/// Smallest depolarizing parameter p (within [`THRESHOLD_TOLERANCE`]) for
/// which the iteration reaches the fidelity target; 1 if even p = 1 fails.
pub fn threshold_search(g: &Graph, opts: &PurifyOptions) -> Result<f64> {
    check_limit("purification graph size", g.n(), THRESHOLD_LIMIT)?;
    if !g.is_two_colorable() {
        return Err(Error::NotTwoColorable);
    }
    let converges = |p: f64| -> Result<bool> { Ok(purify_iterate(&depolarized_input(g, p)?, opts)?.converged) };
    if !converges(1.0)? {
        return Ok(1.0);
    }
    if converges(0.0)? {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > THRESHOLD_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if converges(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

