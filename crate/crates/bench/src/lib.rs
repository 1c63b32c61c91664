//! Shared fixtures for the benchmarks.

use gslab_core::{Clifford, Graph, Named, Register, WeightedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Register on `n` vertices where vertices 0 and 1 each have `degree` random
/// neighbours and carry a Hadamard, so a CZ between them needs frame reduction.
pub fn cz_fixture(n: usize, degree: usize, seed: u64) -> Register {
    assert!(degree + 2 <= n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for a in [0, 1] {
        while g.degree(a) < degree {
            let b = rng.random_range(2..n);
            g.add_edge(a, b);
        }
    }
    for _ in 0..n {
        let (x, y) = (rng.random_range(2..n), rng.random_range(2..n));
        if x != y {
            g.add_edge(x, y);
        }
    }
    let mut frame = vec![Clifford::identity(); n];
    frame[0] = Clifford::named(Named::H);
    frame[1] = Clifford::named(Named::H);
    Register::from_parts(g, frame, seed).expect("frame length matches")
}

/// A = {0, 1} coupled to every one of `rest` further vertices with random phases.
pub fn weighted_fixture(rest: usize, seed: u64) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wg = WeightedGraph::empty(rest + 2);
    wg.set_phase(0, 1, 1.0).expect("valid edge");
    for b in 2..rest + 2 {
        for a in [0, 1] {
            wg.set_phase(a, b, rng.random::<f64>() * 6.0 + 0.1).expect("valid edge");
        }
    }
    wg
}
