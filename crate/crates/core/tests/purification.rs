use gslab_core::decoherence::twirl_to_graph_diagonal;
use gslab_core::purification::{
    depolarized_input, purification_step, purify_iterate, threshold_search, PurifyOptions,
};
use gslab_core::{ColoredDiagonalState, Error, Graph, GraphDiagonalState, Subprotocol, VertexSet};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{bipartite_connected, relabel, two_copy_oracle};

fn random_lambda(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut l: Vec<f64> = (0..1usize << n).map(|_| rng.random::<f64>().powi(2)).collect();
    let s: f64 = l.iter().sum();
    l.iter_mut().for_each(|x| *x /= s);
    l
}

fn ghz3_at(f: f64) -> ColoredDiagonalState {
    let g = Graph::star(3);
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if depolarized_input(&g, m).unwrap().fidelity() < f {
            lo = m;
        } else {
            hi = m;
        }
    }
    depolarized_input(&g, hi).unwrap()
}

#[test]
fn one_step_matches_two_copy_simulation() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let graphs = bipartite_connected(4);
    assert_eq!(graphs.len(), 1 + 1 + 3);
    let mut checked = 0;
    for g in &graphs {
        for _ in 0..4 {
            let g = relabel(&mut rng, g);
            let n = g.n();
            let s = ColoredDiagonalState::new(GraphDiagonalState::new(g.clone(), random_lambda(&mut rng, n)).unwrap())
                .unwrap();
            for which in [Subprotocol::P1, Subprotocol::P2] {
                let keep = match which {
                    Subprotocol::P1 => s.color_a(),
                    Subprotocol::P2 => s.color_b(),
                };
                let kept = two_copy_oracle(s.state(), keep);
                let k = kept.trace().re;
                let (next, prob) = purification_step(&s, which).unwrap();
                assert!((prob - k).abs() < 1e-12, "{prob} {k}");
                let normalized = kept / Complex64::new(k, 0.0);
                let oracle = twirl_to_graph_diagonal(&normalized, &g).unwrap();
                for (x, y) in next.state().lambda().iter().zip(oracle.lambda()) {
                    assert!((x - y).abs() < 1e-12);
                }
                // the kept state is graph diagonal without any twirl
                assert!((next.state().to_density_matrix().unwrap() - normalized).norm() < 1e-12);
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 40);
}

#[test]
fn fixed_point_and_uniform() {
    for g in [Graph::star(4), Graph::path(5), Graph::lattice(&[2, 3])] {
        let n = g.n();
        let pure = ColoredDiagonalState::new(GraphDiagonalState::pure(g.clone()).unwrap()).unwrap();
        for which in [Subprotocol::P1, Subprotocol::P2] {
            let (next, k) = purification_step(&pure, which).unwrap();
            assert_eq!(k, 1.0);
            assert_eq!(next.state().lambda(), pure.state().lambda());
        }
        let opts = PurifyOptions {
            max_rounds: 6,
            target_infidelity: 0.0,
            ..Default::default()
        };
        let t = purify_iterate(&pure, &opts).unwrap();
        assert_eq!(t.rounds.len(), 6);
        assert!(t.rounds.iter().all(|r| r.fidelity == 1.0 && r.success_probability == 1.0));
        let uni = ColoredDiagonalState::new(GraphDiagonalState::uniform(g).unwrap()).unwrap();
        let (next, _) = purification_step(&uni, Subprotocol::P1).unwrap();
        let u = 1.0 / (1u64 << n) as f64;
        assert!(next.state().lambda().iter().all(|x| (x - u).abs() < 1e-15));
    }
}

#[test]
fn ghz3_purifies() {
    let s = ghz3_at(0.85);
    assert!((s.fidelity() - 0.85).abs() < 1e-12);
    let opts = PurifyOptions {
        max_rounds: 10,
        target_infidelity: 1e-3,
        ..Default::default()
    };
    let t = purify_iterate(&s, &opts).unwrap();
    assert!(t.converged);
    let mut last = t.initial_fidelity;
    for r in &t.rounds {
        assert!(r.fidelity > last);
        assert!(r.success_probability > 0.0 && r.success_probability <= 1.0);
        last = r.fidelity;
    }
    assert!(t.rounds.iter().take(10).any(|r| r.fidelity > 0.99));
    assert!(last > 0.999);
}

#[test]
fn low_fidelity_decays_to_uniform() {
    let g = Graph::star(3);
    let s = depolarized_input(&g, 0.3).unwrap();
    let opts = PurifyOptions {
        max_rounds: 12,
        ..Default::default()
    };
    let t = purify_iterate(&s, &opts).unwrap();
    assert!(!t.converged);
    let mut last = t.initial_fidelity;
    for r in &t.rounds {
        // strictly down until it sits on the uniform value 1/8
        assert!(r.fidelity < last || (last - 0.125).abs() < 1e-9);
        last = r.fidelity;
    }
    assert!((last - 0.125).abs() < 1e-6);
}

#[test]
fn cluster_thresholds_do_not_depend_on_length() {
    let opts = PurifyOptions::default();
    let th: Vec<f64> = [4, 6, 8].iter().map(|&n| threshold_search(&Graph::path(n), &opts).unwrap()).collect();
    let (lo, hi) = th.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi / lo < 1.1, "{th:?}");
    assert!(th.iter().all(|&p| p > 0.0 && p < 1.0));
    // GHZ states tolerate less noise as they grow
    let stars: Vec<f64> = (3..=6).map(|n| threshold_search(&Graph::star(n), &opts).unwrap()).collect();
    assert!(stars.windows(2).all(|w| w[1] >= w[0]), "{stars:?}");
    assert!(stars[3] > stars[0] + 0.05);
}

#[test]
fn noiseless_and_noisy_channels() {
    let g = Graph::path(4);
    let opts = PurifyOptions::default();
    assert!(purify_iterate(&depolarized_input(&g, 1.0).unwrap(), &opts).unwrap().converged);
    assert!(!purify_iterate(&depolarized_input(&g, 0.05).unwrap(), &opts).unwrap().converged);
    // noisy local operations leave a fidelity plateau below one
    let noisy = PurifyOptions {
        local_noise: 0.01,
        max_rounds: 40,
        ..Default::default()
    };
    let t = purify_iterate(&ghz3_at(0.85), &noisy).unwrap();
    assert!(!t.converged);
    let tail: Vec<f64> = t.rounds.iter().rev().take(4).map(|r| r.fidelity).collect();
    assert!(tail.iter().all(|&f| f > 0.95 && f < 0.999));
    assert!(tail[0] > 0.85);
    assert!(threshold_search(&g, &noisy).unwrap() == 1.0);
    assert!(matches!(threshold_search(&Graph::ring(5), &opts), Err(Error::NotTwoColorable)));
    assert!(threshold_search(&Graph::path(13), &opts).is_err());
}

#[test]
fn two_colorability_is_required() {
    let tri = GraphDiagonalState::pure(Graph::ring(3)).unwrap();
    assert!(matches!(ColoredDiagonalState::new(tri), Err(Error::NotTwoColorable)));
    let path = GraphDiagonalState::pure(Graph::path(3)).unwrap();
    let bad = VertexSet::from_indices(3, &[0, 1]);
    assert!(matches!(ColoredDiagonalState::with_coloring(path, &bad), Err(Error::NotTwoColorable)));
    let bad_opts = PurifyOptions {
        schedule: vec![],
        ..Default::default()
    };
    let s = depolarized_input(&Graph::path(3), 0.9).unwrap();
    assert!(purify_iterate(&s, &bad_opts).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn swapping_colors_swaps_subprotocols(seed in any::<u64>(), pick in 0usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let graphs = bipartite_connected(6);
        let g = relabel(&mut rng, &graphs[pick % graphs.len()]);
        let n = g.n();
        let s = ColoredDiagonalState::new(GraphDiagonalState::new(g, random_lambda(&mut rng, n)).unwrap()).unwrap();
        let (x, kx) = purification_step(&s, Subprotocol::P1).unwrap();
        let (y, ky) = purification_step(&s.swapped(), Subprotocol::P2).unwrap();
        prop_assert_eq!(kx, ky);
        prop_assert_eq!(x.state().lambda(), y.state().lambda());
        let l = x.state().lambda();
        prop_assert!(l.iter().all(|&v| v >= 0.0));
        prop_assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
