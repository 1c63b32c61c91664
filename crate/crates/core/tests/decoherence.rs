use gslab_core::decoherence::{
    critical_depolarizing_p, cut_critical_p, kappa_t, pair_distillability_threshold,
    partial_transpose_spectrum, partial_transpose_spectrum_seeded, pauli_channel_lambdas,
    pauli_channel_lambdas_closed_form, ppt_report, twirl_to_graph_diagonal, uniform_channel_lambdas,
    PptMode, SpectrumCache, PPT_TOLERANCE,
};
use gslab_core::dense::{
    apply_pauli_channel_dense, dense_state_vector, hermitian_eigenvalues, partial_transpose, pauli_matrix,
    CMatrix,
};
use gslab_core::stabilizer::stabilizer_element;
use gslab_core::{Graph, GraphDiagonalState, PauliChannel, VertexSet};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{random_graph, random_channel, project_dense};

fn random_lambda(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut l: Vec<f64> = (0..1usize << n).map(|_| rng.random::<f64>().powi(3)).collect();
    let s: f64 = l.iter().sum();
    l.iter_mut().for_each(|x| *x /= s);
    l
}

fn graph_density(g: &Graph) -> CMatrix {
    dense_state_vector(g, &VertexSet::zeros(g.n())).unwrap().density_matrix()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn cut_set(n: usize, mask: u64) -> VertexSet {
    VertexSet::from_mask(n, mask)
}

#[test]
fn single_qubit_depolarizing() {
    let g = Graph::empty(1);
    for p in [0.0, 0.3, 0.8, 1.0] {
        let ch = PauliChannel::depolarizing(p).unwrap();
        let s = uniform_channel_lambdas(&g, &ch).unwrap();
        assert!(close(s.lambda(), &[(1.0 + p) / 2.0, (1.0 - p) / 2.0], 1e-15));
        let c = pauli_channel_lambdas_closed_form(&g, &ch).unwrap();
        assert!(close(c.lambda(), s.lambda(), 1e-15));
        let rho = apply_pauli_channel_dense(&graph_density(&g), 1, 0, ch.probabilities());
        assert!(close(&project_dense(&rho, &g), s.lambda(), 1e-12));
    }
    let s = uniform_channel_lambdas(&Graph::ring(5), &PauliChannel::identity()).unwrap();
    assert_eq!(s.fidelity(), 1.0);
}

#[test]
fn channel_lambdas_match_dense_application() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let g = random_graph(&mut rng, n, 0.5);
        let ch = random_channel(&mut rng);
        let mut rho = graph_density(&g);
        for q in 0..n {
            rho = apply_pauli_channel_dense(&rho, n, q, ch.probabilities());
        }
        let oracle = project_dense(&rho, &g);
        let closed = pauli_channel_lambdas_closed_form(&g, &ch).unwrap();
        let conv = uniform_channel_lambdas(&g, &ch).unwrap();
        assert!(close(closed.lambda(), &oracle, 1e-12));
        assert!(close(conv.lambda(), &oracle, 1e-12));
        // the noisy state is graph diagonal
        assert!((conv.to_density_matrix().unwrap() - &rho).norm() < 1e-12);
    }
}

#[test]
fn presets_and_per_vertex_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    for _ in 0..40 {
        let n = rng.random_range(1..=5);
        let g = random_graph(&mut rng, n, 0.5);
        let p = rng.random::<f64>();
        for ch in [
            PauliChannel::depolarizing(p).unwrap(),
            PauliChannel::dephasing(p).unwrap(),
            PauliChannel::bitflip(p).unwrap(),
        ] {
            let closed = pauli_channel_lambdas_closed_form(&g, &ch).unwrap();
            let conv = uniform_channel_lambdas(&g, &ch).unwrap();
            assert!(close(closed.lambda(), conv.lambda(), 1e-12));
        }
        let chans: Vec<PauliChannel> = (0..n).map(|_| random_channel(&mut rng)).collect();
        let s = pauli_channel_lambdas(&g, &chans).unwrap();
        let mut rho = graph_density(&g);
        for (q, c) in chans.iter().enumerate() {
            rho = apply_pauli_channel_dense(&rho, n, q, c.probabilities());
        }
        assert!(close(s.lambda(), &project_dense(&rho, &g), 1e-12));
    }
    let zero_p0 = PauliChannel::new([0.0, 0.5, 0.25, 0.25]).unwrap();
    let g = Graph::path(3);
    let closed = pauli_channel_lambdas_closed_form(&g, &zero_p0).unwrap();
    assert!(close(closed.lambda(), uniform_channel_lambdas(&g, &zero_p0).unwrap().lambda(), 1e-12));
    assert!(PauliChannel::depolarizing(1.5).is_err());
    assert!(PauliChannel::new([0.5, 0.5, 0.5, -0.5]).is_err());
}

#[test]
fn depolarizing_composes_multiplicatively() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..50 {
        let n = rng.random_range(1..=6);
        let g = random_graph(&mut rng, n, 0.5);
        let (p, q) = (rng.random::<f64>(), rng.random::<f64>());
        let mut s = uniform_channel_lambdas(&g, &PauliChannel::depolarizing(p).unwrap()).unwrap();
        for a in 0..n {
            s.apply_channel(a, &PauliChannel::depolarizing(q).unwrap()).unwrap();
        }
        let once = uniform_channel_lambdas(&g, &PauliChannel::depolarizing(p * q).unwrap()).unwrap();
        assert!(close(s.lambda(), once.lambda(), 1e-13));
        assert!((s.lambda().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn twirl_equals_stabilizer_average() {
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    for _ in 0..30 {
        let n = rng.random_range(1..=5);
        let g = random_graph(&mut rng, n, 0.5);
        // random density matrix A A† / tr
        let d = 1usize << n;
        let a = CMatrix::from_fn(d, d, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let mut rho = &a * a.adjoint();
        let tr = rho.trace();
        rho /= tr;
        let mut avg = CMatrix::zeros(d, d);
        for u in 0..1u64 << n {
            let s = pauli_matrix(&stabilizer_element(&g, &VertexSet::from_mask(n, u)));
            avg += &s * &rho * &s;
        }
        avg /= Complex64::new(d as f64, 0.0);
        let t = twirl_to_graph_diagonal(&rho, &g).unwrap();
        assert!((t.to_density_matrix().unwrap() - &avg).norm() < 1e-12);
        assert!(close(t.lambda(), &project_dense(&rho, &g), 1e-12));
    }
}

#[test]
fn twirl_fixed_points_and_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let g = Graph::ring(4);
    let pure = twirl_to_graph_diagonal(&graph_density(&g), &g).unwrap();
    assert!((pure.fidelity() - 1.0).abs() < 1e-12);
    let s = GraphDiagonalState::new(g.clone(), random_lambda(&mut rng, 4)).unwrap();
    let t = twirl_to_graph_diagonal(&s.to_density_matrix().unwrap(), &g).unwrap();
    assert!(close(t.lambda(), s.lambda(), 1e-12));
    assert!(twirl_to_graph_diagonal(&CMatrix::zeros(4, 4), &g).is_err());
    assert!(GraphDiagonalState::new(g.clone(), vec![0.5; 16]).is_err());
    assert!(GraphDiagonalState::new(g, vec![1.0; 4]).is_err());
}

#[test]
fn bell_pair_partial_transpose() {
    let s = GraphDiagonalState::pure(Graph::path(2)).unwrap();
    let spec = partial_transpose_spectrum(&s, &cut_set(2, 1)).unwrap();
    assert_eq!(sorted(spec), vec![-0.5, 0.5, 0.5, 0.5]);
    let u = GraphDiagonalState::uniform(Graph::ring(5)).unwrap();
    for m in 1..16 {
        let spec = partial_transpose_spectrum(&u, &cut_set(5, m)).unwrap();
        assert!(spec.iter().all(|&x| (x - 1.0 / 32.0).abs() < 1e-15));
    }
}

#[test]
fn partial_transpose_matches_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    let mut cases = 0;
    while cases < 120 {
        let n = rng.random_range(2..=6);
        let g = random_graph(&mut rng, n, 0.5);
        let s = GraphDiagonalState::new(g, random_lambda(&mut rng, n)).unwrap();
        let rho = s.to_density_matrix().unwrap();
        let cache = SpectrumCache::new(&s);
        for m in 1u64..1 << (n - 1) {
            let a: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
            let dense = hermitian_eigenvalues(&partial_transpose(&rho, &a));
            let ours = partial_transpose_spectrum(&s, &cut_set(n, m)).unwrap();
            assert!(close(&sorted(ours.clone()), &dense, 1e-10));
            assert!(close(&cache.spectrum(m), &ours, 1e-12));
            let seeded = partial_transpose_spectrum_seeded(&s, &cut_set(n, m), rng.random()).unwrap();
            assert!(close(&seeded, &ours, 1e-12));
            assert!((ours.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        cases += 1;
    }
}

#[test]
fn partial_transpose_matches_dense_at_eight() {
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    for _ in 0..3 {
        let g = random_graph(&mut rng, 8, 0.4);
        let s = GraphDiagonalState::new(g, random_lambda(&mut rng, 8)).unwrap();
        let rho = s.to_density_matrix().unwrap();
        for m in [1u64, 3, 0b1010101, 0b111, 0b1111] {
            let a: Vec<usize> = (0..8).filter(|&v| m >> v & 1 == 1).collect();
            let dense = hermitian_eigenvalues(&partial_transpose(&rho, &a));
            let ours = partial_transpose_spectrum(&s, &cut_set(8, m)).unwrap();
            assert!(close(&sorted(ours), &dense, 1e-10));
        }
    }
}

#[test]
fn ppt_report_extremes() {
    let mut rng = ChaCha8Rng::seed_from_u64(58);
    for _ in 0..20 {
        let n = rng.random_range(2..=8);
        let mut g = random_graph(&mut rng, n, 0.5);
        while !g.is_connected() {
            g = random_graph(&mut rng, n, 0.5);
        }
        let r = ppt_report(&GraphDiagonalState::pure(g.clone()).unwrap()).unwrap();
        assert_eq!(r.cuts.len(), (1 << (n - 1)) - 1);
        assert!(!r.some_ppt);
        let r = ppt_report(&GraphDiagonalState::uniform(g).unwrap()).unwrap();
        assert!(r.all_ppt);
    }
    assert!(ppt_report(&GraphDiagonalState::pure(Graph::path(17)).unwrap()).is_err());
}

#[test]
fn ghz_diagonal_ppt_rule() {
    // star with centre 0; λ_U = λ_{U+0} except for ∅ and {0}
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    let mut both = [0usize; 2];
    for _ in 0..200 {
        let n = rng.random_range(3..=6);
        let g = Graph::star(n);
        let mut l = vec![0.0; 1 << n];
        for u in (2..1usize << n).step_by(2) {
            let v = rng.random::<f64>();
            l[u] = v;
            l[u + 1] = v;
        }
        let (x, y) = (rng.random::<f64>() * 3.0, rng.random::<f64>() * 3.0);
        l[0] = x.max(y);
        l[1] = x.min(y);
        let s: f64 = l.iter().sum();
        l.iter_mut().for_each(|v| *v /= s);
        let delta = l[0] - l[1];
        let st = GraphDiagonalState::new(g, l.clone()).unwrap();
        for m in 1u64..1 << (n - 1) {
            let min = partial_transpose_spectrum(&st, &cut_set(n, m))
                .unwrap()
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            // the subset that matters is the side without the centre
            let full = (1usize << n) - 1;
            let leaf_side = if m & 1 == 1 { full ^ m as usize } else { m as usize };
            let rule = delta <= 2.0 * l[leaf_side];
            assert_eq!(min >= PPT_TOLERANCE, rule, "n {n} cut {m:b}");
            both[rule as usize] += 1;
        }
    }
    assert!(both[0] > 50 && both[1] > 50);
}

#[test]
fn critical_p_is_a_threshold() {
    for g in [Graph::ring(5), Graph::star(4), Graph::path(4)] {
        for mode in [PptMode::FirstCut, PptMode::AllCuts] {
            let pc = critical_depolarizing_p(&g, mode).unwrap();
            assert!(pc > 0.0 && pc < 1.0);
            for k in 0..=50 {
                let p = k as f64 / 50.0;
                let s = uniform_channel_lambdas(&g, &PauliChannel::depolarizing(p).unwrap()).unwrap();
                let r = ppt_report(&s).unwrap();
                let event = match mode {
                    PptMode::FirstCut => r.some_ppt,
                    PptMode::AllCuts => r.all_ppt,
                };
                if (p - pc).abs() > 1e-5 {
                    assert_eq!(event, p < pc, "p {p} pc {pc}");
                }
            }
        }
        let first = critical_depolarizing_p(&g, PptMode::FirstCut).unwrap();
        let all = critical_depolarizing_p(&g, PptMode::AllCuts).unwrap();
        assert!(all <= first + 1e-6);
    }
    assert!(critical_depolarizing_p(&Graph::ring(11), PptMode::FirstCut).is_err());
}

#[test]
fn ghz_first_cut_is_one_versus_rest() {
    let g = Graph::star(4);
    let per_cut: Vec<(u64, f64)> = (1u64..8).map(|m| (m, cut_critical_p(&g, &cut_set(4, m)).unwrap())).collect();
    let best = per_cut.iter().cloned().fold((0, 0.0), |b, c| if c.1 > b.1 { c } else { b });
    let size = best.0.count_ones() as usize;
    assert!(size == 1 || size == 3);
    // ties among the 1-vs-3 splits only
    for &(m, p) in &per_cut {
        let k = m.count_ones() as usize;
        if k == 2 {
            assert!(p < best.1 - 1e-4);
        }
    }
    let first = critical_depolarizing_p(&g, PptMode::FirstCut).unwrap();
    assert!((first - best.1).abs() < 2e-6);
}

#[test]
fn cluster_pair_thresholds() {
    let line = Graph::path(9);
    let kt = kappa_t(pair_distillability_threshold(&line, 4, 5).unwrap());
    assert!((kt - 0.3331).abs() < 5e-4, "{kt}");
    let sq = Graph::lattice(&[5, 5]);
    let kt = kappa_t(pair_distillability_threshold(&sq, 12, 13).unwrap());
    assert!((kt - 0.1886).abs() < 5e-4, "{kt}");
    let cube = Graph::lattice(&[4, 4, 4]);
    let kt = kappa_t(pair_distillability_threshold(&cube, 21, 22).unwrap());
    assert!((kt - 0.1318).abs() < 5e-4, "{kt}");
    // does not depend on the lattice size
    let a = pair_distillability_threshold(&Graph::path(6), 2, 3).unwrap();
    let b = pair_distillability_threshold(&Graph::path(40), 20, 21).unwrap();
    assert!((a - b).abs() < 1e-12);
    assert!(pair_distillability_threshold(&line, 2, 2).is_err());
}

#[test]
fn ghz_pair_threshold_values() {
    // centre-leaf pair: 2p^N + p^2 = 1
    let frozen = [0.4196, 0.3466, 0.2985, 0.2640];
    for (n, want) in (3..=6).zip(frozen) {
        let p = pair_distillability_threshold(&Graph::star(n), 0, 1).unwrap();
        assert!((2.0 * p.powi(n as i32) + p * p - 1.0).abs() < 1e-8);
        let kt = kappa_t(p);
        assert!((kt - want).abs() < 5e-4, "n {n}: {kt}");
        assert!(kt >= (2f64).ln() / n as f64);
    }
}

#[test]
fn ring_one_versus_rest_minimum() {
    // once the {a} split is NPT its minimum eigenvalue sits at U = N_a + a
    let mut seen = 0;
    for n in 3..=8 {
        let g = Graph::ring(n);
        for p in [0.3, 0.6, 0.9] {
            let s = uniform_channel_lambdas(&g, &PauliChannel::depolarizing(p).unwrap()).unwrap();
            let spec = partial_transpose_spectrum(&s, &cut_set(n, 1)).unwrap();
            let min = spec.iter().cloned().fold(f64::INFINITY, f64::min);
            if min >= 0.0 {
                continue;
            }
            seen += 1;
            let u = 1usize | 2 | 1 << (n - 1);
            assert!((spec[u] - min).abs() < 1e-14, "n {n} p {p}");
        }
    }
    assert_eq!(seen, 12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn spectra_preserve_trace(n in 2usize..=7, bits in any::<u64>(), seed in any::<u64>(), m in 1u64..64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = Graph::empty(n);
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                if bits >> k & 1 == 1 {
                    g.add_edge(a, b);
                }
                k += 1;
            }
        }
        let s = GraphDiagonalState::new(g, random_lambda(&mut rng, n)).unwrap();
        let mask = m % ((1 << n) - 1) + 1;
        let spec = partial_transpose_spectrum(&s, &cut_set(n, mask)).unwrap();
        prop_assert!((spec.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // complementary cuts share the spectrum
        let comp = partial_transpose_spectrum(&s, &cut_set(n, ((1 << n) - 1) ^ mask)).unwrap();
        prop_assert!(close(&sorted(spec), &sorted(comp), 1e-12));
    }
}
