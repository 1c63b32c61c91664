use gslab_core::dense::{dense_state_vector, DenseState};
use gslab_core::sim::{apply_dense, cz_table_lookup, max_reduction_length, run_circuit};
use gslab_core::{Axis, Clifford, Graph, Initial, Instruction, Named, Register, VertexSet};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{random_graph, random_instruction};

#[test]
fn fresh_registers() {
    let r = Register::new(1, Initial::Plus, 0);
    let s = r.to_dense().unwrap();
    let plus = DenseState::plus(1).unwrap();
    assert!((s.overlap(&plus) - 1.0).abs() < 1e-12);

    let r = Register::new(2, Initial::Zero, 0);
    let s = r.to_dense().unwrap();
    assert!((s.amplitudes()[0].norm() - 1.0).abs() < 1e-12);

    let mut r = Register::new(0, Initial::Plus, 0);
    assert!(run_circuit(&mut r, &[]).unwrap().is_empty());
}

#[test]
fn lc_rule_matches_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sqxd = Clifford::named(Named::SQXD).unitary();
    let sqz = Clifford::named(Named::SQZ).unitary();
    for _ in 0..1000 {
        let n = rng.random_range(1..=10);
        let g = random_graph(&mut rng, n, 0.5);
        let a = rng.random_range(0..n);
        let off = VertexSet::zeros(n);
        let mut psi = dense_state_vector(&g, &off).unwrap();
        // U = e^{-iπ/4 σx^a} Π_{b∈N_a} e^{iπ/4 σz^b}
        psi.apply_1q(a, &sqxd);
        for b in g.neighbors(a) {
            psi.apply_1q(b, &sqz);
        }
        let tau = dense_state_vector(&g.local_complement(a).unwrap(), &off).unwrap();
        assert!((psi.overlap(&tau) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn register_lc_preserves_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..300 {
        let n = rng.random_range(1..=7);
        let g = random_graph(&mut rng, n, 0.5);
        let frame: Vec<Clifford> = (0..n).map(|_| Clifford::from_index(rng.random_range(0..24))).collect();
        let mut r = Register::from_parts(g, frame, 0).unwrap();
        let before = r.to_dense().unwrap();
        r.local_complement(rng.random_range(0..n)).unwrap();
        assert!((before.overlap(&r.to_dense().unwrap()) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn cz_table_is_exhaustively_correct() {
    for edge in [false, true] {
        for ca in Clifford::all() {
            for cb in Clifford::all() {
                let out = cz_table_lookup(edge, ca, cb);
                let g = |e: bool| if e { Graph::path(2) } else { Graph::empty(2) };
                let mut lhs = Register::from_parts(g(edge), vec![ca, cb], 0).unwrap().to_dense().unwrap();
                lhs.apply_cz(0, 1);
                let rhs = Register::from_parts(g(out.edge), vec![out.ca, out.cb], 0)
                    .unwrap()
                    .to_dense()
                    .unwrap();
                assert!((lhs.overlap(&rhs) - 1.0).abs() < 1e-10);
                if ca.is_diagonal() {
                    assert!(out.ca.is_diagonal());
                }
                if cb.is_diagonal() {
                    assert!(out.cb.is_diagonal());
                }
            }
        }
    }
}

#[test]
fn reduction_needs_at_most_five_complementations() {
    assert!(max_reduction_length() <= 5);
}

#[test]
fn identity_and_double_hadamard() {
    let g = Graph::ring(4);
    let mut r = Register::from_graph(g.clone(), 0);
    r.apply_local_gate(1, Clifford::identity()).unwrap();
    assert_eq!(r.frame()[1], Clifford::identity());
    let h = Clifford::named(Named::H);
    r.apply_local_gate(2, h).unwrap();
    r.apply_local_gate(2, h).unwrap();
    assert_eq!(r.frame()[2], Clifford::identity());
    assert_eq!(r.graph(), &g);
}

#[test]
fn cz_adds_edge_and_is_involutive() {
    let mut r = Register::new(3, Initial::Plus, 0);
    r.apply_cz(0, 2).unwrap();
    assert!(r.graph().has_edge(0, 2));
    let mid = r.to_dense().unwrap();
    r.apply_cz(0, 2).unwrap();
    r.apply_cz(0, 2).unwrap();
    assert!((mid.overlap(&r.to_dense().unwrap()) - 1.0).abs() < 1e-12);
    assert!(r.apply_cz(1, 1).is_err());
}

#[test]
fn random_circuits_match_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut count = 0;
    for _ in 0..2000 {
        let n = rng.random_range(1..=8);
        let depth = rng.random_range(1..=50);
        let circuit: Vec<Instruction> = (0..depth).map(|_| random_instruction(&mut rng, n, true)).collect();
        let mut r = Register::new(n, Initial::Plus, rng.random());
        let mut psi = DenseState::plus(n).unwrap();
        for ins in &circuit {
            let p = apply_dense(&mut psi, ins);
            if p < 1e-12 {
                assert!(r.apply(ins).is_err());
                continue;
            }
            let rec = r.apply(ins).unwrap();
            if let Some(m) = rec {
                assert!((m.probability - p).abs() < 1e-9, "{ins:?}");
            }
        }
        let f = psi.overlap(&r.to_dense().unwrap());
        assert!(f > 1.0 - 1e-10, "fidelity {f} for {circuit:?}");
        count += 1;
    }
    assert_eq!(count, 2000);
}

#[test]
fn ghz_preparation_then_z_readout() {
    let n = 4;
    let mut circuit = vec![Instruction::Local(Clifford::named(Named::H), 0)];
    for t in 1..n {
        circuit.push(Instruction::Cnot(0, t));
    }
    let mut r = Register::new(n, Initial::Zero, 7);
    run_circuit(&mut r, &circuit).unwrap();
    let mut ghz = vec![Complex64::new(0.0, 0.0); 1 << n];
    ghz[0] = Complex64::new(0.5f64.sqrt(), 0.0);
    ghz[(1 << n) - 1] = ghz[0];
    let ghz = DenseState::from_amplitudes(n, ghz).unwrap();
    assert!((ghz.overlap(&r.to_dense().unwrap()) - 1.0).abs() < 1e-12);

    let mut recs = Vec::new();
    for a in 0..n {
        let ins = Instruction::Measure {
            axis: Axis::Z,
            vertex: a,
            forced: Some(1),
        };
        recs.extend(run_circuit(&mut r, &[ins]).unwrap());
    }
    assert_eq!(recs[0].probability, 0.5);
    assert!(recs[1..].iter().all(|m| m.probability == 1.0 && m.outcome == 1));
    assert_eq!(r.graph().edge_count(), 0);
}
