use std::fs;

use gslab_core::decoherence::{
    kappa_t, pair_distillability_threshold, ppt_report, uniform_channel_lambdas, PPT_REPORT_LIMIT,
};
use gslab_core::dense::{dense_state_vector, DENSE_LIMIT};
use gslab_core::entanglement::{
    lhv_bound, max_schmidt_rank, min_vertex_cover, pauli_persistency, rank_index, schmidt_rank, stabilizer_sum,
    witness_expectations, WitnessState,
};
use gslab_core::io::{circuit_width, lambda_to_bytes, parse_circuit, parse_graph, parse_stabilizer, parse_weighted};
use gslab_core::lc::{are_lc_equivalent, classify, lc_orbit_with_cap, DEFAULT_ORBIT_CAP};
use gslab_core::purification::{depolarized_input, purify_iterate, threshold_search, PurifyOptions};
use gslab_core::sim::run_circuit;
use gslab_core::stabilizer::stabilizer_to_graph;
use gslab_core::weighted::{meyer_wallach, pair_correlations, reduced_density_matrix};
use gslab_core::{Error, Graph, Initial, PauliChannel, Register, Subprotocol, VertexSet};
use serde_json::{json, Value};

use crate::{read_input, Body, ChannelArg, CliError, Command, Global, InitialArg};

type Out = Result<Body, CliError>;

fn check_size(g: &Global, n: usize) -> Result<(), Error> {
    match g.max_n {
        Some(limit) if n > limit => Err(Error::LimitExceeded {
            what: "vertex count (--max-n)",
            got: n,
            limit,
        }),
        _ => Ok(()),
    }
}

fn load_graph(g: &Global, path: &std::path::Path) -> Result<Graph, CliError> {
    let graph = parse_graph(&read_input(path)?)?;
    check_size(g, graph.n())?;
    Ok(graph)
}

fn edges_json(g: &Graph) -> Value {
    g.edges().iter().map(|&(a, b)| json!([a + 1, b + 1])).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn zero_based(v: &[usize], n: usize) -> Result<Vec<usize>, Error> {
    v.iter()
        .map(|&x| {
            if x == 0 || x > n {
                Err(Error::InvalidArgument(format!("vertex {x} outside 1..={n}")))
            } else {
                Ok(x - 1)
            }
        })
        .collect()
}

fn into_body(v: Value) -> Body {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("reports are JSON objects"),
    }
}

fn pair_of(v: &[usize], n: usize) -> Result<(usize, usize), Error> {
    let p = zero_based(v, n)?;
    match p[..] {
        [a, b] => Ok((a, b)),
        _ => Err(Error::InvalidArgument(format!("--pair takes two vertices, got {}", p.len()))),
    }
}

pub fn dispatch(g: &Global, c: &Command) -> Out {
    match c {
        Command::Simulate { circuit, n, initial } => simulate(g, circuit, *n, *initial),
        Command::Classify { n } => {
            check_size(g, *n)?;
            let classes: Vec<Value> = classify(*n)?
                .iter()
                .map(|r| {
                    json!({
                        "representative": edges_json(&r.representative),
                        "orbit_size": r.orbit_size,
                        "vertices": r.n,
                        "edges": r.edges,
                        "sr_max": r.sr_max,
                        "pp": r.pp,
                        "ri2": r.ri2,
                        "ri3": r.ri3,
                        "two_colorable": r.two_colorable,
                    })
                })
                .collect();
            Ok(into_body(json!({ "n": n, "class_count": classes.len(), "classes": classes })))
        }
        Command::Entanglement { graph, cuts } => entanglement(g, graph, *cuts),
        Command::Orbit { graph, cap } => {
            let gr = load_graph(g, graph)?;
            let orbit = lc_orbit_with_cap(&gr, cap.unwrap_or(DEFAULT_ORBIT_CAP))?;
            let mut members: Vec<Vec<(usize, usize)>> = orbit.iter().map(|h| h.edges()).collect();
            members.sort();
            let members: Vec<Value> = members
                .iter()
                .map(|es| es.iter().map(|&(a, b)| json!([a + 1, b + 1])).collect())
                .collect();
            Ok(into_body(json!({ "n": gr.n(), "orbit_size": members.len(), "members": members })))
        }
        Command::Equiv { first, second } => {
            let g1 = load_graph(g, first)?;
            let g2 = load_graph(g, second)?;
            let w = are_lc_equivalent(&g1, &g2)?;
            let witness = match &w {
                Some(w) => json!({
                    "frame": w.frame.iter().map(|c| c.name()).collect::<Vec<_>>(),
                    "q": w.q.iter().map(|m| json!([[m[0][0] as u8, m[0][1] as u8], [m[1][0] as u8, m[1][1] as u8]])).collect::<Vec<_>>(),
                }),
                None => Value::Null,
            };
            Ok(into_body(json!({ "equivalent": w.is_some(), "witness": witness })))
        }
        Command::Reduce { stabilizer } => {
            let m = parse_stabilizer(&read_input(stabilizer)?)?;
            check_size(g, m.n())?;
            let (gr, frame) = stabilizer_to_graph(&m)?;
            Ok(into_body(json!({
                "n": gr.n(),
                "edges": edges_json(&gr),
                "frame": frame.iter().map(|c| c.name()).collect::<Vec<_>>(),
            })))
        }
        Command::Weighted { graph, a, pair } => {
            let wg = parse_weighted(&read_input(graph)?)?;
            let n = wg.n();
            check_size(g, n)?;
            let mut body = Body::new();
            body.insert("n".into(), n.into());
            body.insert("meyer_wallach".into(), meyer_wallach(&wg).into());
            if !a.is_empty() {
                let a0 = zero_based(a, n)?;
                let r = reduced_density_matrix(&wg, &VertexSet::from_indices(n, &a0))?;
                let m = r.matrix();
                let re: Vec<Vec<f64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect();
                let im: Vec<Vec<f64>> = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect()).collect();
                body.insert("a".into(), json!(one_based(&a0)));
                body.insert("entropy".into(), r.entropy().into());
                body.insert("rho_re".into(), json!(re));
                body.insert("rho_im".into(), json!(im));
            }
            if let Some(p) = pair {
                let (x, y) = pair_of(p, n)?;
                let pc = pair_correlations(&wg, x, y)?;
                body.insert("pair".into(), json!([x + 1, y + 1]));
                body.insert("q".into(), json!(pc.q));
                body.insert("q_max".into(), pc.q_max.into());
            }
            Ok(body)
        }
        Command::Decohere {
            graph,
            channel,
            p,
            lambda_out,
            pair,
            no_ppt,
        } => {
            let gr = load_graph(g, graph)?;
            let ch = match channel {
                ChannelArg::Depolarizing => PauliChannel::depolarizing(*p)?,
                ChannelArg::Dephasing => PauliChannel::dephasing(*p)?,
                ChannelArg::Bitflip => PauliChannel::bitflip(*p)?,
            };
            let s = uniform_channel_lambdas(&gr, &ch)?;
            if let Some(path) = lambda_out {
                fs::write(path, lambda_to_bytes(s.lambda())).map_err(|e| CliError::Io(path.clone(), e))?;
            }
            let mut body = Body::new();
            body.insert("n".into(), gr.n().into());
            body.insert("channel".into(), json!(ch.probabilities()));
            body.insert("fidelity".into(), s.fidelity().into());
            body.insert("lambda".into(), json!(s.lambda()));
            if !no_ppt && gr.n() <= PPT_REPORT_LIMIT && gr.n() >= 2 {
                let r = ppt_report(&s)?;
                let floor = g.tolerance.map(|t| -t);
                let cuts: Vec<Value> = r
                    .cuts
                    .iter()
                    .map(|c| {
                        let ppt = floor.map_or(c.ppt, |f| c.min_eigenvalue >= f);
                        json!({ "a": one_based(&c.a_set), "min_eigenvalue": c.min_eigenvalue, "ppt": ppt })
                    })
                    .collect();
                let some = cuts.iter().any(|c| c["ppt"] == Value::Bool(true));
                let all = cuts.iter().all(|c| c["ppt"] == Value::Bool(true));
                body.insert("ppt".into(), json!({ "cuts": cuts, "some_ppt": some, "all_ppt": all }));
            }
            if let Some(pv) = pair {
                let (a, b) = pair_of(pv, gr.n())?;
                let pt = pair_distillability_threshold(&gr, a, b)?;
                body.insert("pair".into(), json!({ "vertices": [a + 1, b + 1], "p": pt, "kappa_t": kappa_t(pt) }));
            }
            Ok(body)
        }
        Command::Purify {
            graph,
            p,
            rounds,
            local_noise,
            threshold,
        } => {
            let gr = load_graph(g, graph)?;
            let opts = PurifyOptions {
                max_rounds: *rounds,
                target_infidelity: g.tolerance.unwrap_or(1e-6),
                local_noise: *local_noise,
                ..Default::default()
            };
            let t = purify_iterate(&depolarized_input(&gr, *p)?, &opts)?;
            let trace: Vec<Value> = t
                .rounds
                .iter()
                .map(|r| {
                    json!({
                        "round": r.round,
                        "step": match r.which { Subprotocol::P1 => "P1", Subprotocol::P2 => "P2" },
                        "fidelity": r.fidelity,
                        "success_probability": r.success_probability,
                    })
                })
                .collect();
            let mut body = into_body(json!({
                "n": gr.n(),
                "p": p,
                "local_noise": local_noise,
                "color_a": one_based(t.final_state.color_a()),
                "initial_fidelity": t.initial_fidelity,
                "converged": t.converged,
                "trace": trace,
            }));
            if *threshold {
                body.insert("threshold_p".into(), threshold_search(&gr, &opts)?.into());
            }
            Ok(body)
        }
        Command::Bell { graph, p } => {
            let gr = load_graph(g, graph)?;
            let n = gr.n();
            let mut body = Body::new();
            body.insert("n".into(), n.into());
            let lhv = match lhv_bound(&gr) {
                Ok(c) => json!(c),
                Err(Error::LimitExceeded { .. }) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            body.insert("lhv_bound".into(), lhv);
            if n <= DENSE_LIMIT {
                let psi = dense_state_vector(&gr, &VertexSet::zeros(n))?;
                body.insert("quantum_value".into(), stabilizer_sum(&gr, &psi)?.into());
            }
            let s = uniform_channel_lambdas(&gr, &PauliChannel::depolarizing(*p)?)?;
            let w = witness_expectations(&gr, WitnessState::Diagonal(&s))?;
            let w1: Vec<Value> = w
                .w1
                .iter()
                .map(|&((a, b), v)| json!({ "edge": [a + 1, b + 1], "value": v }))
                .collect();
            body.insert("p".into(), (*p).into());
            body.insert("w1".into(), json!(w1));
            body.insert("w2".into(), w.w2.into());
            Ok(body)
        }
    }
}

fn simulate(g: &Global, path: &std::path::Path, n: Option<usize>, initial: InitialArg) -> Out {
    let circuit = parse_circuit(&read_input(path)?)?;
    let width = circuit_width(&circuit);
    let n = n.unwrap_or(width);
    if n < width {
        return Err(Error::IndexOutOfRange { index: width - 1, n }.into());
    }
    check_size(g, n)?;
    let init = match initial {
        InitialArg::Plus => Initial::Plus,
        InitialArg::Zero => Initial::Zero,
    };
    let mut reg = Register::new(n, init, g.seed);
    let records = run_circuit(&mut reg, &circuit)?;
    let meas: Vec<Value> = records
        .iter()
        .map(|m| {
            json!({
                "vertex": m.vertex + 1,
                "basis": m.basis.letter().to_string(),
                "outcome": m.outcome,
                "probability": m.probability,
            })
        })
        .collect();
    Ok(into_body(json!({
        "n": n,
        "instructions": circuit.len(),
        "edges": edges_json(reg.graph()),
        "frame": reg.frame().iter().map(|c| c.name()).collect::<Vec<_>>(),
        "measurements": meas,
    })))
}

fn entanglement(g: &Global, path: &std::path::Path, with_cuts: bool) -> Out {
    let gr = load_graph(g, path)?;
    let n = gr.n();
    let sr = max_schmidt_rank(&gr)?;
    let vc = min_vertex_cover(&gr)?;
    let (pp, pp_note) = match pauli_persistency(&gr) {
        Ok(v) => (json!(v), Value::Null),
        Err(e @ Error::LimitExceeded { .. }) => (Value::Null, json!(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let (ri2, ri3) = rank_index(&gr);
    let upper = pp.as_u64().map_or(vc as u64, |v| v.min(vc as u64));
    let mut body = into_body(json!({
        "n": n,
        "sr_max": sr,
        "vc": vc,
        "pp": pp,
        "pp_note": pp_note,
        "lower": sr,
        "upper": upper,
        "tight": sr as u64 == upper,
        "ri2": ri2,
        "ri3": ri3,
        "two_colorable": gr.is_two_colorable(),
    }));
    if with_cuts {
        if n > 20 {
            return Err(Error::LimitExceeded { what: "vertex count for --cuts", got: n, limit: 20 }.into());
        }
        let cuts: Vec<Value> = (1u64..1u64 << n.saturating_sub(1))
            .map(|m| {
                let set = VertexSet::from_mask(n, m);
                let a: Vec<usize> = set.iter_ones().map(|v| v + 1).collect();
                json!({ "a": a, "rank": schmidt_rank(&gr, &set) })
            })
            .collect();
        body.insert("cuts".into(), json!(cuts));
    }
    Ok(body)
}
