use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_gslab");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("GSLAB_SEED")
        .env_remove("GSLAB_THREADS")
        .env_remove("GSLAB_MAX_N")
        .env_remove("GSLAB_TOLERANCE")
        .env_remove("GSLAB_OUTPUT")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const STAR4: &str = "4\n1 2\n1 3\n1 4\n";
const K4: &str = "4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
const RING5: &str = "5\n1 2\n2 3\n3 4\n4 5\n1 5\n";

#[test]
fn classify_four_vertices() {
    let v = json(&run(&["classify", "--n", "4"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["class_count"], 2);
    assert_eq!(v["classes"].as_array().unwrap().len(), 2);
}

#[test]
fn star_and_complete_graph_are_equivalent() {
    let d = TempDir::new().unwrap();
    let a = write(&d, "star", STAR4);
    let b = write(&d, "k4", K4);
    let v = json(&run(&["equiv", s(&a), s(&b)]));
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["witness"]["frame"].as_array().unwrap().len(), 4);

    let p = write(&d, "path", "4\n1 2\n2 3\n3 4\n");
    let v = json(&run(&["equiv", s(&a), s(&p)]));
    assert_eq!(v["equivalent"], false);
    assert!(v["witness"].is_null());
}

#[test]
fn exit_codes() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));

    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["entanglement", "/nonexistent/graph.txt"]).status.code(), Some(1));

    let d = TempDir::new().unwrap();
    let dup = write(&d, "dup", "3\n1 2\n2 1\n");
    let out = run(&["entanglement", s(&dup)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    assert_eq!(run(&["classify", "--n", "9", "--max-n", "8"]).status.code(), Some(2));
    let path = write(&d, "path3", "3\n1 2\n2 3\n");
    assert_eq!(run(&["purify", s(&path), "--p", "1.5"]).status.code(), Some(2));
    let tri = write(&d, "tri", "3\n1 2\n2 3\n1 3\n");
    assert_eq!(run(&["purify", s(&tri), "--p", "0.9"]).status.code(), Some(2));
}

#[test]
fn same_seed_gives_identical_bytes() {
    let d = TempDir::new().unwrap();
    let c = write(&d, "c", "H 1\nCZ 1 2\nCZ 2 3\nS 3\nMX 2\nMY 3\nMZ 1\nCNOT 4 1\nMX 4\n");
    let a = run(&["simulate", s(&c), "--seed", "17"]);
    let b = run(&["simulate", s(&c), "--seed", "17"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 17);

    let env = Command::new(BIN)
        .args(["simulate", s(&c)])
        .env("GSLAB_SEED", "17")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);

    let r = write(&d, "ring", RING5);
    let x = run(&["decohere", s(&r), "--p", "0.8", "--threads", "2"]);
    let y = run(&["decohere", s(&r), "--p", "0.8", "--threads", "1"]);
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn forced_outcomes_are_reported() {
    let d = TempDir::new().unwrap();
    let c = write(&d, "c", "CZ 1 2\nMZ 1 = -1\n");
    let v = json(&run(&["simulate", s(&c)]));
    let m = &v["measurements"][0];
    assert_eq!(m["vertex"], 1);
    assert_eq!(m["basis"], "Z");
    assert_eq!(m["outcome"], -1);
    assert_eq!(m["probability"], 0.5);
    assert_eq!(v["edges"], serde_json::json!([]));
}

#[test]
fn entanglement_report() {
    let d = TempDir::new().unwrap();
    let r = write(&d, "ring", RING5);
    let v = json(&run(&["entanglement", s(&r), "--cuts"]));
    assert_eq!(v["sr_max"], 2);
    assert_eq!(v["pp"], 3);
    assert_eq!(v["vc"], 3);
    assert_eq!(v["tight"], false);
    assert_eq!(v["cuts"].as_array().unwrap().len(), 15);
    let st = write(&d, "star", STAR4);
    let v = json(&run(&["entanglement", s(&st)]));
    assert_eq!(v["sr_max"], 1);
    assert!(v.get("cuts").is_none());
}

#[test]
fn orbit_and_reduce() {
    let d = TempDir::new().unwrap();
    let st = write(&d, "star", STAR4);
    let v = json(&run(&["orbit", s(&st)]));
    // stars on four labelled vertices plus K4
    assert_eq!(v["orbit_size"], 5);

    let m = write(&d, "m", "+XX\n+ZZ\n");
    let v = json(&run(&["reduce", s(&m)]));
    assert_eq!(v["edges"], serde_json::json!([[1, 2]]));
}

#[test]
fn decohere_writes_lambda() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "pair", "2\n1 2\n");
    let out = d.path().join("lambda.bin");
    let v = json(&run(&["decohere", s(&g), "--p", "0.5", "--lambda-out", s(&out)]));
    let lam: Vec<f64> = v["lambda"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(lam.len(), 4);
    assert!((lam.iter().sum::<f64>() - 1.0).abs() < 1e-11);
    let bytes = std::fs::read(&out).unwrap();
    let back = gslab_core::io::lambda_from_bytes(&bytes).unwrap();
    for (a, b) in back.iter().zip(&lam) {
        assert!((a - b).abs() < 1e-11);
    }
    // p = 1/2 on both qubits of a Bell pair: λ₀ = 7/16 is below 1/2, so the state is PPT
    assert!((lam[0] - 7.0 / 16.0).abs() < 1e-12);
    assert_eq!(v["ppt"]["all_ppt"], true);
}

#[test]
fn purify_trace() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "ghz", "3\n1 2\n1 3\n");
    let v = json(&run(&["purify", s(&g), "--p", "0.9", "--rounds", "30"]));
    assert_eq!(v["converged"], true);
    let trace = v["trace"].as_array().unwrap();
    let last = trace.last().unwrap()["fidelity"].as_f64().unwrap();
    assert!(last > 1.0 - 1e-6);
}

#[test]
fn weighted_and_bell() {
    let d = TempDir::new().unwrap();
    let g = write(&d, "w", "3\n1 2 1.5707963267948966\n2 3 1.5707963267948966\n");
    let v = json(&run(&["weighted", s(&g), "--a", "2"]));
    let tr: f64 = (0..2).map(|i| v["rho_re"][i][i].as_f64().unwrap()).sum();
    assert!((tr - 1.0).abs() < 1e-11);
    assert!(v["entropy"].as_f64().unwrap() > 0.0);

    let st = write(&d, "star", STAR4);
    let v = json(&run(&["bell", s(&st)]));
    assert_eq!(v["quantum_value"], 16.0);
    assert!(v["lhv_bound"].as_u64().unwrap() < 16);
    assert!(v["w2"].as_f64().unwrap() < 0.0);
}

#[test]
fn output_flag_writes_file() {
    let d = TempDir::new().unwrap();
    let out = d.path().join("report.json");
    let o = run(&["classify", "--n", "3", "-o", s(&out)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["class_count"], 1);
}

#[test]
fn floats_have_twelve_digits() {
    let d = TempDir::new().unwrap();
    let r = write(&d, "ring", RING5);
    let o = run(&["decohere", s(&r), "--p", "0.7", "--no-ppt"]);
    let v = json(&o);
    for x in v["lambda"].as_array().unwrap() {
        let t = x.to_string();
        let digits = t.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
        assert!(digits.trim_start_matches('0').len() <= 12, "{t}");
    }
    assert!(v.get("ppt").is_none());
}
