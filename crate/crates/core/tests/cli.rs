use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twoblock"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twoblock-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn gen_tournament(n: &str, file: &str) -> PathBuf {
    let p = scratch(file);
    let out = run(&[
        "gen",
        "--family",
        "regular-tournament",
        "--n",
        n,
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    p
}

#[test]
fn gen_and_embed_with_trace() {
    let g = gen_tournament("9", "t9.json");
    let trace = scratch("trace.json");
    let out = run(&[
        "embed",
        g.to_str().unwrap(),
        "--k",
        "4",
        "--ell",
        "2",
        "--orientation",
        "forward-first",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let e = json(&out);
    assert_eq!(e["pattern"], "FFBB");
    assert_eq!(e["vertices"].as_array().unwrap().len(), 5);
    let t: Value = serde_json::from_str(&std::fs::read_to_string(trace).unwrap()).unwrap();
    assert!(
        t["case"].as_str().unwrap().starts_with("Prop")
            || t["case"].as_str().unwrap().starts_with("Thm")
    );
}

#[test]
fn below_threshold_exit_codes() {
    let g = gen_tournament("5", "t5.json");
    let g = g.to_str().unwrap();
    // δ⁰ = 2 < 3 = threshold(4, 2)
    let out = run(&["embed", g, "--k", "4", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["embed", g, "--k", "4", "--ell", "2", "--oracle-fallback"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["found"], true);
}

#[test]
fn one_block_requests_use_longest_path() {
    let g = gen_tournament("7", "t7.json");
    let out = run(&["embed", g.to_str().unwrap(), "--k", "3", "--ell", "3"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["pattern"], "BBB");
}

#[test]
fn oracle_subcommand() {
    let p = scratch("blowup.json");
    let out = run(&[
        "gen",
        "--family",
        "blowup",
        "--base",
        "triangle",
        "--m",
        "2",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let out = run(&["oracle", p.to_str().unwrap(), "--pattern", "FBFB"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(
        (r["found"].clone(), r["exhausted"].clone()),
        (Value::Bool(false), Value::Bool(false))
    );
    let out = run(&[
        "oracle",
        p.to_str().unwrap(),
        "--all-orientations",
        "--k",
        "3",
    ]);
    assert_eq!(json(&out)["classes"].as_array().unwrap().len(), 4);
}

#[test]
fn longest_path_subcommand() {
    let g = gen_tournament("7", "t7b.json");
    let out = run(&["longest-path", g.to_str().unwrap()]);
    let r = json(&out);
    assert_eq!(r["length"], 6);
    assert_eq!(r["certified"], true);
}

#[test]
fn random_gen_is_seeded_and_dot_export_works() {
    let a = run(&[
        "gen",
        "--family",
        "random",
        "--n",
        "14",
        "--min-semidegree",
        "5",
        "--seed",
        "42",
    ]);
    let b = run(&[
        "gen",
        "--family",
        "random",
        "--n",
        "14",
        "--min-semidegree",
        "5",
        "--seed",
        "42",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dot = run(&[
        "gen",
        "--family",
        "regular-tournament",
        "--n",
        "3",
        "--format",
        "dot",
    ]);
    assert_eq!(
        String::from_utf8(dot.stdout).unwrap(),
        "digraph {\n    0 -> 1;\n    1 -> 2;\n    2 -> 0;\n}\n"
    );
    let bad = run(&["gen", "--family", "regular-tournament", "--n", "4"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn verify_theorem_writes_outputs() {
    let cfg = scratch("sweep.json");
    std::fs::write(
        &cfg,
        r#"{"k_values": [4], "instances_per_pair": 2, "seed": 5}"#,
    )
    .unwrap();
    let (csv, js) = (scratch("sweep.csv"), scratch("summary.json"));
    let out = run(&[
        "verify-theorem",
        "--config",
        cfg.to_str().unwrap(),
        "--jobs",
        "2",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        js.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(json(&out)["theorem_violations"], 0);
    let text = std::fs::read_to_string(csv).unwrap();
    // header + 2 ells * 2 instances * 2 orientations
    assert_eq!(text.lines().count(), 9);
    assert!(std::fs::read_to_string(js)
        .unwrap()
        .contains("case_histogram"));
}

#[test]
fn tightness_and_hunt_subcommands() {
    let out = run(&["tightness", "--k", "4"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["blowup"]["antidirected_absent"], true);
    let out = run(&["hunt", "--n-max", "5", "--k", "3", "--min-delta", "2"]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["graphs_checked"], 24);
    assert_eq!(r["question_candidates"].as_array().unwrap().len(), 0);
}

#[test]
fn malformed_graph_is_an_operational_error() {
    let p = scratch("bad.json");
    std::fs::write(&p, r#"{"n": 2, "arcs": [[0, 1], [1, 0]]}"#).unwrap();
    let out = run(&["longest-path", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
