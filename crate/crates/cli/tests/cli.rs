use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lojnewton"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

#[test]
fn polyhedron_vertices() {
    let v = json(&run(&["polyhedron", "--text", "x1^2+x2^4"]));
    assert_eq!(v["result"]["vertices"], serde_json::json!([[0, 4], [2, 0]]));
    assert_eq!(v["tool"], "lojnewton");
    assert_eq!(v["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn usage_errors_print_the_grammar() {
    let out = run(&["polyhedron", "--text", "x1^^2"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("expr   :="), "{err}");
    assert!(err.contains("--seed"));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
}

#[test]
fn degenerate_input_is_not_an_error() {
    let v = json(&run(&["check-nondegenerate", "--text", "(x1-x2)^2"]));
    assert_eq!(v["result"]["verdict"], "degenerate");
}

#[test]
fn output_is_deterministic_and_path_independent() {
    let args = [
        "genericity",
        "--text",
        "x1^2+x2^4",
        "--text",
        "x1^2+x2^2",
        "--trials",
        "30",
        "--seed",
        "9",
    ];
    let a = run(&args);
    let b = run(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = run(&seq);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = run(&["convenient", "--text", "x1^2+x2^4", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "convenient");
}

#[test]
fn example31_claims_hold() {
    let v = json(&run(&["reproduce-example31"]));
    assert_eq!(v["result"]["all_claims_hold"], true);
}

#[test]
fn envelope_has_the_schema_fields() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas/v1/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let v = json(&run(&["faces", "--text", "x1^2+x1*x2+x2^3"]));
    for key in schema["required"].as_array().unwrap() {
        assert!(v.get(key.as_str().unwrap()).is_some(), "missing {key}");
    }
    for key in schema["properties"]["config"]["required"].as_array().unwrap() {
        assert!(v["config"].get(key.as_str().unwrap()).is_some(), "missing config.{key}");
    }
}
