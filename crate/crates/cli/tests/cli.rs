use std::process::{Command, Output};

use hyperjac_cli::report::REPORT_SCHEMA;
use jsonschema::JSONSchema;
use serde_json::Value;

fn hyperjac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperjac"))
        .args(args)
        .env_remove("HYPERJAC_MAX_ELEMENTS")
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

fn schema() -> JSONSchema {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    JSONSchema::compile(&schema).expect("schema compiles")
}

#[test]
fn passing_checks_exit_zero() {
    for args in [
        vec!["braid-relations", "--genus", "3"],
        vec!["mod2-quotient", "--genus", "2"],
        vec!["full-sp-g1", "--level", "3"],
        vec!["theorem", "--genus", "1", "--level", "3"],
        vec!["mod4-rank", "--genus", "2"],
        vec!["rep", "--genus", "1", "--word", "1,2,-1", "--level", "2"],
    ] {
        let out = hyperjac(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
        assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS"), "{args:?}");
    }
}

#[test]
fn reports_match_schema() {
    let schema = schema();
    let out = hyperjac(&["--json", "all", "--genus", "1", "--level", "2", "--seed", "3", "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    assert!(lines.len() > 5);
    for v in &lines {
        assert!(schema.is_valid(v), "invalid report: {v}");
        assert_eq!(v["passed"], Value::Bool(true), "{v}");
    }
    assert!(lines.iter().any(|v| v.get("points").is_some()));
}

#[test]
fn schema_rejects_malformed_reports() {
    let schema = schema();
    let good: Value = json_lines(&hyperjac(&["--json", "mod4-rank", "--genus", "1"])).remove(0);
    assert!(schema.is_valid(&good));
    let mut extra = good.clone();
    extra["unexpected"] = Value::Bool(true);
    assert!(!schema.is_valid(&extra));
    let mut wrong_version = good.clone();
    wrong_version["schema"] = Value::from("2");
    assert!(!schema.is_valid(&wrong_version));
    let mut missing = good;
    missing.as_object_mut().unwrap().remove("passed");
    assert!(!schema.is_valid(&missing));
}

#[test]
fn usage_errors_exit_three() {
    for args in [
        vec!["theorem", "--genus", "0", "--level", "2"],
        vec!["theorem", "--genus", "1", "--level", "0"],
        vec!["no-such-command"],
        vec!["torsion4", "--specialize", "0,1,2"],
        vec!["rep", "--genus", "1", "--word", "5"],
    ] {
        assert_eq!(hyperjac(&args).status.code(), Some(3), "{args:?}");
    }
    assert_eq!(hyperjac(&["--help"]).status.code(), Some(0));
    assert_eq!(hyperjac(&["--version"]).status.code(), Some(0));
}

#[test]
fn element_cap_exits_two_and_flag_beats_env() {
    let args = ["theorem", "--genus", "2", "--level", "2"];
    let capped = hyperjac(&["--max-elements", "100", args[0], args[1], args[2], args[3], args[4]]);
    assert_eq!(capped.status.code(), Some(2));

    let env_capped = Command::new(env!("CARGO_BIN_EXE_hyperjac"))
        .args(args)
        .env("HYPERJAC_MAX_ELEMENTS", "100")
        .output()
        .unwrap();
    assert_eq!(env_capped.status.code(), Some(2));

    let overridden = Command::new(env!("CARGO_BIN_EXE_hyperjac"))
        .args(["--max-elements", "5000", args[0], args[1], args[2], args[3], args[4]])
        .env("HYPERJAC_MAX_ELEMENTS", "100")
        .output()
        .unwrap();
    assert_eq!(overridden.status.code(), Some(0));
}

#[test]
fn injected_fault_is_detected() {
    for args in [
        vec!["--inject-fault", "theorem", "--genus", "1", "--level", "2"],
        vec!["--inject-fault", "braid-relations", "--genus", "2"],
        vec!["--inject-fault", "mod4-rank", "--genus", "2"],
    ] {
        let out = hyperjac(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"), "{args:?}");
    }
}

#[test]
fn seeded_runs_are_reproducible() {
    let run = || {
        json_lines(&hyperjac(&["--json", "purity", "--genus", "2", "--samples", "200", "--seed", "11"]))
            .into_iter()
            .map(|mut v| {
                v.as_object_mut().unwrap().remove("elapsed_ms");
                v
            })
            .collect::<Vec<_>>()
    };
    let first = run();
    assert!(!first.is_empty());
    assert_eq!(first, run());
    assert_eq!(first[0]["seed"], Value::from(11));
}

#[test]
fn dump_lists_every_element_once() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g1n2.txt");
    let out = hyperjac(&["theorem", "--genus", "1", "--level", "2", "--dump", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    let mut sorted = lines.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted, lines);
}
