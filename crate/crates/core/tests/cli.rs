//! The binary: files written and exit status.

use std::fs;
use std::path::Path;
use std::process::Command;

fn run(config: &str, args: &[&str]) -> (i32, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("config.json");
    fs::write(&input, config).unwrap();
    let out = dir.path().join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_tiltsurf"))
        .arg(&input)
        .arg(&out)
        .args(args)
        .status()
        .unwrap();
    (status.code().unwrap(), dir)
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const CHAIN: &str = r#"{"base": 0, "blowups": [
    {"cone": "P|E"}, {"on": 1, "side": "left"}, {"on": 2, "side": "left"}]}"#;

#[test]
fn chain_passes_and_writes_graphs() {
    let (code, dir) = run(CHAIN, &["--dot"]);
    assert_eq!(code, 0);
    let out = dir.path().join("out");
    let report = read_json(&out.join("report.json"));
    let ranks: Vec<i64> = report["candidate"]["summands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["rank"].as_i64().unwrap())
        .collect();
    assert_eq!(ranks, vec![1, 3, 2, 1, 1, 1, 1]);
    assert_eq!(report["certificates"]["tilting"]["pass"], true);
    let dot = fs::read_to_string(out.join("blowup_graph.dot")).unwrap();
    assert!(dot.contains("x1 -- x2") && dot.contains("x2 -- x3"));
    assert!(fs::read_to_string(out.join("ext_graph.dot"))
        .unwrap()
        .starts_with("graph ext"));
}

#[test]
fn same_input_same_bytes() {
    let (_, a) = run(CHAIN, &[]);
    let (_, b) = run(CHAIN, &[]);
    let read = |d: &tempfile::TempDir| fs::read(d.path().join("out/report.json")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn mode_flags() {
    let (code, dir) = run(CHAIN, &["--mode", "2=coextend"]);
    assert_eq!(code, 0);
    let report = read_json(&dir.path().join("out/report.json"));
    assert_eq!(report["candidate"]["blocks"][1]["mode"], "coextend");
    let (code, _) = run(CHAIN, &["--mode", "3=coextend"]);
    assert_eq!(code, 1, "position 3 does not start a block");
    let (code, _) = run(CHAIN, &["--mode", "sideways"]);
    assert_eq!(code, 1);
}

#[test]
fn enumeration_with_a_failing_plan_exits_2() {
    let (code, dir) = run(CHAIN, &["--enumerate", "--dot"]);
    assert_eq!(code, 2);
    let out = dir.path().join("out");
    let summary = read_json(&out.join("summary.json"));
    let plans = summary.as_array().unwrap();
    assert_eq!(plans.len(), 4 * 5 * 6);
    let failed = plans.iter().filter(|p| p["tilting"] != true).count();
    assert!(failed > 0 && failed < plans.len());
    assert!(out.join("plans/plan-0001.json").exists());
    assert!(out.join("plans/plan-0001-ext.dot").exists());
}

#[test]
fn enumeration_that_all_passes_exits_0() {
    let (code, dir) = run(r#"{"base": 1, "blowups": [{"cone": 0}]}"#, &["--enumerate"]);
    assert_eq!(code, 0);
    let summary = read_json(&dir.path().join("out/summary.json"));
    assert_eq!(summary.as_array().unwrap().len(), 4);
}

#[test]
fn max_plans_is_enforced() {
    let (code, _) = run(CHAIN, &["--enumerate", "--max-plans", "10"]);
    assert_eq!(code, 1);
}

#[test]
fn bad_inputs_exit_1() {
    assert_eq!(run(r#"{"base": "P2"}"#, &[]).0, 1);
    assert_eq!(
        run(r#"{"base": 0, "blowups": [{"cone": "P|P'"}]}"#, &[]).0,
        1
    );
    assert_eq!(run("not json", &[]).0, 1);
    assert_eq!(run(r#"{"base": -1}"#, &[]).0, 1);
}
