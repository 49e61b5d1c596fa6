use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pseudosched"))
        .current_dir(dir)
        .env_remove("PSEUDOSCHED_SEED")
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn grid_pipeline_verifies() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--kind", "grid", "--rows", "4", "--cols", "4", "--out", "g.json"]);
    ok(d, &["solve", "--algo", "twice-degree", "--root", "0", "--in", "g.json", "--out", "s.json", "--tree-out", "t.json"]);
    let v = json(&ok(d, &["verify", "--in", "g.json", "--schedule", "s.json", "--tree", "t.json"]));
    assert_eq!(v["pseudo"], true);
    assert_eq!(v["t_pseudo"], true);
    // Without a tree the T-pseudo verdict is null.
    let v = json(&ok(d, &["verify", "--in", "g.json", "--schedule", "s.json"]));
    assert_eq!(v["t_pseudo"], Value::Null);
}

#[test]
fn dband_auto_picks_three_on_bfs() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--kind", "gnp", "--n", "30", "--p", "0.2", "--seed", "3", "--out", "g.json"]);
    let out = run(d, &["solve", "--algo", "dband", "--d", "auto", "--tree", "bfs", "--in", "g.json", "--out", "s.json", "--trace", "t.jsonl", "--tree-out", "tree.json"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("d = 3,"));
    let v = json(&ok(d, &["verify", "--in", "tree.json", "--schedule", "s.json"]));
    assert_eq!(v["t_pseudo"], true);
    let summary = json(&ok(d, &["trace-inspect", "--trace", "t.jsonl", "--json"]));
    assert_eq!(summary["colored"].as_array().unwrap().len(), 30);
    let total: u64 = summary["histogram"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(summary["deliveries"].as_u64().unwrap(), total);
    assert!(ok(d, &["trace-inspect", "--trace", "t.jsonl"]).contains("cycle breaks:"));
}

#[test]
fn gadget_trace_records_breaks() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--kind", "gadget", "--k", "4", "--cycle-type", "II", "--out", "g.json", "--dot", "g.dot"]);
    assert!(std::fs::read_to_string(d.join("g.dot")).unwrap().contains("style=dashed"));
    ok(d, &["solve", "--algo", "dband", "--in", "g.json", "--out", "s.json", "--trace", "t.jsonl"]);
    let summary = json(&ok(d, &["trace-inspect", "--trace", "t.jsonl", "--json"]));
    assert!(!summary["cycle_breaks"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--kind", "path", "--n", "3", "--out", "p.json"]);
    std::fs::write(d.join("bad.json"), r#"{"colors":[0,0,0]}"#).unwrap();
    assert_eq!(run(d, &["verify", "--in", "p.json", "--schedule", "bad.json"]).status.code(), Some(1));
    assert_eq!(run(d, &["verify", "--in", "missing.json", "--schedule", "bad.json"]).status.code(), Some(2));
    std::fs::write(d.join("loop.json"), r#"{"n":2,"edges":[[1,1]]}"#).unwrap();
    assert_eq!(run(d, &["solve", "--algo", "twice-degree", "--in", "loop.json"]).status.code(), Some(2));
    ok(d, &["gen", "--kind", "grid", "--rows", "4", "--cols", "4", "--out", "g.json"]);
    assert_eq!(run(d, &["solve", "--algo", "dband", "--budget", "10", "--in", "g.json"]).status.code(), Some(3));
    assert_eq!(run(d, &["gen", "--kind", "grid", "--rows", "4"]).status.code(), Some(2));
}

#[test]
fn seed_env_fallback_matches_flag() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let flagged = ok(d, &["gen", "--kind", "gnp", "--n", "20", "--p", "0.3", "--seed", "42"]);
    let from_env = Command::new(env!("CARGO_BIN_EXE_pseudosched"))
        .current_dir(d)
        .env("PSEUDOSCHED_SEED", "42")
        .args(["gen", "--kind", "gnp", "--n", "20", "--p", "0.3"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(from_env.stdout).unwrap(), flagged);
    assert_ne!(ok(d, &["gen", "--kind", "gnp", "--n", "20", "--p", "0.3", "--seed", "43"]), flagged);
}

#[test]
fn oracle_and_greedy() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(d, &["gen", "--kind", "path", "--n", "4", "--out", "p.json"]);
    let c = json(&ok(d, &["oracle", "--in", "p.json", "--min-pseudo", "--max-colors", "4"]));
    assert_eq!(c["colors"].as_array().unwrap().len(), 4);
    assert_eq!(run(d, &["oracle", "--in", "p.json", "--min-pseudo", "--max-colors", "2"]).status.code(), Some(1));
    std::fs::write(d.join("order.json"), "[3, 2, 1, 0]").unwrap();
    let c = json(&ok(d, &["solve", "--algo", "greedy-strict", "--order", "order.json", "--in", "p.json"]));
    assert_eq!(c["colors"], serde_json::json!([0, 2, 1, 0]));
}

#[test]
fn bench_star_row() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let table = ok(d, &["bench", "--family", "star", "--algo", "dband", "--d", "2", "--json", "r.json"]);
    assert!(table.contains("dG^2+1"));
    let report = json(&std::fs::read_to_string(d.join("r.json")).unwrap());
    let row = report["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["instance"] == "star-10")
        .unwrap();
    assert_eq!(row["h_max"], 20);
    assert_eq!(row["bounds"]["lower"], 19);
    assert_eq!(row["bounds"]["upper"], 36);
    assert_eq!(row["envelope_strict"], 101);
}
