//! End-to-end runs of the `p4forge` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn p4forge(args: &[&str]) -> Output {
    p4forge_with_input(args, "")
}

fn p4forge_with_input(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_p4forge"))
        .args(args)
        .env_remove("P4FORGE_PRECISION")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().expect("piped").write_all(stdin.as_bytes()).expect("stdin accepts input");
    child.wait_with_output().expect("binary finishes")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("valid JSON")
}

#[test]
fn counts_cographs_on_four_vertices() {
    let o = p4forge(&["count", "--class", "cograph", "--n", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "52");
}

#[test]
fn count_table_as_csv_and_json() {
    let o = p4forge(&["count", "--class", "reducible", "--table", "1..4", "--csv"]);
    assert_eq!(stdout(&o), "class,n,count\nreducible,1,1\nreducible,2,2\nreducible,3,8\nreducible,4,64\n");
    let doc = json(&p4forge(&["count", "--class", "tidy", "--table", "3..5", "--json"]));
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 3);
    assert_eq!(doc["rows"][0]["count"], "8");
}

#[test]
fn constants_cover_all_classes() {
    let doc = json(&p4forge(&["constants", "--class", "all", "--json"]));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let tidy = rows.iter().find(|r| r["class"] == "tidy").unwrap();
    assert!((tidy["R"].as_f64().unwrap() - 0.34434572).abs() < 1e-7);
    assert!((tidy["C"].as_f64().unwrap() - 0.40883495).abs() < 1e-7);
    assert!((tidy["K_P4tilde"].as_f64().unwrap() - 0.29200322).abs() < 1e-7);
    let cograph = rows.iter().find(|r| r["class"] == "cograph").unwrap();
    assert_eq!(cograph["K_P4tilde"].as_f64().unwrap(), 0.0);
}

#[test]
fn precision_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_p4forge"))
        .args(["constants", "--class", "sparse", "--csv"])
        .env("P4FORGE_PRECISION", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_p4forge"))
        .args(["constants", "--class", "sparse", "--csv"])
        .env("P4FORGE_PRECISION", "1e-9")
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn recognizes_a_path_from_standard_input() {
    let p4 = r#"{"n":4,"edges":[[1,2],[2,3],[3,4]]}"#;
    let doc = json(&p4forge_with_input(&["recognize", "--class", "tidy"], p4));
    assert_eq!(doc["member"], true);
    assert!(doc["witness_tree"].as_str().unwrap().starts_with("(P"));
    let doc = json(&p4forge_with_input(&["recognize", "--class", "cograph"], p4));
    assert_eq!(doc["member"], false);
    assert!(doc["violating_node"]["reason"].is_string());
    let doc = json(&p4forge_with_input(&["recognize"], p4));
    assert_eq!(doc["results"].as_array().unwrap().len(), 6);
}

#[test]
fn decomposes_a_join_of_two_edges() {
    let g = r#"{"n":4,"edges":[[1,2],[1,3],[1,4],[2,3],[2,4],[3,4]]}"#;
    let o = p4forge_with_input(&["decompose"], g);
    assert_eq!(stdout(&o).trim(), "(J 1 2 3 4)");
}

#[test]
fn pattern_on_two_leaves_is_balanced() {
    let doc = json(&p4forge(&["pattern", "--class", "lite", "--tau", "(J 1 2)", "--n", "100", "--json"]));
    assert_eq!(doc["probability"], "1/2");
    assert_eq!(doc["probability_float"].as_f64().unwrap(), 0.5);
}

#[test]
fn samples_are_reproducible_and_well_formed() {
    let a = p4forge(&["sample", "--class", "extendible", "--n", "30", "--count", "3", "--seed", "7"]);
    let b = p4forge(&["sample", "--class", "extendible", "--n", "30", "--count", "3", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<Value> = stdout(&a).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|g| g["n"] == 30));
    let pgm = stdout(&p4forge(&["sample", "--class", "tidy", "--n", "12", "--format", "pgm"]));
    assert!(pgm.starts_with("P2\n12 12\n1\n"));
    assert_eq!(pgm.lines().count(), 3 + 12);
}

#[test]
fn stats_report_parses() {
    let doc = json(&p4forge(&["stats", "--class", "cograph", "--n", "20", "--trials", "50", "--json"]));
    assert_eq!(doc["trials"], 50);
    assert_eq!(doc["occ_p4_over_n"]["mean"].as_f64().unwrap(), 0.0);
}

#[test]
fn exit_codes() {
    assert_eq!(p4forge(&["count", "--class", "nope", "--n", "3"]).status.code(), Some(1));
    assert_eq!(p4forge(&["count", "--class", "tidy"]).status.code(), Some(2));
    assert_eq!(p4forge(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(p4forge(&["sample", "--class", "tidy", "--n", "5", "--count", "2", "--format", "dot"]).status.code(), Some(2));
    assert_eq!(p4forge_with_input(&["recognize"], "{not json").status.code(), Some(1));
    assert_eq!(p4forge(&["sample", "--class", "tidy", "--n", "5000"]).status.code(), Some(1));
}

#[test]
fn quick_verification_passes() {
    let o = p4forge(&["verify", "--level", "quick"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 5);
}
