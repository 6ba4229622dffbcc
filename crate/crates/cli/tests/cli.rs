use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    p.to_str().unwrap().to_string()
}

fn relquiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relquiv"))
        .args(args)
        .env_remove("RELQUIV_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch_file(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("relquiv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn validate_string_not_gentle() {
    let o = relquiv(&["validate", &fixture("fix-b.bqv")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("string=true gentle=false"));
    let o = relquiv(&["validate", &fixture("fix-b.bqv"), "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["is_string"], true);
    assert_eq!(v["g1"]["violations"][0]["kind"], "zero_predecessors");
}

#[test]
fn validate_failure_exits_2() {
    let f = scratch_file(
        "three-in.bqv",
        "vertices: 1 2 3 4\narrow a: 1 -> 4\narrow b: 2 -> 4\narrow c: 3 -> 4\n",
    );
    let o = relquiv(&["validate", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("S2:"));
    assert_eq!(relquiv(&["arrows", &f]).status.code(), Some(2));
}

#[test]
fn parse_and_usage_errors_exit_1() {
    let f = scratch_file("bad.bqv", "vertices: 1 2\narrow a 1 -> 2\n");
    let o = relquiv(&["validate", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(relquiv(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        relquiv(&["ext", &fixture("fix-a.bqv")]).status.code(),
        Some(1)
    );
    let bad_interval = relquiv(&["resolve", &fixture("fix-c.bqv"), "--interval", "3-9"]);
    assert_eq!(bad_interval.status.code(), Some(1));
}

#[test]
fn resolve_interval_ascii_and_json() {
    let o = relquiv(&["resolve", &fixture("fix-c.bqv"), "--interval", "3:9"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(
        out.lines().next().unwrap(),
        "0 → P(13) → P(12) → P(16) ⊕ P(11) ⊕ P(6) → P(10) ⊕ P(4) → P(3) → M[3,9] → 0"
    );
    assert!(out.contains("[10,15]"));
    let co = relquiv(&[
        "resolve",
        &fixture("fix-c.bqv"),
        "--interval",
        "3:9",
        "--co",
    ]);
    assert_eq!(
        stdout(&co).lines().next().unwrap(),
        "0 → M[3,9] → I(9) → I(1) → 0"
    );
    let v = json(&relquiv(&[
        "resolve",
        &fixture("fix-c.bqv"),
        "--interval",
        "3:9",
        "--format",
        "json",
    ]));
    assert!(v.is_object());
}

#[test]
fn resolve_injective_and_projective() {
    let o = relquiv(&["resolve", &fixture("fix-f.bqv"), "--injective", "1"]);
    assert_eq!(
        stdout(&o).lines().next().unwrap(),
        "0 → P(3) ⊕ P(4) → P(2) → P(1) → I(1) → 0"
    );
    let o = relquiv(&["resolve", &fixture("fix-c.bqv"), "--projective", "16"]);
    assert_eq!(
        stdout(&o).lines().next().unwrap(),
        "0 → P(16) → I(17) → I(15) → I(3) → I(2) → 0"
    );
}

#[test]
fn ext_prints_witnesses() {
    let o = relquiv(&[
        "ext",
        &fixture("fix-f.bqv"),
        "--c",
        "1",
        "--z",
        "2",
        "--degree",
        "2",
        "--format",
        "json",
        "--strict",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["oracle_dim"], 1);
    assert_eq!(v["witnesses"][0]["kind"], "difference");
    let o = relquiv(&[
        "ext",
        &fixture("fix-b.bqv"),
        "--c",
        "1",
        "--z",
        "5",
        "--degree",
        "2",
    ]);
    assert!(stdout(&o).contains("path d"));
}

#[test]
fn arrows_with_provenance() {
    let o = relquiv(&["arrows", &fixture("fix-b.bqv"), "--strict"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let names: Vec<&str> = v["arrows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["x_4_5_2", "x_5_1_2", "x_4_1_3"]);
    assert_eq!(v["oracle"]["agrees"], true);
    assert_eq!(v["arrows"][1]["witness"]["path"], serde_json::json!(["d"]));
}

#[test]
fn extend_fix_e_tensor() {
    let o = relquiv(&["extend", &fixture("fix-e.bqv"), "--mode", "tensor"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let new: Vec<(&str, &str)> = v["arrows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|a| a["kind"] == "new")
        .map(|a| (a["src"].as_str().unwrap(), a["tgt"].as_str().unwrap()))
        .collect();
    assert_eq!(new, [("3", "1"), ("6", "4")]);
    let rels = v["relations"].as_array().unwrap();
    assert_eq!(rels.len(), 6);
    assert!(rels.iter().all(|r| r.as_array().unwrap().len() == 2));
    assert_eq!(v["flags"]["gentle"], true);
}

#[test]
fn extend_fix_e_trivial() {
    let v = json(&relquiv(&[
        "extend",
        &fixture("fix-e.bqv"),
        "--mode",
        "trivial",
    ]));
    let rels = v["relations"].as_array().unwrap();
    assert!(rels.contains(&serde_json::json!(["x_6_4_2", "r", "x_3_1_2"])));
    assert_eq!(v["flags"]["gentle"], false);
    assert_eq!(v["flags"]["monomial"], true);
}

#[test]
fn extend_dot_and_unspecified_relations() {
    let o = relquiv(&["extend", &fixture("fix-a.bqv"), "--format", "dot"]);
    assert!(stdout(&o).contains("\"4\" -> \"1\" [label=\"x_4_1_2\", style=dashed];"));
    let o = relquiv(&["extend", &fixture("fix-d.bqv")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["relations_status"], "unspecified");
    assert_eq!(v["flags"]["has_2_cycle"], true);
}

#[test]
fn oracle_json_and_csv() {
    let v = json(&relquiv(&[
        "oracle",
        &fixture("fix-a.bqv"),
        "--degree",
        "2",
    ]));
    assert_eq!(v["entries"][3][0], 1);
    assert_eq!(
        v["entries"]
            .as_array()
            .unwrap()
            .iter()
            .flat_map(|r| r.as_array().unwrap())
            .filter(|x| **x != 0)
            .count(),
        1
    );
    let o = relquiv(&[
        "oracle",
        &fixture("fix-e.bqv"),
        "--degree",
        "2",
        "--format",
        "csv",
    ]);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "z\\c,1,2,3,4,5,6");
    assert_eq!(lines[3], "3,1,0,0,0,0,0");
    assert_eq!(lines[6], "6,0,0,0,1,0,0");
    let beyond = json(&relquiv(&[
        "oracle",
        &fixture("fix-a.bqv"),
        "--degree",
        "5",
    ]));
    assert!(beyond["entries"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|r| r.as_array().unwrap())
        .all(|x| *x == 0));
}

#[test]
fn selftest_runs() {
    let o = relquiv(&["selftest", "--iterations", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("instances=0 checks=0 failures=0"));
    let o = relquiv(&[
        "selftest",
        "--iterations",
        "12",
        "--max-vertices",
        "7",
        "--strict",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = relquiv(&[
        "selftest",
        "--iterations",
        "6",
        "--gentle",
        "--format",
        "json",
    ]);
    assert_eq!(json(&o)["failures"], serde_json::json!([]));
}

#[test]
fn seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_relquiv"))
        .args(["selftest", "--iterations", "2"])
        .env("RELQUIV_SEED", "77")
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("selftest seed=77 "));
    let o = Command::new(env!("CARGO_BIN_EXE_relquiv"))
        .args(["selftest", "--iterations", "2", "--seed", "5"])
        .env("RELQUIV_SEED", "77")
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("selftest seed=5 "));
}
