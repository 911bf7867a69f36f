use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rabcone")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value, String) {
    let mut all = args.to_vec();
    all.extend(["--json", "-"]);
    let out = run(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (out.status.code().unwrap(), v, text)
}

fn column(v: &Value, table: &str, col: usize) -> Vec<Value> {
    v["tables"][table]["rows"].as_array().unwrap().iter().map(|r| r[col].clone()).collect()
}

#[test]
fn endomorphisms_of_free_module() {
    let (code, v, _) = json(&["rab", "F(0)", "F(0)", "--window", "-8", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["symbolic"]["H0"], "LS");
    let dims = column(&v, "H0", 1);
    assert_eq!(dims.len(), 13);
    assert!(dims.iter().all(|d| d == 1));
}

#[test]
fn ext_of_laurent_into_free() {
    let (code, v, _) = json(&["rhom", "L", "F(0)"]);
    assert_eq!(code, 0);
    assert_eq!(v["symbolic"]["H0"], "0");
    assert_eq!(v["symbolic"]["H1"], "Q(0)");
    assert!(column(&v, "H0", 1).iter().all(|d| d == 0));
}

#[test]
fn verify_commands() {
    assert_eq!(run(&["verify", "appendix-b", "--n", "6", "--window", "0", "8"]).status.code(), Some(0));
    let (code, v, _) = json(&["verify", "extension", "--n", "6", "--window", "0", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["config"]["obstructed at"], 6);
    // interior ends below the truncation: no obstruction is visible
    assert_eq!(run(&["verify", "extension", "--n", "6", "--window", "0", "6"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "adjunction", "--grid", "1", "--field", "fp:10007"]).status.code(), Some(0));
}

#[test]
fn remark_agrees() {
    let (code, v, _) = json(&["remark", "F(1)", "F(-1)", "--window", "-8", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["symbolic"]["H0"], "LS(-2)");
    assert_eq!(v["verdicts"]["H0 agrees with the cone form"], true);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["rhom", "X", "F(0)"]).status.code(), Some(2));
    assert_eq!(run(&["rhom", "L", "F(0)", "--field", "fp:10"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["rab", "F(0)", "F(0)", "--window", "0", "2", "--margin", "2"]).status.code(), Some(2));
    assert_eq!(run(&["rab", "L", "F(0)"]).status.code(), Some(2));
}

#[test]
fn json_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["rab", "F(0) + T(2,0)", "F(1)", "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);
    assert_eq!(v["symbolic"]["H0"], "LS(1)");
}

#[test]
fn compose_class_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("classes.json");
    let classes = r#"{"classes": [
        {"source": "F(0)", "target": "F(0)", "f": [["0"]], "g": [["t^2"]]},
        {"source": "F(0)", "target": "F(0)", "f": [["0"]], "g": [["t^3"]]}
    ]}"#;
    std::fs::write(&path, classes).unwrap();
    let (code, v, _) = json(&["compose", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["tables"]["g"]["rows"][0][0], "t^5");
    assert_eq!(v["tables"]["f"]["rows"][0][0], "0");

    let bad = r#"{"classes": [
        {"source": "F(0)", "target": "F(0)", "f": [["0"]], "g": [["1/(1-t)"]]},
        {"source": "F(0)", "target": "F(0)", "f": [["0"]], "g": [["t"]]}
    ]}"#;
    std::fs::write(&path, bad).unwrap();
    assert_eq!(run(&["compose", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, "not json").unwrap();
    assert_eq!(run(&["compose", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn selftest_is_deterministic() {
    let (code, _, a) = json(&["selftest", "--field", "fp:65537", "--seed", "5"]);
    assert_eq!(code, 0);
    let (_, _, b) = json(&["selftest", "--field", "fp:65537", "--seed", "5"]);
    assert_eq!(a, b);
}
