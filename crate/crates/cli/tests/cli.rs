use std::process::{Command, Output};

use serde_json::Value;

fn prelie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_prelie"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = prelie(&all);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn tree_counts_and_lists() {
    assert_eq!(stdout(&prelie(&["trees", "--n", "4", "count"])), "64\n");
    assert_eq!(stdout(&prelie(&["trees", "--n", "1", "list"])), "1\n");
    let listed = stdout(&prelie(&["trees", "--n", "3", "list"]));
    assert_eq!(listed.lines().count(), 9);
    assert_eq!(json(&["trees", "--n", "5", "count"])["count"], 625);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        prelie(&["trees", "--n", "0", "count"]).status.code(),
        Some(2)
    );
    assert_eq!(
        prelie(&["trees", "--n", "7", "list"]).status.code(),
        Some(2)
    );
    assert_eq!(
        prelie(&["char", "zy", "--degree", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(prelie(&["homology", "--n", "9"]).status.code(), Some(2));
    assert_eq!(prelie(&["verify", "--max-n", "5"]).status.code(), Some(2));
    assert_eq!(prelie(&["frobnicate"]).status.code(), Some(2));
    let o = prelie(&["homology", "--n", "9"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn characters() {
    assert_eq!(
        stdout(&prelie(&["char", "zx", "--degree", "3", "--basis", "p"])),
        "2/3*p[1,1,1] + 1/3*p[3]\n"
    );
    assert_eq!(stdout(&prelie(&["char", "zw", "--degree", "1"])), "p[1]\n");
    let v = json(&["char", "zx", "--degree", "3", "--basis", "schur"]);
    let terms = v["components"][0]["terms"].as_array().unwrap();
    let mult: Vec<(String, String)> = terms
        .iter()
        .map(|t| {
            (
                t["partition"].to_string(),
                t["multiplicity"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert_eq!(
        mult,
        vec![
            ("[1,1,1]".to_string(), "1".to_string()),
            ("[2,1]".to_string(), "1".to_string()),
            ("[3]".to_string(), "1".to_string()),
        ]
    );
    let v = json(&["char", "zlambdaw", "--degree", "2"]);
    assert_eq!(v["components"].as_array().unwrap().len(), 2);
}

#[test]
fn homology() {
    let v = json(&["homology", "--n", "2", "--row", "0"]);
    assert_eq!(v["rows"][0]["dims_by_q"], serde_json::json!([0, 1, 0]));
    assert_eq!(v["rows"][0]["concentrated_at"], 1);
    let v = json(&["homology", "--n", "4", "--table"]);
    // H(4, 2, 2): p = 2, r = 2, so q = 0
    assert_eq!(v["rows"][2]["dims_by_q"][0], 18);
    assert_eq!(v["rows"][3]["dims_by_q"][0], 8);
    let ff = json(&["homology", "--n", "4", "--method", "fraction-free"]);
    assert_eq!(v, ff);
}

#[test]
fn series_lines() {
    let text = stdout(&prelie(&["series", "--degree", "4", "fw"]));
    assert_eq!(text, "0: 0\n1: 1\n2: 2\n3: 9\n4: 64\n");
    let v = json(&["series", "--degree", "2", "bicomplex"]);
    assert_eq!(v["coefficients"][1], "-t + s");
}

#[test]
fn verify_quick_is_deterministic() {
    let a = prelie(&["--json", "verify", "--profile", "quick"]);
    let b = prelie(&["verify", "--profile", "quick", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["status"], "ok");
    assert_eq!(v["suite_version"], "1");
    assert_eq!(v["checks"].as_array().unwrap().len(), 10);
}

#[test]
fn tampered_formula_fails() {
    let o = prelie(&[
        "--json", "verify", "--tamper", "--max-n", "2", "--degree", "4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["first_failure"], "a05_main_theorem");
    let check = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "a05_main_theorem")
        .unwrap();
    let d = &check["details"]["reports"][0]["first_discrepancy"];
    assert_eq!(d["degree"], 3);
    assert_eq!(d["partition"], serde_json::json!([2, 1]));
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("prelie-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = prelie(&[
        "--json",
        "--out",
        path.to_str().unwrap(),
        "trees",
        "--n",
        "3",
        "count",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), o.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
