use prelie_web::{character, homology, trees};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn tree_counts() {
    let v = parse(trees(3));
    assert_eq!(v["count"], 9);
    assert_eq!(v["trees"].as_array().unwrap().len(), 9);
    assert_eq!(parse(trees(6))["count"], 7776);
    assert!(parse(trees(0))["error"].is_string());
}

#[test]
fn characters() {
    let v = parse(character("zx", 3));
    assert_eq!(v["p"], "2/3*p[1,1,1] + 1/3*p[3]");
    assert_eq!(v["schur"].as_array().unwrap().len(), 3);
    assert!(parse(character("zq", 3))["error"].is_string());
    assert!(parse(character("zw", 30))["error"].is_string());
}

#[test]
fn homology_rows() {
    let v = parse(homology(3));
    assert_eq!(v["rows"][0]["dims_by_q"], serde_json::json!([0, 4, 0, 0]));
    assert_eq!(v["rows"][2]["dims_by_q"][0], 3);
    assert!(parse(homology(6))["error"].is_string());
}
