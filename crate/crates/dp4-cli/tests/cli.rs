//! End-to-end tests of the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn dp4(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dp4"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn sample_chain() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data/sample_chain.json")
        .display()
        .to_string()
}

#[test]
fn lines_counts_and_schema() {
    for (degree, expected) in [("4", 16), ("3", 27), ("2", 56), ("1", 240)] {
        let out = dp4(&["lines", "--degree", degree, "--json"]);
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["schema_version"], "1");
        assert_eq!(v["outputs"]["count"], expected);
        assert_eq!(v["outputs"]["lines"].as_array().unwrap().len(), expected);
    }
}

#[test]
fn lines_bad_degree_is_a_usage_error() {
    let out = dp4(&["lines", "--degree", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn verify_suites_pass() {
    for suite in [
        "parity",
        "unique-section",
        "aut-order",
        "relation",
        "theta-uniqueness",
        "roundtrip",
    ] {
        let out = dp4(&["verify", suite]);
        assert!(out.status.success(), "suite {suite} failed: {:?}", out);
        assert!(stdout(&out).contains("pass"));
    }
    let out = dp4(&["verify", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["lines", "--degree", "4", "--json"],
        vec!["galois", "--gens", "i1234,(12)", "--json"],
        vec!["chain", &sample_chain(), "--json"],
        vec!["involutions", "--json"],
        vec!["marking", "--json"],
    ] {
        let a = dp4(&args);
        let b = dp4(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "non-deterministic output for {args:?}");
    }
}

#[test]
fn galois_minimal_subgroup() {
    let out = dp4(&[
        "galois",
        "--gens",
        "i1234,i1235,i1245,i1345",
        "--deg2",
        "--json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["outputs"]["subgroup_order"], 16);
    assert_eq!(v["outputs"]["invariant_rank"], 1);
    assert_eq!(v["outputs"]["minimal"], true);
    assert_eq!(v["outputs"]["links"]["verdict"], "rigid");
}

#[test]
fn galois_empty_generators_refuse_links() {
    let out = dp4(&["galois", "--gens", "", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["outputs"]["invariant_rank"], 6);
    assert_eq!(v["outputs"]["minimal"], false);
    assert!(v["outputs"]["links"].is_null());
    assert!(v["outputs"]["link_refusal"]
        .as_str()
        .unwrap()
        .contains("refused"));
}

#[test]
fn galois_h1_of_order_two_sign_group() {
    let out = dp4(&["galois", "--gens", "i1234", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["outputs"]["h1_classes"], 16);
}

#[test]
fn galois_bad_generator_token() {
    let out = dp4(&["galois", "--gens", "i123x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("i123x"));
}

#[test]
fn chain_sample_is_certified() {
    let out = dp4(&["chain", &sample_chain(), "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["outputs"]["n_equivariant"], true);
    assert_eq!(v["outputs"]["g_equivariant"], true);
    assert_eq!(v["outputs"]["invariant_preserved"], true);
    let images = v["outputs"]["line_images"].as_array().unwrap();
    assert_eq!(images.len(), 6);
    assert_eq!(images[0][0], "Q");
}

#[test]
fn chain_wrong_move_order_is_an_error() {
    let dir = std::env::temp_dir().join("dp4-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad_chain.json");
    std::fs::write(&path, r#"{"moves": [{"type": "blowdown"}]}"#).unwrap();
    let out = dp4(&["chain", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("move 1"));
}

#[test]
fn involutions_lists_five_quadrics() {
    let out = dp4(&["involutions", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let quadrics = v["outputs"]["quadric"].as_array().unwrap();
    assert_eq!(quadrics.len(), 5);
    assert_eq!(v["outputs"]["geiser_dp2"].as_array().unwrap().len(), 8);
    assert_eq!(v["outputs"]["bertini_dp1"].as_array().unwrap().len(), 9);
}

#[test]
fn marking_standard_and_file() {
    let out = dp4(&["marking", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["outputs"]["q"], serde_json::json!([2, -1, -1, -1, -1, -1]));
    assert_eq!(v["outputs"]["label_count"], 16);

    let dir = std::env::temp_dir().join("dp4-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad_marking.json");
    // L1 does not meet Q.
    std::fs::write(
        &path,
        r#"{"Q": [2,-1,-1,-1,-1,-1], "L": [[1,-1,-1,0,0,0],[0,0,1,0,0,0],[0,0,0,1,0,0],[0,0,0,0,1,0],[0,0,0,0,0,1]]}"#,
    )
    .unwrap();
    let out = dp4(&["marking", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
