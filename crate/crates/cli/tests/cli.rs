//! Contract tests for the binary: exit statuses, error JSON shape, and
//! byte-level determinism of reports.

use std::path::PathBuf;
use std::process::{Command, Output};

fn sympow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sympow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn sym_count_of_affine_line_is_four() {
    let out = sympow(&["sym-count", "--n", "2", "--q", "2"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["ok"], serde_json::json!(true));
    assert_eq!(v["checks"][0]["lhs"], serde_json::json!(4));
    assert_eq!(
        v["checks"][0]["counts"]["orbit-oracle"],
        serde_json::json!(4)
    );
    assert_eq!(v["checks"][0]["identity_checked"], serde_json::json!(true));
}

#[test]
fn malformed_input_exits_2_with_location() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join("sympow-cli-bad-input.txt");
    std::fs::write(&path, "label=bad; q=2; vars=x; eqs: x^^ + 1\n").unwrap();
    let out = sympow(&["sym-count", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["kind"], serde_json::json!("parse"));
    assert!(v["error"]["line"].is_number());
    assert!(v["error"]["column"].is_number());
}

#[test]
fn bad_prime_power_exits_2() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join("sympow-cli-bad-q.txt");
    std::fs::write(&path, "label=x; q=6; vars=x\n").unwrap();
    let out = sympow(&["sym-count", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["kind"], serde_json::json!("input"));
}

#[test]
fn cap_errors_exit_2() {
    let out = sympow(&["sym-count", "--n", "2", "--q", "3", "--caps", "tuples=1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["kind"], serde_json::json!("cap"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec!["sym-count", "--n", "3", "--q", "3"],
        vec!["kunneth", "--n", "2"],
        vec!["etale-dim", "--n", "2"],
        vec!["lambda-audit", "--seed", "42"],
    ] {
        let a = sympow(&args);
        let b = sympow(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?} must be deterministic");
    }
}

#[test]
fn distinct_seeds_change_the_audit_but_not_its_verdict() {
    let a = sympow(&["lambda-audit", "--seed", "1"]);
    let b = sympow(&["lambda-audit", "--seed", "2"]);
    assert!(a.status.success() && b.status.success());
    let (va, vb) = (stdout_json(&a), stdout_json(&b));
    assert_eq!(va["ok"], serde_json::json!(true));
    assert_eq!(vb["ok"], serde_json::json!(true));
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join("sympow-cli-report.json");
    let _ = std::fs::remove_file(&path);
    let out = sympow(&[
        "invariant-ring",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["ok"], serde_json::json!(true));
    assert!(v["relation"].as_str().unwrap().contains("m^2"));
}

#[test]
fn full_suite_exits_zero() {
    let out = sympow(&["suite", "--seed", "0"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["ok"], serde_json::json!(true));
    assert_eq!(v["checks"].as_array().unwrap().len(), 12);
}

#[test]
fn theta_galois_grid_passes() {
    let out = sympow(&["theta-galois"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    for check in v["checks"].as_array().unwrap() {
        assert_eq!(check["bijection_ok"], serde_json::json!(true));
    }
}
