//! End-to-end runs of the `georadon` binary.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn georadon(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_georadon"))
        .args(args)
        .env("GEORADON_OUT_DIR", dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn invert_reconstructs_the_gaussian() {
    let dir = tempfile::tempdir().unwrap();
    let out = georadon(
        dir.path(),
        &["invert", "--space", "euclidean", "--n", "3", "--k", "2", "--theorem", "1", "--phantom", "gaussian", "--point", "0,0,0"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["estimate"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    for key in ["estimate", "truth", "rel_error", "constant", "residual", "seed"] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }
    let csv = std::fs::read_to_string(dir.path().join("invert.csv")).unwrap();
    assert!(csv.starts_with("r,value\n"));
    assert_eq!(csv.lines().count(), 26);
}

#[test]
fn sphere_constant_is_four_pi() {
    let dir = tempfile::tempdir().unwrap();
    let out = georadon(dir.path(), &["constants", "--space", "sphere", "--n", "2", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let c = json(&out)["constant"].as_f64().unwrap();
    assert!((c - 4.0 * std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn lemma_verify_passes_and_fails_honestly() {
    let dir = tempfile::tempdir().unwrap();
    let out = georadon(dir.path(), &["lemma-verify", "--alpha", "0.5", "--m", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("lemma-verify.csv")).unwrap();
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("u,closed,oracle,abs_error"));
    for row in rows {
        let err: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(err < 1e-7);
    }
    let strict = georadon(dir.path(), &["lemma-verify", "--alpha", "0.5", "--m", "1", "--tol", "1e-30"]);
    assert_eq!(strict.status.code(), Some(2));
}

#[test]
fn identical_runs_give_identical_json() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "crosscheck", "--space", "hyperbolic", "--n", "2", "--k", "1", "--phantom", "hyperbolic-radial", "--point",
        "0.2,0.1,1.0246950765959597", "--r", "0.4", "--mc-samples", "2000", "--seed", "17",
    ];
    let first = georadon(a.path(), &args);
    let second = georadon(b.path(), &args);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(
        std::fs::read(a.path().join("crosscheck.json")).unwrap(),
        std::fs::read(b.path().join("crosscheck.json")).unwrap()
    );
    let other = georadon(a.path(), &[&args[..args.len() - 1], &["18"]].concat());
    assert_ne!(first.stdout, other.stdout);
}

#[test]
fn usage_and_domain_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(georadon(dir.path(), &["no-such-command"]).status.code(), Some(1));
    let out = georadon(dir.path(), &["invert", "--space", "euclidean", "--n", "2", "--k", "1", "--theorem", "1", "--phantom", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
    let out = georadon(dir.path(), &["crosscheck", "--space", "sphere", "--n", "2", "--k", "1", "--phantom", "constant", "--r", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`r`"));
    let out = georadon(dir.path(), &["invert", "--space", "hyperbolic", "--n", "2", "--k", "1", "--theorem", "1", "--point", "0,0,2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn means_profile_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = georadon(
        dir.path(),
        &["means", "--space", "sphere", "--n", "2", "--k", "1", "--phantom", "constant", "--t=-0.5,0,0.5"],
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("means.csv")).unwrap();
    let values: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(values.len(), 3);
    assert!(values.iter().all(|v| (v - 1.0).abs() < 1e-12));
}

#[test]
fn report_subset() {
    let dir = tempfile::tempdir().unwrap();
    let out = georadon(dir.path(), &["report", "--only", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS criterion  2"));
    assert_eq!(georadon(dir.path(), &["report", "--only", "40"]).status.code(), Some(1));
}
