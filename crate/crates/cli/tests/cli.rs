use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hyperdet"));
    c.env_remove("HYPERDET_TOL").env_remove("HYPERDET_THREADS");
    c
}

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    root.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> (i32, Value, Output) {
    let out = bin().args(args).output().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, out)
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn verify_three_points() {
    let (code, v, _) = run(&["verify", &fixture("three_points.json"), "--tol", "1e-6"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], Value::Bool(true));
    assert!(f(&v["deviation"]) <= 1e-6);
    // Γ(1.6)Γ(1.8)Γ(2.1)/Γ(3.5), evaluated independently at 30 digits.
    assert!((f(&v["beta"]["re"]) - 0.262_052_214_677_828_6).abs() < 1e-13);
    assert_eq!(v["matrix"]["entries"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_two_points_exponential() {
    let (code, v, _) = run(&["verify", &fixture("two_points_exp.json"), "--with-f0", "--tol", "1e-6", "--convergence"]);
    assert_eq!(code, 0);
    assert!(f(&v["deviation"]) <= 1e-6);
    assert_eq!(v["convergence"]["monotone"], Value::Bool(true));
}

#[test]
fn zero_denominator_is_a_schema_error() {
    let (code, v, _) = run(&["verify", &fixture("bad_rational.json")]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "SchemaError");
}

#[test]
fn malformed_json_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("broken.json");
    std::fs::write(&p, "{\"dimension\": 1,").unwrap();
    let (code, v, _) = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "ParseError");
}

#[test]
fn with_f0_needs_f0() {
    let (code, v, _) = run(&["verify", &fixture("three_points.json"), "--with-f0"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "SchemaError");
}

#[test]
fn non_essential_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("parallel.json");
    let doc = r#"{"dimension": 2, "hyperplanes": [
        {"coeffs": ["1", "0"], "const": "0", "weight": {"re": 0.5}},
        {"coeffs": ["1", "0"], "const": "-1", "weight": {"re": 0.5}}]}"#;
    std::fs::write(&p, doc).unwrap();
    let (code, v, _) = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "ArrangementError");
}

#[test]
fn flipped_chamber_fails_with_exit_one() {
    let (code, v, _) = run(&["verify", &fixture("three_points.json"), "--flip", "0"]);
    assert_eq!(code, 1);
    assert!(f(&v["deviation"]) >= 0.5);
}

#[test]
fn branch_shift_keeps_the_identity() {
    let (code, v, _) = run(&["verify", &fixture("three_points.json"), "--shift", "1:0:1"]);
    assert_eq!(code, 0, "{v}");
    let (code, _, _) = run(&["verify", &fixture("three_points.json"), "--shift", "1:0"]);
    assert_eq!(code, 2);
}

#[test]
fn tolerance_from_environment() {
    let out = bin().args(["verify", &fixture("three_points.json")]).env("HYPERDET_TOL", "1e-300").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(f(&v["tolerance"]), 1e-300);
}

#[test]
fn threads_from_environment() {
    let out = bin().args(["verify", &fixture("three_points.json")]).env("HYPERDET_THREADS", "1").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn analyze_round_trip() {
    let (code, first, out) = run(&["analyze", &fixture("four_lines.json"), "--with-f0"]);
    assert_eq!(code, 0, "{first}");
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("analysis.json");
    std::fs::write(&p, &out.stdout).unwrap();
    let (code, second, _) = run(&["analyze", p.to_str().unwrap(), "--with-f0"]);
    assert_eq!(code, 0);
    assert_eq!(first, second);
    assert_eq!(first["beta"], 3);
    let signs: Vec<Value> = first["chambers"].as_array().unwrap().iter().map(|c| c["signs"].clone()).collect();
    let mut sorted = signs.clone();
    sorted.sort_by_key(|s| s.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect::<Vec<_>>());
    assert_eq!(signs, sorted);
    assert_eq!(first["f0"]["growing"], first["f0"]["volume_sum"]);
}

#[test]
fn beta_and_critical_reports() {
    let (code, v, _) = run(&["beta", &fixture("three_points.json")]);
    assert_eq!(code, 0);
    assert!((f(&v["value"]["re"]) - 0.262_052_214_677_828_6).abs() < 1e-13);
    let (code, v, _) = run(&["critical", &fixture("two_points_exp.json"), "--with-f0"]);
    assert_eq!(code, 0);
    assert_eq!(v["records"].as_array().unwrap().len(), 4);
    assert_eq!(v["f0_supports"].as_array().unwrap().len(), 2);
}

#[test]
fn literal_reading_is_selectable() {
    let (code, v, _) = run(&["beta", &fixture("four_lines.json"), "--with-f0", "--beta-reading", "literal"]);
    assert_eq!(code, 0);
    assert_eq!(v["reading"], "literal");
}

#[test]
fn period_matrix_report() {
    let (code, v, _) = run(&["period-matrix", &fixture("four_lines.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["entries"].as_array().unwrap().len(), 3);
    assert!(f(&v["determinant"]["condition"]) >= 1.0);
}

#[test]
fn table_output() {
    let out = bin().args(["verify", &fixture("three_points.json"), "--format", "table"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("pass") && l.ends_with("true")), "{text}");
}

#[test]
fn selberg_variants() {
    let base = ["selberg-verify", "--n", "1", "--z", "0,1", "--alpha", "0.6,0.8", "--gamma", "0.3", "--a", "1.5"];
    for (variant, tol) in [("noexp", "1e-6"), ("noexp-sym", "1e-6"), ("exp", "1e-6"), ("lemma73", "1e-10"), ("lemma75", "1e-10"), ("rect", "1e-6")] {
        let mut args = base.to_vec();
        args.extend(["--variant", variant, "--tol", tol]);
        let (code, v, _) = run(&args);
        assert_eq!(code, 0, "{variant}: {v}");
    }
    let mut args = base.to_vec();
    args.extend(["--variant", "exp", "--reading", "printed"]);
    let (code, v, _) = run(&args);
    assert_eq!(code, 1, "{v}");
    assert_eq!(v["alternative"]["reading"], "corrected");
}

#[test]
fn selberg_bad_parameters() {
    let (code, _, _) = run(&["selberg-verify", "--n", "1", "--z", "1,0", "--alpha", "0.6,0.8", "--variant", "noexp"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["selberg-verify", "--n", "1", "--z", "0,1", "--alpha", "0.6,0.8", "--variant", "nope"]);
    assert_eq!(code, 2);
}

#[test]
fn random_suite_is_reproducible() {
    let args = ["random-suite", "--seed", "7", "--count", "4", "--dim", "1", "--max-p", "4", "--with-f0", "--tol", "1e-5"];
    let (c1, r1, o1) = run(&args);
    let (c2, r2, _) = run(&args);
    assert_eq!(c1, 0, "{r1}");
    assert_eq!(c2, 0);
    assert_eq!(r1, r2);
    assert!(String::from_utf8_lossy(&o1.stderr).contains("seed=7"));
    assert_eq!(r1["seed"], 7);
}

#[test]
fn random_suite_failures_become_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("dump");
    let args = ["random-suite", "--seed", "3", "--count", "2", "--dim", "1", "--max-p", "3", "--tol", "1e-300", "--dump-dir", d.to_str().unwrap()];
    let (code, v, _) = run(&args);
    assert_eq!(code, 1);
    let failed: Vec<&Value> = v["instances"].as_array().unwrap().iter().filter(|i| i["pass"] == false).collect();
    assert!(!failed.is_empty());
    for inst in failed {
        let path = inst["fixture"].as_str().unwrap();
        let (code, rerun, _) = run(&["verify", path, "--tol", "1e-5"]);
        assert_eq!(code, 0, "{rerun}");
        assert_eq!(rerun["deviation"], inst["deviation"]);
    }
}

#[test]
fn help_lists_flags() {
    let out = bin().args(["verify", "--help"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for flag in ["--tol", "--nodes", "--max-depth", "--with-f0", "--convergence", "--format", "--threads"] {
        assert!(text.contains(flag), "{flag} missing");
    }
    let out = bin().args(["random-suite", "--help"]).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("--seed"));
}
