use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn antinorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antinorm"))
        .args(args)
        .env_remove("ANTINORM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_diag(dir: &Path, name: &str, d: &[f64]) -> PathBuf {
    let n = d.len();
    let re: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { d[i] } else { 0.0 }).collect())
        .collect();
    let path = dir.join(name);
    std::fs::write(&path, serde_json::json!({ "n": n, "re": re }).to_string()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_exact_values() {
    let dir = TempDir::new().unwrap();
    let d14 = write_diag(dir.path(), "d14.json", &[1.0, 4.0]);
    let d31 = write_diag(dir.path(), "d31.json", &[3.0, 1.0]);
    let d123 = write_diag(dir.path(), "d123.json", &[1.0, 2.0, 3.0]);

    let o = antinorm(&["eval", "--antinorm", r#"{"kind":"fkdet"}"#, s(&d14)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2");

    let o = antinorm(&["eval", "--norm", r#"{"kind":"kyfan","t":0.75}"#, s(&d31)]);
    assert_eq!(stdout(&o).trim(), "1.75");

    let o = antinorm(&["eval", "--antinorm", r#"{"kind":"marcuslopes","m":2}"#, s(&d123)]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 11.0 / 6.0).abs() < 1e-14);
}

#[test]
fn eval_prints_fifteen_significant_digits() {
    let dir = TempDir::new().unwrap();
    let d = write_diag(dir.path(), "d.json", &[1.0, 2.0, 3.0]);
    let o = antinorm(&["eval", "--antinorm", r#"{"kind":"marcuslopes","m":2}"#, s(&d)]);
    assert_eq!(stdout(&o).trim(), "1.83333333333333");
}

#[test]
fn eval_on_scale_file_and_named_scale() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("scale.json");
    std::fs::write(&path, r#"{"steps": [[0.5, 3.0], [0.5, 1.0]]}"#).unwrap();
    let o = antinorm(&["eval", "--norm", r#"{"kind":"kyfan","t":0.75}"#, s(&path)]);
    assert_eq!(stdout(&o).trim(), "1.75");

    // Derived(KyFan(1), p) on e^{-s} tends to e^{-1/2} as p → 0.
    let o = antinorm(&[
        "eval",
        "--antinorm",
        r#"{"kind":"derived","gauge":{"kind":"kyfan","t":1.0},"p":0.0001}"#,
        "exp_neg",
    ]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - (-0.5f64).exp()).abs() < 1e-3);
}

#[test]
fn bad_functional_reports_parse_position() {
    let dir = TempDir::new().unwrap();
    let d = write_diag(dir.path(), "d.json", &[1.0, 2.0]);
    let o = antinorm(&["eval", "--norm", r#"{"kind":"bogus"}"#, s(&d)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("error[E_PARSE]"), "{err}");
    assert!(err.contains("line 1"));
}

#[test]
fn not_psd_surfaces_library_error() {
    let dir = TempDir::new().unwrap();
    let d = write_diag(dir.path(), "d.json", &[1.0, -2.0]);
    let o = antinorm(&["eval", "--antinorm", r#"{"kind":"fkdet"}"#, s(&d)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[E_NOT_PSD]"));
}

#[test]
fn usage_errors_exit_two() {
    let o = antinorm(&["eval", "x.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[E_USAGE]"));

    let o = antinorm(&["check", "--case", "no_such_case"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[E_UNKNOWN_CASE]"));

    let o = antinorm(&["check", "--case", "rotfeld", "--dims", "1-3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_single_trial_emits_one_line() {
    let o = antinorm(&["check", "--case", "rotfeld", "--trials", "1", "--seed", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    let v: Value = serde_json::from_str(out.lines().next().unwrap()).unwrap();
    assert_eq!(v["case_id"], "rotfeld");
    assert_eq!(v["pass"], true);
    assert_eq!(v["inputs_fingerprint"].as_str().unwrap().len(), 64);
}

#[test]
fn equivalence_out_of_scope_for_boundary_scale() {
    let o = antinorm(&["check", "--case", "equivalence_6_12", "--scale-b", "exp_inv_sqrt"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["out_of_scope"], true);
    assert_eq!(v["pass"], true);
}

#[test]
fn check_is_byte_identical_across_runs_and_thread_counts() {
    let args = ["check", "--suite", "all", "--trials", "20", "--seed", "7"];
    let first = antinorm(&args);
    assert!(first.status.success());
    let second = antinorm(&args);
    assert_eq!(first.stdout, second.stdout);

    let mut single: Vec<&str> = args.to_vec();
    single.extend(["--jobs", "1"]);
    assert_eq!(first.stdout, antinorm(&single).stdout);
}

#[test]
fn seed_defaults_from_environment() {
    let explicit = antinorm(&["check", "--case", "product", "--trials", "5", "--seed", "42"]);
    let from_env = Command::new(env!("CARGO_BIN_EXE_antinorm"))
        .args(["check", "--case", "product", "--trials", "5"])
        .env("ANTINORM_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(explicit.stdout, from_env.stdout);
    let other = antinorm(&["check", "--case", "product", "--trials", "5", "--seed", "43"]);
    assert_ne!(explicit.stdout, other.stdout);
}

#[test]
fn csv_summary_and_out_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("summary.csv");
    let o = antinorm(&[
        "check",
        "--suite",
        "witnesses",
        "--trials",
        "10",
        "--format",
        "csv",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("case_id,reports,failures,out_of_scope,min_margin"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn relate_exit_code_follows_relation() {
    let dir = TempDir::new().unwrap();
    let a = write_diag(dir.path(), "a.json", &[2.0, 2.0]);
    let b = write_diag(dir.path(), "b.json", &[1.0, 3.0]);
    let o = antinorm(&["relate", s(&a), s(&b), "--relation", "sub_w"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["holds"], true);

    let o = antinorm(&["relate", s(&b), s(&a), "--relation", "sub_w"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["holds"], false);
}

fn witness_margin(o: &Output) -> (f64, usize) {
    assert!(o.status.success(), "{}", stderr(o));
    let v: Value = serde_json::from_str(stdout(o).trim()).unwrap();
    (
        v["psd_margin"].as_f64().unwrap(),
        v["unitaries"].as_array().unwrap().len(),
    )
}

#[test]
fn witness_agm_margin_nonnegative() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    std::fs::write(&a, r#"{"n":2,"re":[[2,1],[1,2]]}"#).unwrap();
    std::fs::write(&b, r#"{"n":2,"re":[[1,0],[0,3]],"im":[[0,0.5],[-0.5,0]]}"#).unwrap();
    let (margin, count) = witness_margin(&antinorm(&["witness", "--op", "agm", s(&a), s(&b)]));
    assert!(margin >= -1e-9);
    assert_eq!(count, 1);
}

#[test]
fn witness_dominance_violation_names_index() {
    let dir = TempDir::new().unwrap();
    let a = write_diag(dir.path(), "a.json", &[1.0, 5.0]);
    let b = write_diag(dir.path(), "b.json", &[2.0, 3.0]);
    let o = antinorm(&["witness", "--op", "dominance", s(&a), s(&b)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("error[E_PRECONDITION]"), "{err}");
    assert!(err.contains("index 1"));
}

#[test]
fn witness_orbit_concave_is_certified_and_written() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    std::fs::write(&a, r#"{"n":2,"re":[[2,1],[1,1]]}"#).unwrap();
    std::fs::write(&b, r#"{"n":2,"re":[[1,0],[0,3]]}"#).unwrap();
    let out = dir.path().join("w");
    let o = antinorm(&[
        "witness",
        "--op",
        "orbit",
        "--mode",
        "concave_sub",
        "--f",
        "sqrt(t)",
        "--out",
        s(&out),
        s(&a),
        s(&b),
    ]);
    let (margin, count) = witness_margin(&o);
    assert!(margin >= -1e-8);
    assert_eq!(count, 2);
    for k in 1..=2 {
        let text = std::fs::read_to_string(out.join(format!("unitary_{k}.json"))).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["n"], 2);
    }
}

#[test]
fn witness_orbit_convex_accepts_g_alias() {
    let dir = TempDir::new().unwrap();
    let a = write_diag(dir.path(), "a.json", &[1.0, 4.0]);
    let b = write_diag(dir.path(), "b.json", &[3.0, 1.0]);
    let o = antinorm(&[
        "witness",
        "--op",
        "orbit",
        "--mode",
        "convex_super",
        "--g",
        "t^2",
        s(&a),
        s(&b),
    ]);
    let (margin, _) = witness_margin(&o);
    assert!(margin >= -1e-8);
}

#[test]
fn witness_mixed_and_triangle() {
    let dir = TempDir::new().unwrap();
    let x = dir.path().join("x.json");
    let y = dir.path().join("y.json");
    std::fs::write(&x, r#"{"n":2,"re":[[0,1],[0,0]]}"#).unwrap();
    std::fs::write(&y, r#"{"n":2,"re":[[1,0],[1,0]],"im":[[0,0],[0,1]]}"#).unwrap();
    let (margin, count) = witness_margin(&antinorm(&["witness", "--op", "triangle", s(&x), s(&y)]));
    assert!(margin >= -1e-8);
    assert_eq!(count, 1);
    let (margin, count) = witness_margin(&antinorm(&["witness", "--op", "mixed", "--g", "t^2", s(&x), s(&y)]));
    assert!(margin >= -1e-8);
    assert_eq!(count, 2);
}

#[test]
fn witness_orbit_needs_mode() {
    let dir = TempDir::new().unwrap();
    let a = write_diag(dir.path(), "a.json", &[1.0, 2.0]);
    let o = antinorm(&["witness", "--op", "orbit", "--f", "t^2", s(&a), s(&a)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[E_INVALID_PARAMETER]"));
}
