use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use meanskit::format::{parse_matrix_json, to_canonical_json};
use meanskit::SymMatrix;
use tempfile::TempDir;

fn meanskit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meanskit")).args(args).env_remove("MEANSKIT_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

struct Files {
    _dir: TempDir,
    e1: String,
    e2: String,
    one: String,
    two: String,
    pd: String,
    neg: String,
    bad: String,
    asym: String,
}

fn files() -> Files {
    let dir = TempDir::new().unwrap();
    let s = |p: PathBuf| p.to_str().unwrap().to_string();
    Files {
        e1: s(write(dir.path(), "e1.json", r#"{"dim":2,"data":[1,0,0,0]}"#)),
        e2: s(write(dir.path(), "e2.json", r#"{"dim":2,"data":[0,0,0,1]}"#)),
        one: s(write(dir.path(), "one.json", r#"{"dim":1,"data":[1]}"#)),
        two: s(write(dir.path(), "two.json", r#"{"dim":1,"data":[2]}"#)),
        pd: s(write(dir.path(), "pd.json", r#"{"dim":2,"data":[2,1,1,3]}"#)),
        neg: s(write(dir.path(), "neg.json", r#"{"dim":2,"data":[1,0,0,-0.5]}"#)),
        bad: s(write(dir.path(), "bad.json", r#"{"dim":2,"data":[1,0,0]}"#)),
        asym: s(write(dir.path(), "asym.json", r#"{"dim":2,"data":[2,1,0.9,3]}"#)),
        _dir: dir,
    }
}

fn eval_json(args: &[&str]) -> SymMatrix {
    let o = meanskit(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    parse_matrix_json(stdout(&o).trim()).unwrap().matrix
}

#[test]
fn eval_examples() {
    let f = files();
    let m = eval_json(&["eval", "--mean", "geometric", "--weight", "0.5", "--A", &f.e1, "--B", &f.e2, "--format", "json"]);
    assert!(m.frobenius_norm() <= 1e-5);
    let m = eval_json(&["eval", "--mean", "left_trivial", "--A", &f.pd, "--B", &f.e2, "--format", "json"]);
    assert_eq!(m, SymMatrix::from_row_major(2, &[2.0, 1.0, 1.0, 3.0]).unwrap());
    let m = eval_json(&["eval", "--mean", "harmonic", "--weight", "0.5", "--A", &f.one, "--B", &f.two, "--format", "json"]);
    assert!((m.get(0, 0) - 4.0 / 3.0).abs() <= 1e-15);
    let o = meanskit(&["eval", "--mean", "harmonic", "--weight", "0.5", "--A", &f.one, "--B", &f.two]);
    assert_eq!(stdout(&o).trim(), "[ 1.33333 ]");
}

#[test]
fn eval_json_round_trips() {
    let f = files();
    let args = ["eval", "--mean", "logarithmic", "--A", &f.pd, "--B", &f.e2, "--format", "json"];
    let o = meanskit(&args);
    let text = stdout(&o);
    let m = parse_matrix_json(text.trim()).unwrap().matrix;
    // identical re-serialization and identical floats
    assert_eq!(to_canonical_json(&m).unwrap(), text.trim());
    assert_eq!(eval_json(&args), m);
}

#[test]
fn transpose_flag_swaps_arguments() {
    let f = files();
    let m = eval_json(&["eval", "--mean", "left-trivial", "--transpose", "--A", &f.pd, "--B", &f.e2, "--format", "json"]);
    assert_eq!(m, SymMatrix::diag(&[0.0, 1.0]));
}

#[test]
fn function_examples() {
    let o = meanskit(&["function", "--mean", "logarithmic", "--grid", "1:1:1", "--format", "csv"]);
    assert_eq!(stdout(&o).trim(), "x,f\n1.0000000000000000e0,1.0000000000000000e0");
    let o = meanskit(&["function", "--mean", "geometric", "--weight", "0.5", "--grid", "0:4:5", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows[4]["x"], 4.0);
    assert_eq!(rows[4]["f"], 2.0);
    let o = meanskit(&["function", "--mean", "zero", "--grid", "0:10:3", "--format", "csv"]);
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",0.0000000000000000e0")));
}

#[test]
fn classify_examples() {
    let get = |args: &[&str]| -> serde_json::Value {
        let o = meanskit(args);
        assert_eq!(o.status.code(), Some(0));
        serde_json::from_str(&stdout(&o)).unwrap()
    };
    let r = get(&["classify", "--mean", "right_trivial", "--format", "json"]);
    assert_eq!(r["strict_right"], false);
    let r = get(&["classify", "--mean", "arithmetic", "--weight", "0.5", "--format", "json"]);
    assert_eq!(r["strict"], true);
    assert_eq!(r["is_mean"], true);
    let r = get(&["classify", "--mean", "parallel_sum", "--format", "json"]);
    assert_eq!(r["is_mean"], false);
    let r = get(&["classify", "--atoms", "0:0.5,1:0.5", "--format", "json"]);
    assert_eq!(r["is_mean"], true);
}

#[test]
fn measure_eval_examples() {
    let value = |args: &[&str]| -> f64 {
        let o = meanskit(args);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v["value"].as_f64().unwrap()
    };
    let v = value(&["measure-eval", "--atoms", "0.5:1", "--x", "2", "--format", "json"]);
    assert!((v - 4.0 / 3.0).abs() <= 1e-15);
    let v = value(&["measure-eval", "--atoms", "0:0.5,1:0.5", "--x", "3", "--format", "json"]);
    assert_eq!(v, 2.0);
    let v = value(&["measure-eval", "--density", "arcsine", "--n", "256", "--x", "4", "--format", "json"]);
    assert!((v - 2.0).abs() <= 1e-6);

    let f = files();
    let dir = TempDir::new().unwrap();
    let mfile = write(dir.path(), "mu.json", r#"{"atoms":[[0.5,1.0]]}"#);
    let m = eval_json(&["measure-eval", "--measure", mfile.to_str().unwrap(), "--A", &f.one, "--B", &f.two, "--format", "json"]);
    assert!((m.get(0, 0) - 4.0 / 3.0).abs() <= 1e-15);
}

#[test]
fn verify_exit_codes_and_seed_override() {
    let o = meanskit(&["verify", "--mean", "geometric", "--weight", "0.5", "--suite", "axioms", "--trials", "40", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["violations"], 0);
    assert_eq!(r["seed"], 42);

    let o = meanskit(&["verify", "--mean", "parallel_sum", "--suite", "betweenness", "--trials", "40"]);
    assert_eq!(o.status.code(), Some(1));

    let o = Command::new(env!("CARGO_BIN_EXE_meanskit"))
        .args(["verify", "--mean", "sum", "--suite", "positivity", "--trials", "10", "--seed", "3", "--format", "json"])
        .env("MEANSKIT_SEED", "99")
        .output()
        .unwrap();
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["seed"], 99);
}

#[test]
fn verify_json_is_deterministic_apart_from_timing() {
    let run = || {
        let o = meanskit(&["verify", "--mean", "logarithmic", "--trials", "30", "--dims", "2,3", "--format", "json"]);
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        for r in v.as_array_mut().unwrap() {
            r["elapsed_ms"] = serde_json::Value::Null;
        }
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn exit_code_matrix() {
    let f = files();
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["counterexamples"], 0),
        (vec!["eval", "--mean", "sum", "--A", &f.one, "--B", &f.two], 0),
        (vec!["verify", "--mean", "zero", "--suite", "betweenness", "--trials", "5"], 1),
        (vec!["eval", "--mean", "sum", "--A", &f.bad, "--B", &f.two], 2),
        (vec!["eval", "--mean", "sum", "--A", "/nonexistent.json", "--B", &f.two], 2),
        (vec!["eval", "--mean", "sum", "--A", &f.one, "--B", &f.pd], 2),
        (vec!["eval", "--mean", "geometric", "--A", &f.one, "--B", &f.two], 2),
        (vec!["eval", "--mean", "sum", "--weight", "0.5", "--A", &f.one, "--B", &f.two], 2),
        (vec!["eval", "--mean", "geometric", "--weight", "1.5", "--A", &f.one, "--B", &f.two], 2),
        (vec!["eval", "--mean", "median", "--A", &f.one, "--B", &f.two], 2),
        (vec!["eval", "--mean", "sum", "--atoms", "0.5:1", "--A", &f.one, "--B", &f.two], 2),
        (vec!["function", "--mean", "sum", "--grid", "3:1:4"], 2),
        (vec!["function", "--mean", "sum", "--grid", "0:1"], 2),
        (vec!["verify", "--mean", "sum", "--suite", "bogus"], 2),
        (vec!["verify", "--mean", "sum", "--dims", "0"], 2),
        (vec!["measure-eval", "--atoms", "0.5"], 2),
        (vec!["measure-eval", "--atoms", "0.5:1"], 2),
        (vec!["--format", "xml", "counterexamples"], 2),
        (vec!["frobnicate"], 2),
    ];
    for (args, code) in cases {
        let o = meanskit(&args);
        assert_eq!(o.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn non_psd_error_names_eigenvalue() {
    let f = files();
    let o = meanskit(&["eval", "--mean", "geometric", "--weight", "0.5", "--A", &f.neg, "--B", &f.e2]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("-5e-1"), "{err}");
}

#[test]
fn asymmetric_input_is_symmetrized_with_warning() {
    let f = files();
    let o = meanskit(&["eval", "--mean", "left-trivial", "--A", &f.asym, "--B", &f.e2, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let m = parse_matrix_json(stdout(&o).trim()).unwrap().matrix;
    assert_eq!(m.get(0, 1), 0.95);
}

#[test]
fn tolerance_overrides_are_validated() {
    let o = meanskit(&["counterexamples", "--eq-tol", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = meanskit(&["verify", "--mean", "sum", "--suite", "axioms", "--trials", "5", "--psd-slack", "1e-8"]);
    assert_eq!(o.status.code(), Some(0));
}
