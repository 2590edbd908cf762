use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_melnikov")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn documented_examples() {
    assert_eq!(json(&["bound", "--psi", "2", "2", "2", "2"]), serde_json::json!({ "psi": 29 }));
    assert_eq!(json(&["bound", "--rational", "1", "1", "0"]), serde_json::json!({ "psi": 13 }));
    assert_eq!(json(&["bound", "--melnikov", "2"]), serde_json::json!({ "bound": 54 }));
    assert_eq!(
        json(&["elliptic-eval", "--k", "0", "--kind", "K"]),
        serde_json::json!({ "value": std::f64::consts::FRAC_PI_2 })
    );
    let z = json(&["melnikov-zeros", "--sample"]);
    assert_eq!(z["bound"], 59);
    assert_eq!(z["ok"], true);
    assert!(z["count"].as_u64().unwrap() <= 59);
}

#[test]
fn carlson_kinds_agree_with_legendre() {
    let k = json(&["elliptic-eval", "--k", "0.5", "--kind", "K"])["value"].as_f64().unwrap();
    let rf = json(&["elliptic-eval", "--kind", "RF", "--args", "0,0.75,1"])["value"].as_f64().unwrap();
    assert!((k - rf).abs() < 1e-15);
    let p = json(&["elliptic-eval", "--k", "-0.5", "--mu", "0.16", "--kind", "Pi"])["value"].as_f64().unwrap();
    let rj = json(&["elliptic-eval", "--k", "0.5", "--mu", "0.16", "--kind", "RJ"])["value"].as_f64().unwrap();
    assert!((p - (k + 0.16 / 3.0 * rj)).abs() < 1e-14);
}

#[test]
fn exit_codes() {
    // Schema / usage.
    assert_eq!(run(&["bound"]).status.code(), Some(1));
    assert_eq!(run(&["--tol", "0.1", "bound", "--melnikov", "2"]).status.code(), Some(1));
    assert_eq!(run(&["elliptic-eval", "--kind", "Pi", "--k", "0.3"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["melnikov-zeros", "--spec", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(run(&["reduce", "--random", "constant-mu", "--out", "csv"]).status.code(), Some(1));
    // Domain.
    assert_eq!(run(&["elliptic-eval", "--k", "1.2", "--kind", "K"]).status.code(), Some(2));
    assert_eq!(run(&["elliptic-eval", "--k", "0.2", "--mu", "1.5", "--kind", "Pi"]).status.code(), Some(2));
    assert_eq!(run(&["pf-verify", "--mu", "1/4", "--k", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["--grid", "16", "melnikov-zeros", "--sample"]).status.code(), Some(2));
    // Verification: a Wronskian tolerance tighter than the difference oracle can meet.
    assert_eq!(run(&["--tol", "1e-15", "pf-verify", "--mu", "special", "--k", "0.3"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn spec_files_and_schema_errors() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"n": 2, "a_plus": [[1, 0, "1"]], "a_minus": [], "b_plus": [[0, 1, "-1/2"]], "b_minus": []}}"#).unwrap();
    let p = f.path().to_str().unwrap();
    let d = json(&["melnikov-decompose", "--spec", p]);
    assert_eq!(d["ok"], true);
    assert_eq!(d["spec"]["n"], 2);
    let e = json(&["melnikov-eval", "--spec", p, "--h", "0.002,0.009", "--check"]);
    assert_eq!(e["ok"], true);
    assert_eq!(e["rows"].as_array().unwrap().len(), 2);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, r#"{{"n": 1, "a_plus": [[1, 1, "1"]], "a_minus": [], "b_plus": [], "b_minus": []}}"#).unwrap();
    let o = run(&["melnikov-decompose", "--spec", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds degree"));

    let mut red = tempfile::NamedTempFile::new().unwrap();
    write!(red, r#"{{"p": ["1"], "q": ["0"], "r": ["0", "1"], "mu": {{"poly": ["1/2"]}}}}"#).unwrap();
    let r = json(&["reduce", "--spec", red.path().to_str().unwrap()]);
    assert_eq!(r["degrees_ok"], true);
    assert_eq!(r["form"]["case"], "constant_mu");
}

#[test]
fn csv_outputs() {
    let o = run(&["melnikov-eval", "--sample", "--points", "7", "--out", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("h,u,I"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r.len() == 3 && r[0] > 0.0 && r[0] < 1.0 / 64.0));

    let o = run(&["--grid", "64", "zeros", "--random", "--seed", "5", "--out", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("k,I\n"));
    assert_eq!(text.lines().count(), 66);
}

#[test]
fn outputs_round_trip() {
    for args in [
        vec!["zeros", "--random", "--seed", "9"],
        vec!["melnikov-decompose", "--random", "4", "--seed", "2"],
        vec!["pf-verify", "--mu", "1/4,1/4"],
        vec!["reduce", "--random", "poly-s-ge2", "--seed", "3"],
    ] {
        let v = json(&args);
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
    }
    // The decomposition's spec re-parses as a spec.
    let d = json(&["melnikov-decompose", "--random", "3", "--seed", "8"]);
    let spec = melnikov_core::triangle::PerturbationSpec::from_json(&d["spec"].to_string()).unwrap();
    assert_eq!(spec.n, 3);
}

#[test]
fn fixed_seeds_are_byte_identical() {
    for args in [
        vec!["melnikov-zeros", "--random", "3", "--seed", "42"],
        vec!["reduce", "--random", "rational-special", "--seed", "7"],
        vec!["zeros", "--random", "--seed", "11"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = run(&["reduce", "--random", "rational-special", "--seed", "7"]).stdout;
    let b = run(&["reduce", "--random", "rational-special", "--seed", "8"]).stdout;
    assert_ne!(a, b);
}
