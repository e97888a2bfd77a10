use std::process::{Command, Output};

use qwalk_core::walk::{dp_absorption, LatticePoint};

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .output()
        .expect("failed to run qwalk")
}

fn stdout(args: &[&str]) -> String {
    let out = qwalk(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exact_dp_rows() {
    let text = stdout(&["dp", "--x0", "1", "--y0", "1", "--kmax", "2", "--exact"]);
    assert_eq!(
        text,
        "k,p_S,p_T,p_tau,survival\n0,0,0,0,1\n1,1/3,1/3,2/3,1/3\n2,1/18,1/18,1/9,2/9\n"
    );
}

#[test]
fn exact_site_hits() {
    let text = stdout(&["dp", "--kmax", "2", "--exact", "--sites"]);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "k,axis,index,prob");
    for want in ["1,x,1,1/6", "1,x,2,1/6", "2,x,2,1/36", "2,x,3,1/36"] {
        assert!(rows.contains(&want), "missing {want}");
    }
    // No hits at time zero: header only.
    let empty = stdout(&["dp", "--kmax", "0", "--sites"]);
    assert_eq!(empty, "k,axis,index,prob\n");
}

#[test]
fn float_dp_round_trips() {
    let text = stdout(&["dp", "--x0", "2", "--y0", "3", "--kmax", "40"]);
    let table = dp_absorption(LatticePoint::new(2, 3), 40, false).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut n = 0;
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.unwrap();
        assert_eq!(rec[0].parse::<usize>().unwrap(), k);
        assert_eq!(rec[1].parse::<f64>().unwrap(), table.p_s[k]);
        assert_eq!(rec[4].parse::<f64>().unwrap(), table.survival[k]);
        n += 1;
    }
    assert_eq!(n, 41);
}

#[test]
fn output_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = qwalk(&[
            "simulate", "--config", "1,1,2,1", "--trials", "2000", "--seed", "11", "--kmax", "30",
            "--out", p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let single = Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .env("QP_THREADS", "1")
        .args(["simulate", "--config", "1,1,2,1", "--trials", "2000", "--seed", "11", "--kmax", "30"])
        .output()
        .unwrap();
    assert_eq!(single.stdout, std::fs::read(&a).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&single.stdout).unwrap();
    for key in ["trials", "seed", "cap", "truncated", "pmf", "mean"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn simulate_csv_pmf() {
    let text = stdout(&[
        "simulate", "--config", "1,1", "--trials", "500", "--seed", "1", "--kmax", "5", "--format", "csv",
    ]);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "k,prob");
    assert_eq!(rows.len(), 7);
}

#[test]
fn eval_matches_library() {
    let text = stdout(&["eval", "--x", "1", "--x", "-0.5+0.2i", "--z", "0.5", "--x0", "2", "--y0", "1"]);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[10], "h_re");
    let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][1].parse::<f64>().unwrap(), 0.2);
    let table = dp_absorption(LatticePoint::new(2, 1), 200, false).unwrap();
    let series: f64 = table.p_s.iter().rev().fold(0.0, |acc, p| acc * 0.5 + p);
    let h: f64 = rows[0][10].parse().unwrap();
    assert!((h - series).abs() < 1e-12);
    let fixed = stdout(&["eval", "--x", "1", "--z", "0.5", "--quad-order", "64"]);
    assert_eq!(fixed.lines().count(), 2);
}

#[test]
fn coefficients_against_dp() {
    let text = stdout(&["coeffs", "--x0", "1", "--y0", "2", "--r", "0.9", "--M", "1024", "--kmax", "32"]);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for rec in reader.records().skip(1) {
        let rec = rec.unwrap();
        let p: f64 = rec[1].parse().unwrap();
        let rel: f64 = rec[3].parse().unwrap();
        if p > 1e-8 {
            assert!(rel < 1e-6, "{rec:?}");
        }
    }
}

#[test]
fn asymptotic_report_constant() {
    let text = stdout(&["asympt", "--x0", "1", "--y0", "1", "--kmax", "2000"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let c = v["fit"]["constant"].as_f64().unwrap();
    assert!((c / 1.099357 - 1.0).abs() <= 0.10, "{c}");
    let slope = v["fit"]["slope"].as_f64().unwrap();
    assert!((-2.6..=-2.4).contains(&slope));
}

#[test]
fn validate_analytic_suite_passes() {
    let out = qwalk(&["validate", "--suite", "analytic"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("PASS")).count(), 3);
}

#[test]
fn argument_errors_exit_two() {
    for args in [
        vec!["dp", "--x0", "0", "--kmax", "3"],
        vec!["dp", "--kmax", "201", "--exact"],
        vec!["eval", "--x", "abc", "--z", "0.5"],
        vec!["eval", "--x", "0.1", "--z", "0.5"],
        vec!["simulate", "--config", "1,1,2", "--trials", "3", "--seed", "1"],
        vec!["simulate", "--config", "1,0", "--trials", "3", "--seed", "1"],
        vec!["coeffs", "--M", "1000"],
        vec!["validate", "--suite", "nope"],
        vec!["frobnicate"],
    ] {
        assert_eq!(qwalk(&args).status.code(), Some(2), "{args:?}");
    }
}
