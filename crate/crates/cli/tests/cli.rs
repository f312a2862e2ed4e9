use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn twopoint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twopoint"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn twopoint_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twopoint"))
        .args(args)
        .env("TWOPOINT_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn sphere_info_has_legendre_parameters() {
    let v = json(&twopoint(&["space", "info", "--family", "sphere", "--m", "2", "--kmax", "4"]));
    assert_eq!(v["result"]["alpha"], 0.0);
    assert_eq!(v["result"]["beta"], 0.0);
    assert_eq!(v["result"]["degrees"][3]["d_k"], 7.0);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["seed"], 42);
}

#[test]
fn csv_uses_full_precision() {
    let out = twopoint(&[
        "--format", "csv", "mult", "table", "--family", "complex-projective", "--m", "4", "--r", "1", "--t", "0.2",
        "--kmax", "8",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# twopoint"));
    let row = text.lines().find(|l| l.starts_with("3,")).unwrap();
    let mantissa = row.split(',').nth(2).unwrap().split('e').next().unwrap();
    assert_eq!(mantissa.len(), 18, "{row}");
}

#[test]
fn example_kernel_round_trips_through_decay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    let p = path.to_str().unwrap();
    let out = twopoint(&[
        "kernel", "example", "--family", "complex-projective", "--m", "4", "--eps", "0.5", "--r", "1", "--kmax",
        "256", "--out", p,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let k: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(k["family"], "complex-projective");
    let coeffs = k["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 257);
    assert!(coeffs.windows(2).all(|w| w[1].as_f64().unwrap() <= w[0].as_f64().unwrap() * (1.0 + 1e-14)));

    let v = json(&twopoint(&["kernel", "decay", "--input", p, "--mode", "sobolev", "--r", "1"]));
    assert_eq!(v["result"]["decay"]["verdict"], true);
    let w = json(&twopoint(&["kernel", "nwidth", "--input", p, "--n", "0"]));
    assert_eq!(w["result"]["n_width"], 1.0);
}

#[test]
fn inadmissible_example_is_rejected() {
    let out = twopoint(&[
        "kernel", "example", "--family", "sphere", "--m", "2", "--eps", "0.4", "--r", "1", "--kmax", "16",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilon"));
}

#[test]
fn random_function_report_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let fp = f.to_str().unwrap();
    let out = twopoint(&[
        "--seed", "7", "fn", "random", "--family", "real-projective", "--m", "2", "--kmax", "48", "--out", fp,
    ]);
    assert!(out.status.success());
    let norm = json(&twopoint(&["fn", "norm", "--input", fp, "--p", "2"]));
    assert!(norm["result"]["norm"].as_f64().unwrap() > 0.0);
    let sup = json(&twopoint(&["fn", "norm", "--input", fp, "--p", "inf"]));
    assert_eq!(sup["result"]["p"], "inf");
    assert!(sup["result"]["norm"].as_f64().unwrap() >= norm["result"]["norm"].as_f64().unwrap());

    let rep = json(&twopoint(&["kfunc", "report", "--fn", fp, "--r", "1", "--p", "2", "--points", "6"]));
    let rows = rep["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for row in rows {
        assert!(row["K_oracle"].as_f64().unwrap() <= row["K_realized"].as_f64().unwrap() * (1.0 + 1e-9));
    }
    // the oracle column is reported only at p = 2
    let rep3 = json(&twopoint(&["kfunc", "report", "--fn", fp, "--r", "1", "--p", "3", "--points", "4"]));
    assert!(rep3["result"]["rows"][0]["K_oracle"].is_null());
}

#[test]
fn marcinkiewicz_report_lists_blocks() {
    let v = json(&twopoint(&[
        "mult", "marcinkiewicz", "--which", "mu2", "--family", "sphere", "--m", "2", "--r", "1", "--t", "0.01",
        "--jmax", "6",
    ]));
    assert_eq!(v["result"]["s"], 2);
    assert_eq!(v["result"]["blocks"].as_array().unwrap().len(), 7);
}

#[test]
fn jacobi_commands() {
    let v = json(&twopoint(&["jacobi", "cosine-coeffs", "--alpha", "0", "--beta", "0", "--k", "2"]));
    let c: Vec<f64> = v["result"]["coeffs"].as_array().unwrap().iter().map(|r| r["c_kv"].as_f64().unwrap()).collect();
    assert!((c[0] - 0.25).abs() < 1e-14 && c[1].abs() < 1e-14 && (c[2] - 0.75).abs() < 1e-14);
    let e = json(&twopoint(&["jacobi", "eval", "--alpha", "-0.5", "--beta", "-0.5", "--k", "3", "--x", "0.5"]));
    // Chebyshev: Q_3(cos θ) = cos 3θ
    assert!((e["result"]["values"][3]["Q_k"].as_f64().unwrap() + 1.0).abs() < 1e-14);
}

#[test]
fn bad_usage_fails() {
    assert!(!twopoint(&["space", "info", "--family", "torus", "--m", "2"]).status.success());
    assert!(!twopoint(&["space", "info", "--family", "sphere"]).status.success());
    assert!(!twopoint(&["frobnicate"]).status.success());
}

#[test]
fn failing_criterion_is_named() {
    let out = twopoint(&["verify-all", "--criterion", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("criterion 8"));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["all_passed"], false);
}

#[test]
fn verify_reports_are_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let out = twopoint_threads(
            &[
                "verify-all", "--seed", "42", "--criterion", "1", "--criterion", "2", "--criterion", "3",
                "--criterion", "9", "--criterion", "12", "--out", path.to_str().unwrap(),
            ],
            threads,
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(Path::new(&path)).unwrap()
    };
    let a = run("a.json", "1");
    let b = run("a.json", "4");
    let c = run("a.json", "4");
    assert_eq!(a, b);
    assert_eq!(b, c);
}
