//! End-to-end runs of the `thwaves` binary.

use std::process::Command;

fn thwaves() -> Command {
    Command::new(env!("CARGO_BIN_EXE_thwaves"))
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn simulate_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("snap.csv");
    let status = thwaves()
        .args(["simulate", "--n", "301", "--sigma", "0.05", "--t", "3.7", "--traversals", "3", "--method", "both", "-o"])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("# N=301\n"));
    assert!(text.contains("# j=555\n"));
    assert!(text.contains("# method=both\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 301);
    for r in &rows {
        // u_full = u_toeplitz + u_hankel, and both methods agree
        assert!((r[1] - r[2] - r[3]).abs() < 1e-10);
        assert!((r[2] - r[4]).abs() < 1e-8);
        assert!((r[3] - r[5]).abs() < 1e-8);
    }
}

#[test]
fn simulate_json_to_stdout() {
    let out = thwaves()
        .args(["simulate", "--n", "21", "--j", "4", "--method", "spectral", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["metadata"]["j"], 4);
    assert!(v["metadata"]["max_bessel_order"].is_null());
    assert_eq!(v["columns"]["u_full"].as_array().unwrap().len(), 21);
}

#[test]
fn simulate_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        thwaves()
            .env("THWAVES_THREADS", threads)
            .args(["simulate", "--n", "151", "--t", "2.3", "--traversals", "2"])
            .output()
            .unwrap()
    };
    let one = run("1");
    let many = run("4");
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(run("0").stdout, one.stdout);
}

#[test]
fn simulate_rejects_bad_arguments() {
    let even = thwaves().args(["simulate", "--n", "100", "--j", "1"]).output().unwrap();
    assert_eq!(even.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&even.stderr).contains("odd"));

    let both = thwaves().args(["simulate", "--t", "1", "--j", "1"]).output().unwrap();
    assert!(!both.status.success());
    let neither = thwaves().args(["simulate"]).output().unwrap();
    assert!(!neither.status.success());
    let bad_threads = thwaves()
        .env("THWAVES_THREADS", "lots")
        .args(["simulate", "--j", "0"])
        .output()
        .unwrap();
    assert_eq!(bad_threads.status.code(), Some(2));
}

#[test]
fn bessel_table_prints_orders() {
    let out = thwaves()
        .args(["bessel-table", "--x", "1", "--m-max", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,J_n");
    assert_eq!(lines.len(), 7);
    let j1: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((j1 - 0.440_050_585_744_933_5).abs() < 1e-15);
}

#[test]
fn verify_passes() {
    let out = thwaves().args(["verify", "--dense-ceiling", "31"]).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
    assert!(text.contains("dense.n31."));
}

#[test]
fn verify_fails_under_injected_fault() {
    let out = thwaves()
        .args(["verify", "--dense-ceiling", "11", "--inject-hankel-sign-fault"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL dense.n11.t_plus_h_projector"));
}
