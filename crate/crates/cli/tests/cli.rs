use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbert-spectra"))
        .args(args)
        .env_remove("HILBERT_SPECTRA_TOL")
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["eig-seq", "--n", "2"],
        vec!["eig-seq", "--mu", "0.7", "--n", "2"],
        vec!["eig-eval", "--mu", "0.5", "--z-re", "1.5"],
        vec!["verify", "--suite", "bogus"],
        vec!["measure", "--grid", "0"],
        vec!["--tol", "-1", "spectrum"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn csv_and_out_file() {
    let out = run(&["measure", "--grid", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,density"));
    assert_eq!(text.lines().count(), 4);

    let dir = std::env::temp_dir().join(format!("hilbert-spectra-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("psi.json");
    let out = run(&["plot", "multiplier", "--nodes", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["columns"][1], "psi");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_exit_codes() {
    let v = json(&["verify", "--suite", "quadrature"]);
    assert!(v["items"].as_array().unwrap().iter().all(|i| i["verdict"] == "pass"));
    // the printed weight fails its orthogonality items
    assert_eq!(run(&["verify", "--suite", "spectral"]).status.code(), Some(1));
    // an impossible tolerance turns passes into failures
    assert_eq!(
        run(&["--tol", "1e-40", "verify", "--suite", "quadrature"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hilbert-spectra"))
        .args(["kernel-check", "--t", "0", "--y", "2"])
        .env("HILBERT_SPECTRA_TOL", "1e-3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["items"][0]["tolerance"], 1e-3);
    let bad = Command::new(env!("CARGO_BIN_EXE_hilbert-spectra"))
        .arg("spectrum")
        .env("HILBERT_SPECTRA_TOL", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
