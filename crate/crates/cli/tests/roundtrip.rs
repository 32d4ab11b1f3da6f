//! End-to-end CLI checks: schema rejection exit codes and byte-identical
//! reproduction of results from a manifest's config echo.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> PathBuf {
    // target/debug/kappamu next to this test binary's target dir
    let mut p = PathBuf::from(env!("CARGO_BIN_EXE_kappamu"));
    assert!(p.exists(), "missing CLI binary at {}", p.display());
    p.pop();
    p.push("kappamu");
    p
}

fn workdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("kappamu-cli-test-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

const BASE: &str = r#"{
  "command": "outage",
  "geometry": {"R_m": 1000.0, "r_m": 600.0, "azimuth_rad": 0.0, "alpha": 3.6},
  "soi": {"kappa": 1.5, "mu": 1.2, "m": 10.0, "mean": 1.0},
  "interferers": [{"kappa": 1.0, "mu": 1.0, "m": 10.0, "mean": 1.0}],
  "T_dB": 3.0,
  "mc": {"seed": 11, "batches": 200, "batch_size": 50, "confidence": 0.95}
}"#;

#[test]
fn schema_violation_exits_2_and_names_key() {
    let dir = workdir("schema");
    let cfg = dir.join("bad.json");
    write(&cfg, &BASE.replace("\"mu\": 1.2", "\"mu\": -1.0"));
    let out = Command::new(bin())
        .args(["--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("soi.mu"), "stderr: {stderr}");
}

#[test]
fn unknown_key_rejected() {
    let dir = workdir("unknown");
    let cfg = dir.join("bad.json");
    write(&cfg, &BASE.replace("\"T_dB\": 3.0,", "\"T_dB\": 3.0, \"bogus\": 1,"));
    let out = Command::new(bin())
        .args(["--config", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn manifest_config_reruns_byte_identical() {
    let dir = workdir("roundtrip");
    let cfg = dir.join("run.json");
    write(&cfg, BASE);
    let out1 = dir.join("first");
    let status = Command::new(bin())
        .args(["--config", cfg.to_str().unwrap(), "--out", out1.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let csv1 = std::fs::read(out1.join("results.csv")).unwrap();

    // re-run from the manifest's config echo
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out1.join("run_manifest.json")).unwrap())
            .unwrap();
    let cfg2 = dir.join("echo.json");
    write(&cfg2, &serde_json::to_string_pretty(&manifest["config"]).unwrap());
    let out2 = dir.join("second");
    let status = Command::new(bin())
        .args(["--config", cfg2.to_str().unwrap(), "--out", out2.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let csv2 = std::fs::read(out2.join("results.csv")).unwrap();
    assert_eq!(csv1, csv2, "results.csv must reproduce byte-identically");

    // analytic value sits inside the emitted MC interval
    let text = String::from_utf8(csv1).unwrap();
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let (analytic, lo, hi) = (row[1], row[4], row[5]);
    assert!(lo <= analytic && analytic <= hi, "row: {row:?}");
}
