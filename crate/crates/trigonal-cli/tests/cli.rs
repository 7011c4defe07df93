//! Integration tests driving the built `trigonal` binary end to end.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trigonal"))
}

fn tmpfile(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("trigonal-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_g2_config() -> PathBuf {
    let path = tmpfile("g2.json");
    std::fs::write(
        &path,
        r#"{"r": 1, "s": 2, "branch_points": [[0.9, 0.1], [-0.2, 0.75], [-1.1, -0.4]]}"#,
    )
    .unwrap();
    path
}

fn write_g1_config() -> PathBuf {
    let path = tmpfile("g1.json");
    std::fs::write(
        &path,
        r#"{"r": 0, "s": 2, "branch_points": [[0.0, 0.0], [1.0, 0.0]]}"#,
    )
    .unwrap();
    path
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn semigroup_table_lists_gaps_and_diagram() {
    let out = bin().args(["semigroup", "1", "2"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("{1, 2}"), "gap set missing: {text}");
    assert!(text.contains("(1, 1)"), "young diagram missing: {text}");
    assert!(text.contains("genus          : 2"), "genus missing: {text}");
}

#[test]
fn semigroup_rejects_invalid_parameters() {
    let out = bin().args(["semigroup", "2", "1"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn curve_check_reports_valid_curve() {
    let cfg = write_g2_config();
    let out = bin()
        .args(["curve-check", "--curve", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["valid"], serde_json::json!(true));
    assert_eq!(v["genus"], serde_json::json!(2));
    assert!(v["lift_residual_max"].as_f64().unwrap() < 1e-10);
}

#[test]
fn curve_check_rejects_malformed_config() {
    let path = tmpfile("bad.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = bin()
        .args(["curve-check", "--curve", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn periods_report_passes_on_genus_one() {
    let cfg = write_g1_config();
    let out = bin()
        .args(["periods", "--curve", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["legendre_residual"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["pass"], serde_json::json!(true));
    // hexagonal lattice: tau = exp(i pi / 3) up to the modular group
    let tau = &v["tau"][0][0];
    let (re, im) = (tau[0].as_f64().unwrap(), tau[1].as_f64().unwrap());
    assert!((re.abs() - 0.5).abs() < 1e-8 && (im - 0.866_025_403_784_438_6).abs() < 1e-8);
}

#[test]
fn sigma_eval_flags_theta_divisor_and_checks_length() {
    let cfg = write_g1_config();
    // genus-1 sigma vanishes at the origin, so wp must be flagged
    let out = bin()
        .args([
            "sigma-eval",
            "--curve",
            cfg.to_str().unwrap(),
            "--u",
            "[[0.0, 0.0]]",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["on_theta_divisor"], serde_json::json!(true));
    assert!(v["wp"].is_null());
    // wrong-length u is a hard error
    let out = bin()
        .args([
            "sigma-eval",
            "--curve",
            cfg.to_str().unwrap(),
            "--u",
            "[[0.1, 0.0], [0.2, 0.0]]",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn verify_all_passes_and_is_deterministic() {
    let cfg = write_g2_config();
    let run = || {
        bin()
            .args([
                "verify",
                "--curve",
                cfg.to_str().unwrap(),
                "--which",
                "all",
                "--seed",
                "7",
            ])
            .output()
            .unwrap()
    };
    let out1 = run();
    assert!(out1.status.success(), "verify --which all should exit 0");
    let out2 = run();
    assert_eq!(out1.stdout, out2.stdout, "seeded reports must be byte-identical");
    let v = stdout_json(&out1);
    assert_eq!(v["pass"], serde_json::json!(true));
    let rows = v["report"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert_eq!(row["pass"], serde_json::json!(true), "row failed: {row}");
    }
}

#[test]
fn verify_rejects_unknown_check_and_strict_precision_fails() {
    let cfg = write_g2_config();
    let out = bin()
        .args([
            "verify",
            "--curve",
            cfg.to_str().unwrap(),
            "--which",
            "frobnicate",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
    // residuals sit around 1e-10..1e-14, so a 1e-12 target must fail overall
    let out = bin()
        .args([
            "verify",
            "--curve",
            cfg.to_str().unwrap(),
            "--precision",
            "1e-12",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    // and an out-of-range precision is a usage error
    let out = bin()
        .args([
            "verify",
            "--curve",
            cfg.to_str().unwrap(),
            "--precision",
            "1e-3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
