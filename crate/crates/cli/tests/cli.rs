use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn gaudin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaudin")).args(args).output().expect("binary runs")
}

fn run(sub: &str, config: &Path, extra: &[&str]) -> (i32, String) {
    let mut args = vec![sub, "--config", config.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = gaudin(&args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn without_timings(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn golden_fixtures_pass() {
    let mut seen = 0;
    for entry in fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        if name.contains("outsider") {
            continue;
        }
        let sub = if name.starts_with("wronski") { "wronski" } else { "verify" };
        let (code, stdout) = run(sub, &path, &[]);
        assert_eq!(code, 0, "{name}: {stdout}");
        seen += 1;
    }
    assert!(seen >= 10);
}

#[test]
fn golden_instance_report() {
    let (code, stdout) = run("verify", &fixture("two_points.json"), &[]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["command"], "verify");
    assert_eq!(report["dimension"], 2);
    assert_eq!(report["characters"].as_array().unwrap().len(), 2);
    assert_eq!(report["bae"]["solutions"].as_array().unwrap().len(), 2);
    for check in report["checks"].as_array().unwrap() {
        assert!(!check["anchor"].as_str().unwrap().is_empty());
        assert_ne!(check["status"], "fail", "{check}");
    }
}

#[test]
fn reports_are_deterministic() {
    let cfg = fixture("four_points.json");
    let (_, a) = run("verify", &cfg, &[]);
    let (_, b) = run("verify", &cfg, &[]);
    assert_eq!(without_timings(&a), without_timings(&b));
}

#[test]
fn flags_override_the_config() {
    let (code, stdout) = run("spectrum", &fixture("two_points.json"), &["--seed", "17", "--tol-residual", "1e-10"]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["seed"], 17);
    assert_eq!(report["instance"]["options"]["tol_residual"], 1e-10);
}

#[test]
fn invalid_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let golden = fs::read_to_string(fixture("two_points.json")).unwrap();
    for (name, bad) in [
        ("repeated.json", golden.replace(r#""b": ["0", "1"]"#, r#""b": ["1", "1"]"#)),
        ("shape.json", golden.replace(r#""weight": [1, 1]"#, r#""weight": [0, 2]"#)),
        ("garbage.json", "{".to_string()),
    ] {
        let path = dir.path().join(name);
        fs::write(&path, bad).unwrap();
        let out = gaudin(&["spectrum", "--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    }
}

#[test]
fn non_member_space_fails_with_exit_one() {
    let (code, stdout) = run("wronski", &fixture("wronski_outsider.json"), &[]);
    assert_eq!(code, 1);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    let membership = report["checks"].as_array().unwrap().iter().find(|c| c["name"] == "membership").unwrap();
    assert_eq!(membership["status"], "fail");
    assert!(membership["value"]["failures"].to_string().contains("pole outside b"));
}

#[test]
fn stored_reports_print_as_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let (code, stdout) = run("bae", &fixture("two_points.json"), &["--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let printed = gaudin(&["report", out.to_str().unwrap(), "--table"]);
    assert_eq!(printed.status.code(), Some(0));
    let table = String::from_utf8(printed.stdout).unwrap();
    assert!(table.contains("gaudin bae"));
    assert!(table.contains("PASS  Bethe completeness"));
}

#[test]
fn batches_produce_arrays_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let a = fs::read_to_string(fixture("two_points.json")).unwrap();
    let b = fs::read_to_string(fixture("three_points_gl3.json")).unwrap();
    let path = dir.path().join("batch.json");
    fs::write(&path, format!("[{a}, {b}]")).unwrap();
    let (code, stdout) = run("spectrum", &path, &[]);
    assert_eq!(code, 0);
    let reports: Vec<Value> = serde_json::from_str(&stdout).unwrap();
    let dims: Vec<_> = reports.iter().map(|r| r["dimension"].as_u64().unwrap()).collect();
    assert_eq!(dims, [2, 6]);
}
