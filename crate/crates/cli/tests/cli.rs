use std::process::{Command, Output};

use serde_json::Value;
use wavepath::*;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavepath"))
        .args(args)
        .output()
        .expect("run wavepath")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn exact_reports_bloch_blocks() {
    let v = json(&["exact", "--state", "1,0,0,0"]);
    assert_eq!(f(&v["bloch"]["z"]), 1.0);
    assert_eq!(f(&v["path"]["plus"]), 1.0);
    let v = json(&["exact", "--state", "0.70710678,0,0.70710678,0"]);
    assert!((f(&v["bloch"]["x"]) - 1.0).abs() < 1e-12);
    assert!((f(&v["interference"]["plus"]) - 1.0).abs() < 1e-12);
}

#[test]
fn printed_values_round_trip_exactly() {
    let v = json(&["exact", "--state", "0.6,0.1,0.3,-0.7348469228349535"]);
    let s = PureState::from_parts(0.6, 0.1, 0.3, -0.7348469228349535).unwrap();
    let b = s.bloch();
    assert_eq!(f(&v["bloch"]["x"]), b.ex);
    assert_eq!(f(&v["bloch"]["y"]), b.ey);
    assert_eq!(f(&v["bloch"]["z"]), b.ez);
    let d = exact_phase_distribution(&s);
    assert_eq!(f(&v["phase"]["c_sin"]), d.c_sin);
}

#[test]
fn invert_at_zero_marking_uses_the_limit() {
    let v = json(&[
        "invert",
        "--state",
        "0.92387953251128674,0,0.38268343236508978,0",
        "--theta",
        "0",
    ]);
    assert_eq!(v["method"], "unmarked-limit");
    let min = f(&v["negativity"]["min_value"]);
    assert!((min - (1.0 - 2f64.sqrt()) / 4.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["exact", "--state", "1,0,1,1"]).status.code(), Some(2));
    assert_eq!(run(&["exact", "--state", "1,0,0"]).status.code(), Some(2));
    assert_eq!(
        run(&["operational", "--theta", "2.5"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["exact", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "--n", "0"]).status.code(), Some(2));
    let out = run(&["invert", "--theta", "90", "--vartheta", "10", "--degrees"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cos θ"));
    assert_eq!(
        run(&["invert", "--theta", "0.8", "--vartheta", "0.4"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn config_file_matches_flags_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        "state = \"0.6,0,0.8,0\"\ntheta = 0.4\nvartheta = 1.3\nmode = \"phase\"\n",
    )
    .unwrap();
    let cfg = path.to_str().unwrap();
    let from_file = json(&["operational", "--config", cfg]);
    let from_flags = json(&[
        "operational",
        "--state",
        "0.6,0,0.8,0",
        "--theta",
        "0.4",
        "--vartheta",
        "1.3",
        "--mode",
        "phase",
    ]);
    assert_eq!(from_file, from_flags);
    let overridden = json(&["operational", "--config", cfg, "--theta", "0.5"]);
    assert_eq!(f(&overridden["config"]["theta"]), 0.5);
    assert_eq!(overridden["config"]["mode"], "phase");
    std::fs::write(&path, "thetta = 0.4\n").unwrap();
    assert_eq!(run(&["exact", "--config", cfg]).status.code(), Some(2));
}

#[test]
fn echoed_config_replays_the_run() {
    let v = json(&[
        "sample",
        "--theta",
        "0.6",
        "--vartheta",
        "1.1",
        "--n",
        "5000",
        "--seed",
        "3",
        "--state",
        "0.8,0,0.6,0",
    ]);
    let c = &v["config"];
    assert_eq!(c["seed"], 3);
    let replay = json(&[
        "sample",
        "--theta",
        &c["theta"].to_string(),
        "--vartheta",
        &c["vartheta"].to_string(),
        "--n",
        &c["n"].to_string(),
        "--seed",
        &c["seed"].to_string(),
        "--state",
        &c["state"]["amplitudes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(","),
    ]);
    assert_eq!(v, replay);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = run(&[
        "scan",
        "--theta-grid",
        "0:1:3",
        "--vartheta-grid",
        "0:3:4",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("theta,vartheta,min_value,flag\n"));
    assert_eq!(text.lines().count(), 13);
}
