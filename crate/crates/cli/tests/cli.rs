use std::path::Path;
use std::process::{Command, Output};

fn pcvqe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcvqe")).args(args).output().expect("failed to run pcvqe")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is not valid JSON")
}

#[test]
fn gates_verify_exits_zero() {
    let out = pcvqe(&["gates", "verify"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"));
}

#[test]
fn ed_xxz_four_sites_matches_reference_energy() {
    let out = pcvqe(&["ed", "--model", "xxz", "--sites", "4", "--sector", "2"]);
    let v = stdout_json(&out);
    let e = v["ground_energy"].as_f64().unwrap();
    assert!((e - (-6.464_101_615_137_755)).abs() < 1e-9, "got {e}");
}

#[test]
fn ed_rejects_single_site() {
    let out = pcvqe(&["ed", "--model", "xxz", "--sites", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn vqe_writes_json_and_trace_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("run.json");
    let out = pcvqe(&[
        "vqe", "--model", "xx", "--sites", "4", "--particles", "2", "--gate", "B",
        "--layers", "2", "--trials", "2", "--budget", "50", "--seed", "7",
        "--output", json_path.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    assert!(v["mean_energy"].is_f64());
    assert_eq!(v["trial_results"].as_array().unwrap().len(), 2);

    let on_disk: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(on_disk, v);

    let trace = std::fs::read_to_string(dir.path().join("run.trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("trial,eval,cost"));
    let first = lines.next().expect("trace has at least one row");
    assert_eq!(first.split(',').count(), 3);
}

#[test]
fn config_file_merges_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"model":"xx","sites":4,"particles":2,"gate":"B","layers":2,"trials":3,"budget":50,"seed":11}"#)
        .unwrap();
    let from_cfg = stdout_json(&pcvqe(&["vqe", "--config", cfg.to_str().unwrap()]));
    assert_eq!(from_cfg["trial_results"].as_array().unwrap().len(), 3);

    // A flag on the command line wins over the same key in the config file.
    let overridden =
        stdout_json(&pcvqe(&["vqe", "--config", cfg.to_str().unwrap(), "--trials", "1"]));
    assert_eq!(overridden["trial_results"].as_array().unwrap().len(), 1);
}

#[test]
fn exact_mode_runs_are_byte_identical() {
    let args = [
        "vqe", "--model", "xxz", "--sites", "4", "--particles", "2", "--gate", "A",
        "--layers", "2", "--trials", "2", "--budget", "60", "--seed", "42",
    ];
    let a = pcvqe(&args);
    let b = pcvqe(&args);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn fidelity_command_reports_epsilon() {
    let out = pcvqe(&[
        "fidelity", "--sites", "4", "--particles", "2", "--gate", "G", "--layers", "1",
        "--samples", "2", "--trials", "1", "--budget", "40", "--seed", "3",
    ]);
    let v = stdout_json(&out);
    let eps = v["mean_epsilon"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&eps));
    assert!(Path::new(env!("CARGO_BIN_EXE_pcvqe")).exists());
}
