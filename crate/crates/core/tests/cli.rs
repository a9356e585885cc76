use std::fs;
use std::process::Command;

use hspg::cli::{run_cli, EXIT_DATA, EXIT_OK, EXIT_USAGE};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hspg"))
}

fn synth(out: &std::path::Path, extra: &[&str]) -> i32 {
    let mut args = vec![
        "hspg".to_string(),
        "synth-recovery".into(),
        "--N=400".into(),
        "--n=50".into(),
        "--ratio=0.4".into(),
        "--epochs=6".into(),
        "--switch-epochs=3".into(),
        format!("--out={}", out.display()),
    ];
    args.extend(extra.iter().map(|s| s.to_string()));
    run_cli(args)
}

#[test]
fn ratio_out_of_range_is_usage_error() {
    let code = run_cli(["hspg", "synth-recovery", "--N=10", "--n=10", "--ratio=1.5"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn unknown_subcommand_is_usage_error() {
    assert_eq!(run_cli(["hspg", "frobnicate"]), EXIT_USAGE);
    assert_eq!(run_cli(["hspg", "--help"]), EXIT_OK);
}

#[test]
fn empty_dataset_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("empty.svm");
    fs::write(&data, "").unwrap();
    let out = bin()
        .args(["logreg", "--data", data.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_DATA));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no instances"));
}

#[test]
fn missing_dataset_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("absent.svm");
    let out = bin().args(["logreg", "--data", data.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_DATA));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.svm"));
}

#[test]
fn malformed_dataset_is_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.svm");
    fs::write(&data, "+1 1:0.5\n+1 zero:1\n").unwrap();
    let out = bin().args(["logreg", "--data", data.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_DATA));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn verify_suite_passes() {
    assert_eq!(run_cli(["hspg", "verify", "--suite", "descent"]), EXIT_OK);
    assert_eq!(run_cli(["hspg", "verify", "--suite", "nope"]), EXIT_USAGE);
}

#[test]
fn synth_recovery_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("inst.bin");
    let dump_arg = format!("--dump={}", dump.display());
    assert_eq!(synth(dir.path(), &["--solver=hspg,prox_sg", "--epsilon=0.05", "--tune-epsilon", &dump_arg]), EXIT_OK);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "synth-recovery");
    assert_eq!(manifest["runs"].as_array().unwrap().len(), 3);
    for label in ["hspg_eps0.05", "hspg", "prox_sg"] {
        let csv = fs::read_to_string(dir.path().join("traces").join(format!("{label}.csv"))).unwrap();
        assert!(csv.starts_with("epoch,stage,psi,f,group_sparsity,grad_map_norm,wall_seconds"));
        assert_eq!(csv.lines().count(), 1 + 7);
    }
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 4);
    assert!(dump.is_file());
}

#[test]
fn equal_seed_gives_identical_csv() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let extra = ["--solver=hspg,prox_sg,rda,prox_svrg", "--seed=5"];
    assert_eq!(synth(a.path(), &extra), EXIT_OK);
    assert_eq!(synth(b.path(), &extra), EXIT_OK);
    for name in ["summary.csv", "traces/hspg.csv", "traces/prox_sg.csv", "traces/rda.csv", "traces/prox_svrg.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn different_seed_changes_traces() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(synth(a.path(), &["--solver=prox_sg", "--seed=1"]), EXIT_OK);
    assert_eq!(synth(b.path(), &["--solver=prox_sg", "--seed=2"]), EXIT_OK);
    let name = "traces/prox_sg.csv";
    assert_ne!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
}

#[test]
fn sweep_runs_settings() {
    let dir = tempfile::tempdir().unwrap();
    let code = run_cli([
        "hspg".to_string(),
        "sweep".into(),
        "--settings=300x40x0.5,300x40x0.2".into(),
        "--epochs=4".into(),
        "--switch-epochs=2".into(),
        "--jobs=1".into(),
        format!("--out={}", dir.path().display()),
    ]);
    assert_eq!(code, EXIT_OK);
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    assert!(dir.path().join("N300_n40_r0.5/manifest.json").is_file());
}
