use std::path::Path;
use std::process::{Command, Output};

fn bmwind(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmwind"))
        .args(args)
        .env_remove("BMWIND_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn schedule_prints_derived_integers() {
    let out = bmwind(&[
        "schedule", "--N", "10000", "--t", "0.2", "--m", "0.7", "--gamma", "6",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(&lines[..4], &["T=6", "M=630", "N'=4096", "eta=0.1"]);
}

#[test]
fn schedule_rejects_invalid_parameters() {
    let out = bmwind(&["schedule", "--N", "10000", "--t", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("0<t<2/5"));
}

#[test]
fn verify_precondition_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bmwind(&[
        "verify",
        "--seed",
        "1",
        "--levels",
        "14",
        "--T",
        "4",
        "--N",
        "12",
        "--M",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = bmwind(&[
        "verify",
        "--seed",
        "3",
        "--levels",
        "11",
        "--grid",
        "256",
        "--T",
        "2",
        "--N",
        "12",
        "--M",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["additivity"]["violations"], 0);
}

#[test]
fn unknown_flag_exits_2_with_usage() {
    let out = bmwind(&["simulate", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn simulate_twice_is_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let out = bmwind(&[
            "simulate",
            "--seed",
            "1",
            "--levels",
            "12",
            "--grid",
            "256",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let (fa, fb) = (read_dir_sorted(a.path()), read_dir_sorted(b.path()));
    assert_eq!(fa.len(), 3);
    assert_eq!(fa, fb);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"levels": 9, "resolution": 64, "n_values": [1, 2], "seed": 5}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = bmwind(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "6",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["manifest"]["config"]["seed"], 6);
    assert_eq!(summary["manifest"]["config"]["levels"], 9);
    let werner = std::fs::read_to_string(out_dir.join("werner.csv")).unwrap();
    assert_eq!(werner.lines().count(), 3);

    std::fs::write(&cfg, r#"{"levls": 9}"#).unwrap();
    let out = bmwind(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_bmwind"))
        .args(["simulate", "--levels", "8", "--grid", "32"])
        .env("BMWIND_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("field.pgm").exists());
}

#[test]
fn mc_is_independent_of_thread_budget() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for (d, threads) in [(&a, "1"), (&b, "8")] {
        let out = bmwind(&[
            "mc",
            "--seed",
            "4",
            "--levels",
            "10",
            "--grid",
            "128",
            "--replicates",
            "6",
            "--studies",
            "werner,tail,pairmoment,scaling",
            "--threads",
            threads,
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    assert_eq!(read_dir_sorted(a.path()), read_dir_sorted(b.path()));
}

#[test]
fn conjecture_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = bmwind(&[
        "conjecture",
        "--levels",
        "8",
        "--grid",
        "64",
        "--replicates",
        "3",
        "--n-values",
        "1,2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let table = std::fs::read_to_string(dir.path().join("conjecture.csv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 3 * 2);
}
