//! Command-line behaviour: exit codes, determinism of generated files, and
//! snapshot-based reproduction.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twincalib"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .env_remove("TWINCALIB_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn small_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("small.toml");
    std::fs::write(
        &path,
        r#"
[sim]
intervals = 8
mc_ue_drops = 2

[experiment]
seeds = [1, 2]
iterations = 5

[experiment.pso]
iterations = 5
"#,
    )
    .unwrap();
    path
}

#[test]
fn help_exits_zero_for_every_subcommand() {
    for sub in ["gen-field", "simulate", "calibrate", "compare", "plot-data"] {
        let out = bin().args([sub, "--help"]).output().unwrap();
        assert!(out.status.success(), "{sub} --help failed");
        assert!(!out.stdout.is_empty());
    }
    assert!(bin().arg("--help").output().unwrap().status.success());
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = bin().args(["gen-field", "--frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_config_is_a_config_error_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[experiment]\nmethods = [\"warp-drive\"]\n").unwrap();
    let out = run_in(
        dir.path(),
        &["gen-field", "--config", "bad.toml", "--out", "d.csv"],
    );
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("experiment.methods"),
        "diagnostic should name the field: {stderr}"
    );
    assert!(!dir.path().join("d.csv").exists(), "no partial outputs");
}

#[test]
fn unreadable_dataset_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    small_config(dir.path());
    let out = run_in(
        dir.path(),
        &[
            "calibrate",
            "--config",
            "small.toml",
            "--data",
            "missing.csv",
            "--out",
            "rep.json",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!dir.path().join("rep.json").exists());
}

#[test]
fn gen_field_is_bitwise_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    small_config(dir.path());
    for out_name in ["a.csv", "b.csv"] {
        let out = run_in(
            dir.path(),
            &[
                "gen-field",
                "--config",
                "small.toml",
                "--seed",
                "1",
                "--out",
                out_name,
            ],
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_env_var_is_a_fallback() {
    let dir = tempfile::tempdir().unwrap();
    small_config(dir.path());
    let flag = bin()
        .current_dir(dir.path())
        .args(["gen-field", "--config", "small.toml", "--seed", "9", "--out", "flag.csv"])
        .output()
        .unwrap();
    assert!(flag.status.success());
    let env = bin()
        .current_dir(dir.path())
        .env("TWINCALIB_SEED", "9")
        .args(["gen-field", "--config", "small.toml", "--out", "env.csv"])
        .output()
        .unwrap();
    assert!(env.status.success());
    assert_eq!(
        std::fs::read(dir.path().join("flag.csv")).unwrap(),
        std::fs::read(dir.path().join("env.csv")).unwrap()
    );
}

#[test]
fn snapshot_reproduces_outputs_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    small_config(dir.path());
    let first = run_in(
        dir.path(),
        &[
            "gen-field",
            "--config",
            "small.toml",
            "--seed",
            "42",
            "--out",
            "first.csv",
        ],
    );
    assert!(first.status.success());
    // Re-run purely from the snapshot: the seed must come from it.
    let second = run_in(
        dir.path(),
        &[
            "gen-field",
            "--config",
            "first.config.toml",
            "--out",
            "second.csv",
        ],
    );
    assert!(
        second.status.success(),
        "{}",
        String::from_utf8_lossy(&second.stderr)
    );
    assert_eq!(
        std::fs::read(dir.path().join("first.csv")).unwrap(),
        std::fs::read(dir.path().join("second.csv")).unwrap()
    );
}

#[test]
fn calibrate_reports_per_kpi_error() {
    let dir = tempfile::tempdir().unwrap();
    small_config(dir.path());
    assert!(run_in(
        dir.path(),
        &["gen-field", "--config", "small.toml", "--seed", "1", "--out", "d.csv"],
    )
    .status
    .success());
    let out = run_in(
        dir.path(),
        &[
            "calibrate",
            "--config",
            "small.toml",
            "--data",
            "d.csv",
            "--method",
            "mvpso-fair",
            "--alpha",
            "1",
            "--preference",
            "0.8,0.1,0.1",
            "--out",
            "rep.json",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("rep.json")).unwrap())
            .unwrap();
    let runs = report["runs"].as_array().unwrap();
    assert!(!runs.is_empty());
    for run in runs {
        assert_eq!(run["per_kpi_mape"].as_array().unwrap().len(), 3);
        assert_eq!(run["preference"].as_array().unwrap()[0], 0.8);
    }
}

#[test]
fn compare_emits_tables_and_curves() {
    let dir = tempfile::tempdir().unwrap();
    small_config(dir.path());
    assert!(run_in(
        dir.path(),
        &["gen-field", "--config", "small.toml", "--seed", "1", "--out", "d.csv"],
    )
    .status
    .success());
    let out = run_in(
        dir.path(),
        &[
            "compare",
            "--config",
            "small.toml",
            "--data",
            "d.csv",
            "--methods",
            "random,pso",
            "--seeds",
            "1..2",
            "--out",
            "cmp",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["report.json", "mape_by_method.csv", "mape_per_kpi.csv", "curves.csv", "config.toml"] {
        assert!(dir.path().join("cmp").join(file).exists(), "{file} missing");
    }
    let curves = std::fs::read_to_string(dir.path().join("cmp/curves.csv")).unwrap();
    assert!(curves.starts_with("method,preference,seed,iteration,evaluations,best_objective"));
    // 2 methods x 3 preferences x 2 seeds x (5 iterations + init record).
    assert_eq!(curves.lines().count() - 1, 2 * 3 * 2 * 6);
}

#[test]
fn plot_data_round_trips_report() {
    let dir = tempfile::tempdir().unwrap();
    small_config(dir.path());
    assert!(run_in(
        dir.path(),
        &["gen-field", "--config", "small.toml", "--seed", "1", "--out", "d.csv"],
    )
    .status
    .success());
    assert!(run_in(
        dir.path(),
        &[
            "compare", "--config", "small.toml", "--data", "d.csv", "--methods", "random,pso",
            "--seeds", "1", "--out", "cmp",
        ],
    )
    .status
    .success());
    let out = run_in(
        dir.path(),
        &[
            "plot-data",
            "--report",
            "cmp/report.json",
            "--data",
            "d.csv",
            "--out",
            "plots",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("plots/curves.csv").exists());
    let overlay = std::fs::read_to_string(dir.path().join("plots/kpi_overlay.csv")).unwrap();
    assert!(overlay.starts_with("site,band,method,preference,seed,interval,kpi,target,simulated"));
    assert!(overlay.lines().count() > 1);
}
