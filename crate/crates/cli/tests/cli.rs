//! End-to-end checks of the binary: exit codes, artifacts and subcommand
//! behaviour on the shipped configs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_starmeasure")
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    Command::new(exe())
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_with_config(sub: &str, config: &str, extra: &[&str]) -> (Output, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let config = configs().join(config);
    let mut args: Vec<String> = vec![
        sub.into(),
        "--config".into(),
        config.display().to_string(),
        "--out".into(),
        dir.path().display().to_string(),
    ];
    args.extend(extra.iter().map(|s| s.to_string()));
    let out = Command::new(exe()).args(&args).output().expect("binary runs");
    (out, dir)
}

#[test]
fn solve_writes_all_artifacts_and_exits_zero() {
    let (out, dir) = run_with_config("solve", "binary_beta.cfg", &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for artifact in ["measure.csv", "trace.csv", "report.json", "render.pgm"] {
        assert!(dir.path().join(artifact).exists(), "{artifact} missing");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["converged"], serde_json::json!(true));
    assert_eq!(report["command"], serde_json::json!("solve"));
    assert!(report["contraction"]["contractive"].as_bool().unwrap());
    // 1D grids render as a one-row strip.
    let pgm = std::fs::read(dir.path().join("render.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n1025 1\n255\n"));
}

#[test]
fn solve_refuses_non_contractive_systems_without_force() {
    let (out, _dir) = run_with_config("solve", "identity.cfg", &[]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("--force"), "stderr: {stderr}");
}

#[test]
fn solve_with_force_converges_on_the_identity_system() {
    let (out, dir) = run_with_config("solve", "identity.cfg", &["--force"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["converged"], serde_json::json!(true));
    let warnings = report["warnings"].as_array().unwrap();
    assert!(
        warnings.iter().any(|w| w.as_str().unwrap().contains("forced")),
        "expected a forced-run warning, got {warnings:?}"
    );
}

#[test]
fn check_reports_the_identity_as_not_contractive_with_exit_zero() {
    let config = configs().join("identity.cfg");
    let out = run(&["check", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("not contractive"), "stdout: {stdout}");
}

#[test]
fn schema_errors_exit_two_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    let text = std::fs::read_to_string(configs().join("binary_beta.cfg"))
        .unwrap()
        .replace("weights = [1.0, 0.5]", "weights = [0.9, 0.5]");
    std::fs::write(&bad, text).unwrap();
    let out = run(&[
        "solve",
        "--config",
        bad.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("max weight must equal 1"), "stderr: {stderr}");
}

#[test]
fn non_convergence_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    // A contractive system stopped long before it can converge.
    let cfg = dir.path().join("tight.cfg");
    let text = std::fs::read_to_string(configs().join("sym_pair_1d.cfg"))
        .unwrap()
        .replace("max_iter = 200", "max_iter = 2")
        .replace("mode = \"hypograph_hausdorff\"", "mode = \"sup\"\nepsilon = 1e-9");
    std::fs::write(&cfg, text).unwrap();
    let out = run(&[
        "solve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    // The trace still comes out for diagnosis.
    assert!(dir.path().join("trace.csv").exists());
    assert!(dir.path().join("measure.csv").exists());
}

#[test]
fn attractor_writes_the_point_set() {
    let (out, dir) = run_with_config("attractor", "single_half.cfg", &[]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("attractor.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("point_index,x0"));
    assert_eq!(lines.next(), Some("0,0"));
    assert_eq!(lines.next(), None, "halving map attractor is the origin");
}

#[test]
fn oracle_suites_are_clean() {
    let out = run(&["oracle", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    let report: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(report["total_violations"], serde_json::json!(0));
    assert!(report["total_instances"].as_u64().unwrap() > 5000);
}

#[test]
fn render_reproduces_the_solve_image() {
    let (out, dir) = run_with_config("solve", "sym_pair_1d.cfg", &[]);
    assert!(out.status.success());
    let rendered = dir.path().join("render.pgm");
    let config = configs().join("sym_pair_1d.cfg");
    let second = tempfile::tempdir().unwrap();
    let out = run(&[
        "render",
        "--config",
        config.to_str().unwrap(),
        "--measure",
        dir.path().join("measure.csv").to_str().unwrap(),
        "--out",
        second.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        std::fs::read(rendered).unwrap(),
        std::fs::read(second.path().join("render.pgm")).unwrap()
    );
}

#[test]
fn missing_config_is_an_io_error() {
    let out = run(&["check", "--config", "/nonexistent/nope.cfg"]);
    assert_eq!(out.status.code(), Some(4));
}
