//! End-to-end tests of the `nsmild` binary.

use std::path::Path;
use std::process::{Command, Output};

fn nsmild(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsmild"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn report(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn zero_initial_data_gives_all_zero_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "zero.json",
        r#"{"grid": {"dim": 3, "n_modes": 8}, "solver": {"dt": 0.01}, "run": {"t_end": 0.05, "snapshot_every": 1}, "initial": {"kind": "zero"}}"#,
    );
    let out = nsmild(&["run", "--config", "zero.json", "--out", "o", "--quiet"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("o/diagnostics.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("time,energy,enstrophy,max_div,norm_x_half,norm_F"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        let v: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert!(v[1..].iter().all(|&x| x == 0.0), "{row}");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/manifest.json")).unwrap()).unwrap();
    for path in manifest["outputs"].as_array().unwrap() {
        assert!(dir.path().join(path.as_str().unwrap()).exists(), "{path}");
    }
    assert_eq!(manifest["exit_code"], 0);
}

#[test]
fn malformed_config_exits_one_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", "{\n  \"grid\": {\"dim\": 3,\n");
    write(dir.path(), "typo.json", r#"{"solver": {"viscosity": 1}}"#);
    write(dir.path(), "type.json", r#"{"run": {"t_end": "long"}}"#);
    for (file, needle) in [("bad.json", "line"), ("typo.json", "viscosity"), ("type.json", "run.t_end")] {
        for cmd in ["run", "verify"] {
            let out = nsmild(&[cmd, "--config", file, "--out", "o"], dir.path());
            assert_eq!(out.status.code(), Some(1));
            let err = String::from_utf8_lossy(&out.stderr);
            assert!(err.contains(needle), "{err}");
            assert!(!dir.path().join("o").exists());
        }
    }
    let out = nsmild(&["launch"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seed_flag_overrides_config_seed() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "r.json",
        r#"{"grid": {"dim": 2, "n_modes": 8}, "solver": {"dt": 0.01}, "run": {"t_end": 0.02, "seed": 1}}"#,
    );
    let run = |args: &[&str], out: &str| {
        let mut all = vec!["run", "--config", "r.json", "--quiet", "--out", out];
        all.extend_from_slice(args);
        assert_eq!(nsmild(&all, dir.path()).status.code(), Some(0));
        std::fs::read(dir.path().join(out).join("diagnostics.csv")).unwrap()
    };
    let a = run(&[], "a");
    let b = run(&["--seed", "1"], "b");
    let c = run(&["--seed", "2"], "c");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn blow_up_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "b.json",
        r#"{"grid": {"dim": 3, "n_modes": 8}, "solver": {"dt": 0.01}, "run": {"t_end": 1}, "initial": {"amplitude": 1e7}}"#,
    );
    let out = nsmild(&["run", "--config", "b.json", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(dir.path().join("o/diagnostics.csv").exists());
}

#[test]
fn picard_window_scheme_runs() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "p.json",
        r#"{"grid": {"dim": 2, "n_modes": 16}, "solver": {"scheme": "picard_window", "window_T": 0.05, "n_nodes": 11},
            "run": {"t_end": 0.1, "snapshot_every": 5}, "initial": {"kind": "taylor_green"}}"#,
    );
    let out = nsmild(&["run", "--config", "p.json", "--out", "o", "--quiet"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("o/diagnostics.csv")).unwrap();
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    assert!((last[0] - 0.1).abs() < 1e-12);
    let exact = 2.0 * std::f64::consts::PI.powi(2) * (-0.4f64).exp();
    assert!((last[1] - exact).abs() < 1e-8);
}

#[test]
fn default_verify_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = nsmild(&["verify", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&dir.path().join("o"));
    assert_eq!(r["passed"], true);
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["verdict"] == "measured"));
    assert!(checks.iter().all(|c| c["verdict"] != "fail"));
}

#[test]
fn broken_tolerance_fails_and_names_the_check() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "t.json", r#"{"verify": {"ensemble_size": 4, "n_modes": 8, "tolerance": 1e-20}}"#);
    let out = nsmild(&["verify", "--config", "t.json", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    let r = report(&dir.path().join("o"));
    let failed: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["verdict"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty());
    for name in failed {
        assert!(stderr.contains(name), "{stderr}");
    }
}

#[test]
fn estimate_reports_per_resolution_ratios() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "e.json",
        r#"{"verify": {"ensemble_size": 100, "resolutions": [16, 32]}}"#,
    );
    let out = nsmild(&["estimate", "--config", "e.json", "--out", "o", "--quiet"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&dir.path().join("o"));
    let bilinear = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"].as_str().unwrap().starts_with("bilinear_estimate_theta0.75"))
        .unwrap();
    let per = bilinear["measurements"]["per_resolution"].as_array().unwrap();
    assert_eq!(per.len(), 2);
    assert_eq!(per[0][0], 16);
    assert_eq!(per[1][0], 32);
    assert!(per.iter().all(|p| p[1].as_f64().unwrap() > 0.0));
}

#[test]
fn oracle_command_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = nsmild(&["oracle", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS     taylor_green_march"), "{stdout}");
}
