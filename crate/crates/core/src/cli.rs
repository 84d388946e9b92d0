//! The `nsmild` command line: `run`, `verify`, `estimate` and `oracle`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 blow-up,
//! 3 verification failure. The configuration is parsed and validated before
//! anything is written.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::config::Config;
use crate::error::Result;
use crate::io::{write_diagnostics, write_snapshot, RunManifest};
use crate::solver::{march, picard_march, Scheme};
use crate::verify::{run_estimate, run_oracle, run_verify, CheckReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BLOW_UP: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

const DEFAULT_OUT: &str = "nsmild_out";

#[derive(Debug, Parser)]
#[command(name = "nsmild", version, about = "Mild-solution Navier-Stokes solver and verification suite")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON configuration; defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `run.out_dir`).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Seed override for initial data and ensembles.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// March the configured initial data and write diagnostics and snapshots.
    Run,
    /// Operator identities and structural checks.
    Verify,
    /// Empirical constants of the estimates and hypotheses.
    Estimate,
    /// Taylor-Green oracle comparison.
    Oracle,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Verify => "verify",
            Command::Estimate => "estimate",
            Command::Oracle => "oracle",
        }
    }
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0)
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn main() -> i32 {
    main_from(std::env::args_os())
}

pub fn execute(cli: &Cli) -> i32 {
    let config = match load_config(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let out = cli
        .out
        .clone()
        .or_else(|| config.run.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let result = match cli.command {
        Command::Run => cmd_run(&config, &out, cli.quiet),
        cmd => cmd_suite(cmd, &config, &out, cli.quiet),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config> {
    let mut config = match &cli.config {
        Some(path) => Config::from_file(path)?,
        None => Config::default(),
    };
    if let Some(seed) = cli.seed {
        config.set_seed(seed);
    }
    config.validate()?;
    Ok(config)
}

fn config_snapshot(config: &Config) -> serde_json::Value {
    serde_json::to_value(config).unwrap_or(serde_json::Value::Null)
}

/// Integrate the configured problem; exit code 2 when the blow-up sentinel
/// fires (outputs are still written).
pub fn cmd_run(config: &Config, out: &Path, quiet: bool) -> Result<i32> {
    let started_at = now();
    let grid = config.grid()?;
    let solver = config.solver_config(&grid)?;
    let u0 = config.initial_field(&grid)?;
    let traj = match solver.scheme {
        Scheme::ExpEuler => march(&u0, &solver, config.run.t_end)?,
        Scheme::PicardWindow => picard_march(&u0, &solver, config.run.t_end)?,
    };

    let snap_dir = out.join("snapshots");
    std::fs::create_dir_all(&snap_dir)?;
    let mut outputs = Vec::new();
    let diagnostics = out.join("diagnostics.csv");
    write_diagnostics(&diagnostics, &traj.diagnostics)?;
    outputs.push(diagnostics);
    for (i, (t, u)) in traj.times.iter().zip(&traj.fields).enumerate() {
        let path = snap_dir.join(format!("snapshot_{i:06}.nsms"));
        write_snapshot(&path, u, *t)?;
        outputs.push(path);
    }
    let code = if traj.blow_up.is_some() { EXIT_BLOW_UP } else { EXIT_OK };
    let manifest_path = out.join("manifest.json");
    outputs.push(manifest_path.clone());
    RunManifest {
        command: "run".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: config.run.seed,
        config: config_snapshot(config),
        started_at,
        finished_at: now(),
        outputs,
        exit_code: code,
    }
    .write(&manifest_path)?;

    if !quiet {
        match (traj.blow_up, traj.last()) {
            (Some(t), _) => println!("blow-up sentinel at t = {t}"),
            (None, Some((t, _))) => {
                let d = traj.diagnostics.last().expect("nonempty trajectory");
                println!("reached t = {t}: energy {:.6e}, enstrophy {:.6e}, max_div {:.3e}", d.energy, d.enstrophy, d.max_div);
            }
            (None, None) => {}
        }
        println!("{} snapshots written to {}", traj.len(), out.display());
    }
    Ok(code)
}

fn verdict_label(r: &CheckReport) -> &'static str {
    match (r.asserted, r.passed) {
        (false, _) => "measured",
        (true, true) => "pass",
        (true, false) => "fail",
    }
}

/// Run one suite, write `report.json` and `manifest.json`; exit code 3 if
/// any asserted check failed.
pub fn cmd_suite(command: Command, config: &Config, out: &Path, quiet: bool) -> Result<i32> {
    let started_at = now();
    let reports = match command {
        Command::Verify => run_verify(&config.verify)?,
        Command::Estimate => run_estimate(&config.verify)?,
        Command::Oracle => run_oracle(&config.verify)?,
        Command::Run => unreachable!("run is not a suite"),
    };
    let passed = reports.iter().all(CheckReport::ok);
    let checks: Vec<serde_json::Value> = reports
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "verdict": verdict_label(r),
                "asserted": r.asserted,
                "measurements": r.measurements,
            })
        })
        .collect();
    std::fs::create_dir_all(out)?;
    let report_path = out.join("report.json");
    let report = json!({ "command": command.name(), "passed": passed, "checks": checks });
    std::fs::write(&report_path, serde_json::to_string_pretty(&report)? + "\n")?;

    let code = if passed { EXIT_OK } else { EXIT_VERIFY_FAILED };
    let manifest_path = out.join("manifest.json");
    RunManifest {
        command: command.name().into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: config.verify.seed,
        config: config_snapshot(config),
        started_at,
        finished_at: now(),
        outputs: vec![report_path, manifest_path.clone()],
        exit_code: code,
    }
    .write(&manifest_path)?;

    if !quiet {
        for r in &reports {
            println!("{:<8} {}", verdict_label(r).to_uppercase(), r.name);
        }
        println!("{}: {}", command.name(), if passed { "all asserted checks passed" } else { "FAILED" });
    }
    for r in reports.iter().filter(|r| !r.ok()) {
        eprintln!("failed check: {}", r.name);
    }
    Ok(code)
}
