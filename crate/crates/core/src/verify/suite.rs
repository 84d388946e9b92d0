//! The three report-producing suites behind the `verify`, `estimate` and
//! `oracle` commands.

use serde::{Deserialize, Serialize};

use super::{
    assumption_f_verdict, check_advection_orthogonality, check_assumption_f, check_diagonal_class, check_energy_orthogonality,
    check_gradient_identity, check_operator_identities, check_resolvent_divfree, check_semigroup, check_truncation_divergence,
    compare_oracle, estimate_bilinear_constant, estimate_hoelder, existence_time_trend, frac_norm_comparison, taylor_green,
    taylor_green_residual, CheckReport, Ensemble, Verdict,
};
use crate::error::{Error, Result};
use crate::generate::{normalize_x_half, random_divfree_field};
use crate::grid::TorusGrid;
use crate::solver::{march, SolverConfig};

/// Settings shared by all three suites. Every field has a default, so an
/// empty JSON object is a valid configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub ensemble_size: usize,
    pub seed: u64,
    /// Spectral decay of the operator-check ensemble.
    pub decay: f64,
    pub dim: usize,
    pub n_modes: usize,
    /// Tolerance of the exact modewise identities.
    pub tolerance: f64,
    /// Tolerance of the gradient-norm identity, which goes through physical
    /// space.
    pub gradient_tolerance: f64,
    pub lambdas: Vec<f64>,
    pub times: Vec<f64>,
    pub nu: f64,
    /// Number of random potentials per gradient-orthogonality probe.
    pub n_test: usize,

    /// Spectral decay of the estimate ensemble.
    pub estimate_decay: f64,
    pub resolutions: Vec<usize>,
    pub exponents: (f64, f64, f64),
    pub p: f64,
    /// `γ` in the `X_γ` versus `X_{1/2}` norm comparison.
    pub gamma: f64,
    /// Resolutions of the assumption (F) stability check.
    pub assumption_resolutions: Vec<usize>,
    pub amplitudes: Vec<f64>,
    /// `‖·‖_{X_{1/2}}` of the base field in the existence-window trend.
    pub trend_base_norm: f64,
    pub trend_window: f64,
    pub trend_nodes: usize,
    pub trend_n_modes: usize,

    pub oracle_n_modes: usize,
    pub oracle_dt: f64,
    pub oracle_t_end: f64,
    pub oracle_snapshot_every: usize,
    pub oracle_tolerance: f64,
    pub oracle_energy_tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            ensemble_size: 100,
            seed: 0,
            decay: 2.0,
            dim: 3,
            n_modes: 32,
            tolerance: 1e-12,
            gradient_tolerance: 1e-10,
            lambdas: vec![1.0, 10.0, 100.0],
            times: vec![0.01, 0.1, 1.0],
            nu: 1.0,
            n_test: 20,
            estimate_decay: 4.0,
            resolutions: vec![16, 32],
            exponents: (0.0, 0.75, 0.75),
            p: 2.0,
            gamma: 0.75,
            assumption_resolutions: vec![8, 16],
            amplitudes: vec![0.1, 1.0, 10.0],
            trend_base_norm: 20.0,
            trend_window: 1.0,
            trend_nodes: 21,
            trend_n_modes: 16,
            oracle_n_modes: 64,
            oracle_dt: 1e-3,
            oracle_t_end: 1.0,
            oracle_snapshot_every: 100,
            oracle_tolerance: 1e-10,
            oracle_energy_tolerance: 1e-8,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.ensemble_size < 2 {
            return bad(format!("ensemble_size must be >= 2, got {}", self.ensemble_size));
        }
        if !(self.tolerance >= 0.0 && self.gradient_tolerance >= 0.0) {
            return bad("tolerances must be nonnegative".into());
        }
        if self.resolutions.is_empty() || self.assumption_resolutions.is_empty() {
            return bad("resolution lists must be nonempty".into());
        }
        if self.amplitudes.is_empty() {
            return bad("amplitudes must be nonempty".into());
        }
        for &n in self.resolutions.iter().chain(&self.assumption_resolutions).chain([&self.n_modes, &self.trend_n_modes]) {
            TorusGrid::new(self.dim, n, 2.0 * std::f64::consts::PI)?;
        }
        TorusGrid::standard(2, self.oracle_n_modes)?;
        if !(self.oracle_dt > 0.0 && self.oracle_t_end > 0.0 && self.oracle_snapshot_every > 0) {
            return bad("oracle_dt, oracle_t_end and oracle_snapshot_every must be positive".into());
        }
        Ok(())
    }

    fn ensemble(&self, decay: f64) -> Ensemble {
        Ensemble::new(self.ensemble_size, self.seed, decay)
    }
}

/// Operator identities and structural claims on one grid.
pub fn run_verify(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let grid = TorusGrid::standard(config.dim, config.n_modes)?;
    let fields = config.ensemble(config.decay).fields(&grid)?;
    let tol = config.tolerance;
    let mut reports = vec![
        check_operator_identities(&fields, &config.lambdas, &config.times, config.nu, config.decay, tol)?,
        check_resolvent_divfree(&config.lambdas, &fields, tol)?,
        check_semigroup(&fields, &config.times, config.nu, tol)?,
    ];
    let (gradient, gradient_ratios) = check_gradient_identity(&fields, config.gradient_tolerance)?;
    reports.push(gradient);
    reports.push(gradient_ratios);
    reports.push(check_truncation_divergence(&fields, tol)?);
    reports.push(check_energy_orthogonality(&fields, tol)?);
    reports.push(check_diagonal_class(&fields, config.decay)?);
    let (orthogonality, advection) = check_advection_orthogonality(&fields, config.n_test, config.decay)?;
    reports.push(orthogonality);
    reports.push(advection);
    Ok(reports)
}

/// Empirical constants: the bilinear estimate (asserted bounded at the
/// configured exponents, measured at `(1/2, 1/2)`), norm comparisons,
/// Hölder fit, assumption (F) and the existence-window trend.
pub fn run_estimate(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let ensemble = config.ensemble(config.estimate_decay);
    let mut reports = Vec::new();

    let main = estimate_bilinear_constant(&ensemble, config.dim, config.exponents, config.p, &config.resolutions)?;
    reports.push(main.to_check(true));
    let half = estimate_bilinear_constant(&ensemble, config.dim, (0.0, 0.5, 0.5), config.p, &config.resolutions)?;
    reports.push(half.to_check(false));
    let (up, down) = frac_norm_comparison(&ensemble, config.dim, config.gamma, config.p, &config.resolutions)?;
    reports.push(up.to_check(false));
    reports.push(down.to_check(false));

    // Hölder fit and assumption (F) on short marches from two seeded data.
    let solver = SolverConfig {
        nu: config.nu,
        p: config.p,
        dt: 5e-3,
        ..Default::default()
    };
    let mut f_reports = Vec::new();
    let mut hoelder = CheckReport::measurement("hoelder_fit");
    for &n in &config.assumption_resolutions {
        let grid = TorusGrid::standard(config.dim, n)?;
        let u1 = normalize_x_half(&random_divfree_field(&grid, config.seed, config.estimate_decay, 1.0)?, config.p, 1.0)?;
        let u2 = normalize_x_half(&random_divfree_field(&grid, config.seed + 1, config.estimate_decay, 1.0)?, config.p, 1.0)?;
        let t1 = march(&u1, &solver, 0.05)?;
        let t2 = march(&u2, &solver, 0.05)?;
        let fit = estimate_hoelder(&t1, 0.5)?;
        hoelder.record(&format!("n{n}"), fit);
        f_reports.push(check_assumption_f(&t1, &t2, 0.5, config.p)?);
    }
    reports.push(hoelder);
    let verdict = assumption_f_verdict(&f_reports);
    reports.push(
        CheckReport::asserted("assumption_f", verdict == Verdict::Bounded)
            .with("verdict", verdict)
            .with("per_resolution", &f_reports),
    );

    let trend_grid = TorusGrid::standard(config.dim, config.trend_n_modes)?;
    let base = normalize_x_half(
        &random_divfree_field(&trend_grid, config.seed, config.estimate_decay, 1.0)?,
        config.p,
        config.trend_base_norm,
    )?;
    let trend_solver = SolverConfig {
        nu: config.nu,
        p: config.p,
        window_t: config.trend_window,
        n_nodes: config.trend_nodes,
        ..Default::default()
    };
    let trend = existence_time_trend(&config.amplitudes, &base, &trend_solver)?;
    reports.push(
        CheckReport::asserted("existence_window_trend", trend.nonincreasing)
            .with("points", &trend.points)
            .with("base_norm_x_half", config.trend_base_norm),
    );
    Ok(reports)
}

/// Taylor–Green march against the closed form, plus the substitution
/// residual of the closed form itself.
pub fn run_oracle(config: &VerifyConfig) -> Result<Vec<CheckReport>> {
    config.validate()?;
    let grid = TorusGrid::standard(2, config.oracle_n_modes)?;
    let u0 = taylor_green(&grid, config.nu, 0.0)?;
    let solver = SolverConfig {
        nu: config.nu,
        p: config.p,
        dt: config.oracle_dt,
        snapshot_every: config.oracle_snapshot_every,
        ..Default::default()
    };
    let traj = march(&u0, &solver, config.oracle_t_end)?;
    let errors = compare_oracle(&traj, config.nu)?;
    let max_error = errors.iter().map(|e| e.1).fold(0.0, f64::max);
    let energy_error = traj
        .diagnostics
        .iter()
        .map(|d| (d.energy - 2.0 * std::f64::consts::PI.powi(2) * (-4.0 * config.nu * d.time).exp()).abs())
        .fold(0.0, f64::max);
    let march_ok = traj.blow_up.is_none() && max_error <= config.oracle_tolerance;
    let mut reports = vec![
        CheckReport::asserted("taylor_green_march", march_ok)
            .with("max_relative_l2_error", max_error)
            .with("error_series", &errors),
        CheckReport::asserted("taylor_green_energy", energy_error <= config.oracle_energy_tolerance)
            .with("max_abs_energy_error", energy_error),
    ];
    let residual = traj
        .times
        .iter()
        .map(|&t| taylor_green_residual(&grid, config.nu, t))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    reports.push(CheckReport::asserted("taylor_green_residual", residual <= 1e-10).with("max_residual", residual));
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            ensemble_size: 6,
            n_modes: 8,
            resolutions: vec![8, 12],
            assumption_resolutions: vec![8],
            trend_n_modes: 8,
            trend_nodes: 5,
            oracle_n_modes: 16,
            oracle_dt: 1e-2,
            oracle_t_end: 0.2,
            oracle_snapshot_every: 5,
            ..Default::default()
        }
    }

    #[test]
    fn small_verify_suite_passes() {
        let reports = run_verify(&small()).unwrap();
        for r in &reports {
            assert!(r.ok(), "{r:?}");
        }
        assert!(reports.iter().any(|r| !r.asserted));
    }

    #[test]
    fn impossible_tolerance_fails_a_named_check() {
        let cfg = VerifyConfig { tolerance: 1e-20, ..small() };
        let reports = run_verify(&cfg).unwrap();
        assert!(reports.iter().any(|r| !r.ok()));
    }

    #[test]
    fn small_oracle_suite_passes() {
        for r in run_oracle(&small()).unwrap() {
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn config_accepts_partial_json() {
        let cfg: VerifyConfig = serde_json::from_str(r#"{"ensemble_size": 10}"#).unwrap();
        assert_eq!(cfg.ensemble_size, 10);
        assert_eq!(cfg.resolutions, vec![16, 32]);
        assert!(serde_json::from_str::<VerifyConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
