//! Empirical constants: the bilinear advection estimate, fractional-norm
//! comparisons, Hölder fits of trajectories, the local Lipschitz/Hölder
//! condition on the nonlinearity, and existence-window trends.

use serde::{Deserialize, Serialize};

use super::{growth_verdict, CheckReport, Ensemble, Verdict};
use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::TorusGrid;
use crate::operators::{self, FracNormParams};
use crate::solver::{adaptive_window, SolverConfig, Trajectory, WindowReport};
use crate::spectral;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EstimateReport {
    pub name: String,
    pub ensemble_size: usize,
    /// `(δ, ϑ, ω)`; for norm comparisons `(0, γ, 1/2)`.
    pub exponent_triple: (f64, f64, f64),
    /// Max ratio at the finest resolution, the empirical constant.
    pub fitted_constant: f64,
    pub max_ratio: f64,
    pub per_resolution: Vec<(usize, f64)>,
    pub verdict: Verdict,
}

impl EstimateReport {
    fn from_resolutions(name: &str, ensemble_size: usize, exponent_triple: (f64, f64, f64), per_resolution: Vec<(usize, f64)>) -> Self {
        let values: Vec<f64> = per_resolution.iter().map(|r| r.1).collect();
        Self {
            name: name.to_string(),
            ensemble_size,
            exponent_triple,
            fitted_constant: values.last().copied().unwrap_or(f64::NAN),
            max_ratio: values.iter().copied().fold(f64::NAN, f64::max),
            verdict: growth_verdict(&values),
            per_resolution,
        }
    }

    pub fn to_check(&self, asserted: bool) -> CheckReport {
        let report = if asserted {
            CheckReport::asserted(self.name.clone(), self.verdict == Verdict::Bounded)
        } else {
            CheckReport::measurement(self.name.clone())
        };
        report
            .with("ensemble_size", self.ensemble_size)
            .with("exponent_triple", self.exponent_triple)
            .with("fitted_constant", self.fitted_constant)
            .with("max_ratio", self.max_ratio)
            .with("per_resolution", &self.per_resolution)
            .with("verdict", self.verdict)
    }
}

/// `‖(u·∇)v‖_{L_p} / (‖(-Δ)^ϑ u‖_{L_p} ‖(-Δ)^ω v‖_{L_p})`.
pub fn bilinear_ratio(u: &SpectralVectorField, v: &SpectralVectorField, theta: f64, omega: f64, p: f64) -> Result<f64> {
    let nu = operators::frac_norm(u, FracNormParams::new(theta, p)?)?;
    let nv = operators::frac_norm(v, FracNormParams::new(omega, p)?)?;
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroNorm("bilinear_ratio"));
    }
    Ok(operators::lp_norm(&operators::advect(u, v)?, p)? / (nu * nv))
}

/// Max of [`bilinear_ratio`] over `ensemble.size` pairs per resolution.
///
/// Ensemble members are dealiased before measuring so numerator and
/// denominators see the same band-limited fields. Only `δ = 0` is
/// supported.
pub fn estimate_bilinear_constant(ensemble: &Ensemble, dim: usize, exponents: (f64, f64, f64), p: f64, resolutions: &[usize]) -> Result<EstimateReport> {
    let (delta, theta, omega) = exponents;
    if delta != 0.0 {
        return Err(Error::InvalidArgument(format!("only delta = 0 is supported, got {delta}")));
    }
    for (name, e) in [("theta", theta), ("omega", omega)] {
        if !(e > 0.0 && e <= 1.0) {
            return Err(Error::InvalidArgument(format!("{name} must lie in (0,1], got {e}")));
        }
    }
    if resolutions.is_empty() {
        return Err(Error::InvalidArgument("no resolutions given".into()));
    }
    let mut per_resolution = Vec::with_capacity(resolutions.len());
    for &n in resolutions {
        let grid = TorusGrid::standard(dim, n)?;
        let mut worst = 0.0f64;
        for i in 0..ensemble.size {
            let u = spectral::dealias(&ensemble.member(&grid, 2 * i)?);
            let v = spectral::dealias(&ensemble.member(&grid, 2 * i + 1)?);
            worst = worst.max(bilinear_ratio(&u, &v, theta, omega, p)?);
        }
        per_resolution.push((n, worst));
    }
    let name = format!("bilinear_estimate_theta{theta}_omega{omega}_p{p}");
    Ok(EstimateReport::from_resolutions(&name, ensemble.size, exponents, per_resolution))
}

/// Both directions of the comparison between `‖·‖_{X_γ}` and `‖·‖_{X_{1/2}}`:
/// returns (max `‖u‖_γ/‖u‖_{1/2}`, max `‖u‖_{1/2}/‖u‖_γ`) reports.
pub fn frac_norm_comparison(ensemble: &Ensemble, dim: usize, gamma: f64, p: f64, resolutions: &[usize]) -> Result<(EstimateReport, EstimateReport)> {
    let g = FracNormParams::new(gamma, p)?;
    let h = FracNormParams::new(0.5, p)?;
    let mut up = Vec::new();
    let mut down = Vec::new();
    for &n in resolutions {
        let grid = TorusGrid::standard(dim, n)?;
        let (mut a, mut b) = (0.0f64, 0.0f64);
        for i in 0..ensemble.size {
            let u = ensemble.member(&grid, i)?;
            let ng = operators::frac_norm(&u, g)?;
            let nh = operators::frac_norm(&u, h)?;
            if ng == 0.0 || nh == 0.0 {
                return Err(Error::ZeroNorm("frac_norm_comparison"));
            }
            a = a.max(ng / nh);
            b = b.max(nh / ng);
        }
        up.push((n, a));
        down.push((n, b));
    }
    Ok((
        EstimateReport::from_resolutions(&format!("norm_ratio_x{gamma}_over_x0.5"), ensemble.size, (0.0, gamma, 0.5), up),
        EstimateReport::from_resolutions(&format!("norm_ratio_x0.5_over_x{gamma}"), ensemble.size, (0.0, 0.5, gamma), down),
    ))
}

/// Least-squares fit `log‖u(t₁)-u(t₂)‖_{X_α} ≈ log C + β log|t₁-t₂|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HoelderFit {
    pub c: f64,
    pub beta: f64,
    pub r_squared: f64,
    pub sample_pairs: usize,
}

fn snapshot_spacing(times: &[f64]) -> Result<f64> {
    let mut dt = f64::INFINITY;
    for w in times.windows(2) {
        let gap = w[1] - w[0];
        if !(gap > 0.0) {
            return Err(Error::Degenerate(format!("coincident or decreasing times {} and {}", w[0], w[1])));
        }
        dt = dt.min(gap);
    }
    Ok(dt)
}

/// Fit over all snapshot pairs separated by at least twice the snapshot
/// spacing, with the `X_α` norm taken in `L₂`.
pub fn estimate_hoelder(traj: &Trajectory, alpha: f64) -> Result<HoelderFit> {
    if traj.len() < 10 {
        return Err(Error::Degenerate(format!("need >= 10 snapshots, got {}", traj.len())));
    }
    let dt = snapshot_spacing(&traj.times)?;
    let params = FracNormParams::new(alpha, 2.0)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..traj.len() {
        for j in i + 1..traj.len() {
            let gap = traj.times[j] - traj.times[i];
            if gap < 2.0 * dt * (1.0 - 1e-9) {
                continue;
            }
            let d = operators::frac_norm(&traj.fields[j].sub(&traj.fields[i]), params)?;
            if d > 0.0 {
                xs.push(gap.ln());
                ys.push(d.ln());
            }
        }
    }
    if xs.len() < 2 {
        return Err(Error::Degenerate("trajectory differences vanish".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("all sampled time gaps are equal".into()));
    }
    let beta = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0) };
    if !(beta > 0.0 && beta <= 1.05) {
        return Err(Error::Degenerate(format!("fitted exponent {beta} outside (0, 1.05]")));
    }
    Ok(HoelderFit {
        c: (my - beta * mx).exp(),
        beta,
        r_squared,
        sample_pairs: xs.len(),
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AssumptionFReport {
    pub n_modes: usize,
    /// Empirical constant `L`: max of the ratio over sampled pairs.
    pub max_ratio: f64,
    pub beta: f64,
    pub pairs_used: usize,
    pub pairs_skipped: usize,
}

/// Max over snapshot pairs of
/// `‖F(u₁(t₁)) - F(u₂(t₂))‖_{L_p} / (|t₁-t₂|^β + ‖u₁(t₁)-u₂(t₂)‖_{X_α})`,
/// with `β` from the Hölder fit of the first trajectory. Pairs with equal
/// time and identical state are skipped.
pub fn check_assumption_f(first: &Trajectory, second: &Trajectory, alpha: f64, p: f64) -> Result<AssumptionFReport> {
    if first.times != second.times {
        return Err(Error::InvalidArgument("trajectories must share a time grid".into()));
    }
    let beta = estimate_hoelder(first, alpha)?.beta;
    let params = FracNormParams::new(alpha, p)?;
    let f1: Vec<SpectralVectorField> = first.fields.iter().map(operators::nonlinear_f).collect::<Result<_>>()?;
    let f2: Vec<SpectralVectorField> = second.fields.iter().map(operators::nonlinear_f).collect::<Result<_>>()?;
    let mut max_ratio = 0.0f64;
    let (mut used, mut skipped) = (0usize, 0usize);
    for i in 0..first.len() {
        for j in 0..second.len() {
            let dt = (first.times[i] - second.times[j]).abs();
            let du = operators::frac_norm(&first.fields[i].sub(&second.fields[j]), params)?;
            let denom = dt.powf(beta) + du;
            if denom == 0.0 {
                skipped += 1;
                continue;
            }
            let num = operators::lp_norm(&f1[i].sub(&f2[j]), p)?;
            max_ratio = max_ratio.max(num / denom);
            used += 1;
        }
    }
    Ok(AssumptionFReport {
        n_modes: first.fields[0].grid().n_modes(),
        max_ratio,
        beta,
        pairs_used: used,
        pairs_skipped: skipped,
    })
}

/// Pass iff every max ratio is finite and the value grows by less than 10%
/// from the coarsest to the finest resolution.
pub fn assumption_f_verdict(reports: &[AssumptionFReport]) -> Verdict {
    if reports.iter().any(|r| !r.max_ratio.is_finite()) {
        return Verdict::Inconclusive;
    }
    let values: Vec<f64> = reports.iter().map(|r| r.max_ratio).collect();
    growth_verdict(&values)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrendReport {
    pub points: Vec<(f64, f64)>,
    pub nonincreasing: bool,
    pub windows: Vec<WindowReport>,
}

/// Existence window `T*` for `amplitude · base` at each amplitude.
pub fn existence_time_trend(amplitudes: &[f64], base: &SpectralVectorField, config: &SolverConfig) -> Result<TrendReport> {
    if amplitudes.is_empty() {
        return Err(Error::InvalidArgument("no amplitudes given".into()));
    }
    if amplitudes.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("amplitudes must be strictly increasing".into()));
    }
    let mut points = Vec::new();
    let mut windows = Vec::new();
    for &a in amplitudes {
        let report = adaptive_window(&base.scaled(a), config)?;
        points.push((a, report.t_star));
        windows.push(report);
    }
    let nonincreasing = points.windows(2).all(|w| w[1].1 <= w[0].1);
    Ok(TrendReport {
        points,
        nonincreasing,
        windows,
    })
}
