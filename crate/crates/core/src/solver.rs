//! Solvers for the Duhamel integral equation
//!
//! ```text
//! u(t) = e^{(t-t₀)νΔ}u₀ + ∫_{t₀}^{t} e^{(t-s)νΔ}(F u(s) + P f(s)) ds
//! ```
//!
//! Two routes are provided: exponential-Euler marching (the one-node
//! collapse of the integral) and Picard iteration on a fixed window with
//! trapezoidal quadrature in `s` and exact semigroup weights.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::generate::ForcingSpec;
use crate::operators::{self, FracNormParams};

/// Norms above this stop a march and flag blow-up.
pub const BLOW_UP_THRESHOLD: f64 = 1e8;

const MAX_HALVINGS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    PicardWindow,
    ExpEuler,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub nu: f64,
    pub p: f64,
    pub scheme: Scheme,
    pub dt: f64,
    pub window_t: f64,
    pub n_nodes: usize,
    pub picard_tol: f64,
    pub picard_max_iters: usize,
    pub forcing: Option<ForcingSpec>,
    pub dealias: bool,
    pub t0: f64,
    /// Store every `snapshot_every`-th marching step (the final state is
    /// always stored).
    pub snapshot_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            nu: 1.0,
            p: 2.0,
            scheme: Scheme::ExpEuler,
            dt: 1e-3,
            window_t: 0.1,
            n_nodes: 101,
            picard_tol: 1e-10,
            picard_max_iters: 50,
            forcing: None,
            dealias: true,
            t0: 0.0,
            snapshot_every: 1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [("nu", self.nu), ("dt", self.dt), ("window_T", self.window_t), ("picard_tol", self.picard_tol)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.p >= 2.0 && self.p.is_finite()) {
            return Err(Error::InvalidArgument(format!("p must be >= 2, got {}", self.p)));
        }
        if self.n_nodes < 3 {
            return Err(Error::InvalidArgument(format!("n_nodes must be >= 3, got {}", self.n_nodes)));
        }
        if self.picard_max_iters == 0 || self.snapshot_every == 0 {
            return Err(Error::InvalidArgument("picard_max_iters and snapshot_every must be >= 1".into()));
        }
        Ok(())
    }

    fn forcing_at(&self, t: f64) -> Option<SpectralVectorField> {
        self.forcing
            .as_ref()
            .filter(|f| !f.is_zero())
            .map(|f| operators::leray_project(&f.at(t)))
    }

    fn x_half(&self) -> FracNormParams {
        FracNormParams::new(0.5, self.p).expect("validated exponent")
    }
}

/// Per-snapshot diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRow {
    pub time: f64,
    /// `‖u‖²_{L₂}`
    pub energy: f64,
    /// `‖∇u‖²_{L₂}`
    pub enstrophy: f64,
    pub max_div: f64,
    pub norm_x_half: f64,
    pub norm_f: f64,
}

impl DiagnosticsRow {
    pub fn compute(time: f64, u: &SpectralVectorField, p: f64, dealias: bool) -> Result<Self> {
        let ksq = u.grid().k_squared_all();
        let energy = u.parseval_l2_squared();
        let enstrophy = u.map_modes(|f| ksq[f].sqrt()).parseval_l2_squared();
        Ok(Self {
            time,
            energy,
            enstrophy,
            max_div: operators::max_pointwise_divergence(u),
            norm_x_half: operators::frac_norm(u, FracNormParams::new(0.5, p)?)?,
            norm_f: operators::lp_norm(&operators::nonlinear_f_with(u, dealias)?, p)?,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub fields: Vec<SpectralVectorField>,
    pub diagnostics: Vec<DiagnosticsRow>,
    /// Set when a march stopped on a non-finite value or a norm above
    /// [`BLOW_UP_THRESHOLD`]; holds the time of the offending step.
    pub blow_up: Option<f64>,
}

impl Trajectory {
    fn new() -> Self {
        Self {
            times: Vec::new(),
            fields: Vec::new(),
            diagnostics: Vec::new(),
            blow_up: None,
        }
    }

    fn push(&mut self, t: f64, u: SpectralVectorField, config: &SolverConfig) -> Result<()> {
        self.diagnostics.push(DiagnosticsRow::compute(t, &u, config.p, config.dealias)?);
        self.times.push(t);
        self.fields.push(u);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, &SpectralVectorField)> {
        self.times.last().copied().zip(self.fields.last())
    }
}

fn require_solver_input(u: &SpectralVectorField) -> Result<()> {
    if u.divergence_residual() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "initial field is not divergence-free (residual {:e})",
            u.divergence_residual()
        )));
    }
    u.require_mean_zero()
}

/// Enforce exact mean-zero and the divergence-free flag on a solver state.
fn clean(mut u: SpectralVectorField) -> SpectralVectorField {
    for c in u.components_mut() {
        c[0] = Default::default();
    }
    u.set_divergence_free(true);
    u
}

/// One exponential-Euler step
/// `u_{m+1} = e^{hνΔ}u_m + h φ₁(hνΔ)[F(u_m) + P f(t_m)]`.
pub fn exp_euler_step(u: &SpectralVectorField, t: f64, config: &SolverConfig) -> Result<SpectralVectorField> {
    let h = config.dt;
    let mut rhs = operators::nonlinear_f_with(u, config.dealias)?;
    if let Some(f) = config.forcing_at(t) {
        rhs.add_scaled(1.0, &f);
    }
    let mut next = operators::heat_semigroup(h, config.nu, u)?;
    next.add_scaled(h, &operators::phi1(h, config.nu, &rhs)?);
    if !next.is_finite() {
        return Err(Error::NonFinite { time: t + h });
    }
    Ok(clean(next))
}

/// March with exponential Euler from `config.t0` to `t_end`.
///
/// Blow-up (non-finite state or `‖u‖_{X_{1/2}} > 1e8`) ends the march early
/// and is recorded in [`Trajectory::blow_up`].
pub fn march(u0: &SpectralVectorField, config: &SolverConfig, t_end: f64) -> Result<Trajectory> {
    config.validate()?;
    require_solver_input(u0)?;
    if !(t_end > config.t0) {
        return Err(Error::InvalidArgument(format!(
            "t_end = {t_end} must exceed t0 = {}",
            config.t0
        )));
    }
    let n_steps = ((t_end - config.t0) / config.dt - 1e-9).ceil().max(1.0) as usize;

    let mut traj = Trajectory::new();
    let mut u = clean(u0.clone());
    traj.push(config.t0, u.clone(), config)?;
    for step in 1..=n_steps {
        let t_prev = config.t0 + (step - 1) as f64 * config.dt;
        let t = config.t0 + step as f64 * config.dt;
        u = match exp_euler_step(&u, t_prev, config) {
            Ok(next) => next,
            Err(Error::NonFinite { time }) => {
                traj.blow_up = Some(time);
                break;
            }
            Err(e) => return Err(e),
        };
        let norm = operators::frac_norm(&u, config.x_half())?;
        if !norm.is_finite() || norm > BLOW_UP_THRESHOLD {
            traj.push(t, u, config)?;
            traj.blow_up = Some(t);
            break;
        }
        if step % config.snapshot_every == 0 || step == n_steps {
            traj.push(t, u.clone(), config)?;
        }
    }
    Ok(traj)
}

/// Outcome of a converged Picard solve.
#[derive(Clone, Debug)]
pub struct PicardSolution {
    pub trajectory: Trajectory,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
}

/// Fixed-point iteration for the integral equation on
/// `[t0, t0 + window_T]` with `n_nodes` uniform nodes.
///
/// The first iterate is the free heat evolution. The Duhamel integral uses
/// the trapezoidal rule with exact semigroup weights, accumulated by the
/// recursion `B_j = e^{hνΔ}B_{j-1} + g_j`, `B_0 = g_0/2`, whose
/// `h(B_j - g_j/2)` equals the trapezoid sum at node `j`. Convergence is
/// measured as the largest `X_{1/2}` change over the nodes.
pub fn picard_solve(u0: &SpectralVectorField, config: &SolverConfig) -> Result<PicardSolution> {
    config.validate()?;
    require_solver_input(u0)?;
    let n = config.n_nodes;
    let h = config.window_t / (n - 1) as f64;
    let times: Vec<f64> = (0..n).map(|j| config.t0 + j as f64 * h).collect();
    let x_half = config.x_half();

    let u0 = clean(u0.clone());
    let free: Vec<SpectralVectorField> = times
        .iter()
        .map(|&t| operators::heat_semigroup(t - config.t0, config.nu, &u0))
        .collect::<Result<_>>()?;
    let forcing: Vec<Option<SpectralVectorField>> = times.iter().map(|&t| config.forcing_at(t)).collect();

    let mut current = free.clone();
    let mut residuals: Vec<f64> = Vec::new();
    let mut stalled = 0usize;
    for iter in 1..=config.picard_max_iters {
        let mut next = Vec::with_capacity(n);
        let mut acc: Option<SpectralVectorField> = None;
        for j in 0..n {
            let mut g = operators::nonlinear_f_with(&current[j], config.dealias)?;
            if let Some(f) = &forcing[j] {
                g.add_scaled(1.0, f);
            }
            let b = match acc.take() {
                None => g.scaled(0.5),
                Some(prev) => {
                    let mut b = operators::heat_semigroup(h, config.nu, &prev)?;
                    b.add_scaled(1.0, &g);
                    b
                }
            };
            let mut u = free[j].clone();
            if j > 0 {
                u.add_scaled(h, &b);
                u.add_scaled(-0.5 * h, &g);
            }
            next.push(clean(u));
            acc = Some(b);
        }

        let mut residual = 0.0f64;
        for (a, b) in next.iter().zip(&current) {
            let r = operators::frac_norm(&a.sub(b), x_half)?;
            residual = if r.is_finite() { residual.max(r) } else { f64::INFINITY };
        }
        if let Some(&last) = residuals.last() {
            if residual >= last {
                stalled += 1;
            } else {
                stalled = 0;
            }
        }
        residuals.push(residual);
        current = next;

        if !residual.is_finite() || stalled >= 3 {
            return Err(Error::NotContracting { residuals });
        }
        if residual < config.picard_tol {
            let mut trajectory = Trajectory::new();
            for (t, u) in times.iter().zip(current) {
                trajectory.push(*t, u, config)?;
            }
            return Ok(PicardSolution {
                trajectory,
                iterations: iter,
                residual_history: residuals,
            });
        }
    }
    Err(Error::MaxIters { residuals })
}

/// One attempted window in [`adaptive_window`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowAttempt {
    pub window_t: f64,
    pub converged: bool,
    pub iterations: usize,
    pub final_residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowReport {
    /// First convergent window, or 0 when every halving failed.
    pub t_star: f64,
    pub attempts: Vec<WindowAttempt>,
}

/// Halve `window_T` until the Picard solve converges, up to 20 halvings.
pub fn adaptive_window(u0: &SpectralVectorField, config: &SolverConfig) -> Result<WindowReport> {
    config.validate()?;
    require_solver_input(u0)?;
    let mut attempts = Vec::new();
    let mut cfg = config.clone();
    for _ in 0..=MAX_HALVINGS {
        let outcome = picard_solve(u0, &cfg);
        let (converged, residuals) = match &outcome {
            Ok(sol) => (true, sol.residual_history.clone()),
            Err(Error::NotContracting { residuals }) | Err(Error::MaxIters { residuals }) => (false, residuals.clone()),
            Err(_) => (false, Vec::new()),
        };
        attempts.push(WindowAttempt {
            window_t: cfg.window_t,
            converged,
            iterations: residuals.len(),
            final_residual: residuals.last().copied().unwrap_or(f64::NAN),
        });
        if converged {
            return Ok(WindowReport {
                t_star: cfg.window_t,
                attempts,
            });
        }
        cfg.window_t *= 0.5;
    }
    Ok(WindowReport { t_star: 0.0, attempts })
}

/// Cover `[t0, t_end]` with successive Picard windows of length
/// `window_T`, the last one shortened to land on `t_end`.
///
/// A window that does not converge is halved, up to 20 times; if none
/// converges the march stops and records blow-up at the window start.
/// Nodes are stored every `snapshot_every` nodes counted across windows,
/// and the final state is always stored.
pub fn picard_march(u0: &SpectralVectorField, config: &SolverConfig, t_end: f64) -> Result<Trajectory> {
    config.validate()?;
    require_solver_input(u0)?;
    if !(t_end > config.t0) {
        return Err(Error::InvalidArgument(format!(
            "t_end = {t_end} must exceed t0 = {}",
            config.t0
        )));
    }
    let eps = 1e-12 * (t_end - config.t0);
    let mut traj = Trajectory::new();
    let mut u = clean(u0.clone());
    let mut t = config.t0;
    traj.push(t, u.clone(), config)?;
    let mut counter = 0usize;
    while t_end - t > eps {
        let mut cfg = config.clone();
        cfg.t0 = t;
        cfg.window_t = config.window_t.min(t_end - t);
        let mut solved = None;
        for _ in 0..=MAX_HALVINGS {
            match picard_solve(&u, &cfg) {
                Ok(sol) => {
                    solved = Some(sol.trajectory);
                    break;
                }
                Err(Error::NotContracting { .. }) | Err(Error::MaxIters { .. }) => cfg.window_t *= 0.5,
                Err(e) => return Err(e),
            }
        }
        let Some(window) = solved else {
            traj.blow_up = Some(t);
            break;
        };
        let last = window.len() - 1;
        let nodes = window.times.into_iter().zip(window.fields).zip(window.diagnostics);
        for (j, ((tj, uj), dj)) in nodes.enumerate().skip(1) {
            counter += 1;
            let blown = !(dj.norm_x_half <= BLOW_UP_THRESHOLD);
            if j == last {
                u = uj.clone();
                t = tj;
            }
            let finished = j == last && t_end - tj <= eps;
            if counter.is_multiple_of(config.snapshot_every) || finished || blown {
                traj.times.push(tj);
                traj.fields.push(uj);
                traj.diagnostics.push(dj);
            }
            if blown {
                traj.blow_up = Some(tj);
                return Ok(traj);
            }
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{normalize_x_half, random_divfree_field};
    use crate::grid::TorusGrid;

    fn taylor_green(g: &TorusGrid) -> SpectralVectorField {
        let mut u = SpectralVectorField::from_fn(g, |x| [x[0].sin() * x[1].cos(), -x[0].cos() * x[1].sin(), 0.0]);
        u.mark_divergence_free(1e-12);
        clean(u)
    }

    #[test]
    fn picard_march_covers_the_interval() {
        let g = TorusGrid::standard(2, 16).unwrap();
        let u = taylor_green(&g);
        let cfg = SolverConfig { window_t: 0.1, n_nodes: 11, snapshot_every: 5, ..Default::default() };
        let traj = picard_march(&u, &cfg, 0.25).unwrap();
        assert!(traj.blow_up.is_none());
        let (t, last) = traj.last().unwrap();
        assert!((t - 0.25).abs() < 1e-12);
        let expected = u.scaled((-2.0 * t).exp());
        assert!(last.sub(&expected).max_abs() <= 1e-12);
        for w in traj.times.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn euler_step_on_taylor_green_is_heat_decay() {
        let g = TorusGrid::standard(2, 16).unwrap();
        let u = taylor_green(&g);
        let cfg = SolverConfig { dt: 0.01, nu: 0.5, ..Default::default() };
        let next = exp_euler_step(&u, 0.0, &cfg).unwrap();
        let expected = u.scaled((-2.0 * 0.5 * 0.01f64).exp());
        assert!(next.sub(&expected).max_abs() <= 1e-12 * u.max_abs());
    }

    #[test]
    fn rest_state_stays_at_rest() {
        let g = TorusGrid::standard(3, 8).unwrap();
        let z = SpectralVectorField::zeros(&g);
        let cfg = SolverConfig { dt: 0.05, ..Default::default() };
        assert_eq!(exp_euler_step(&z, 0.0, &cfg).unwrap().max_abs(), 0.0);
        let traj = march(&z, &cfg, 0.2).unwrap();
        assert!(traj.fields.iter().all(|u| u.max_abs() == 0.0));
        assert_eq!(traj.times.len(), 5);

        let sol = picard_solve(&z, &SolverConfig { window_t: 0.1, n_nodes: 11, ..Default::default() }).unwrap();
        assert_eq!(sol.iterations, 1);
        assert!(sol.trajectory.fields.iter().all(|u| u.max_abs() == 0.0));
    }

    #[test]
    fn single_mode_decays() {
        let g = TorusGrid::standard(3, 8).unwrap();
        // (sin 2y, 0, 0): self-advection vanishes, so the step is pure decay
        let mut u = SpectralVectorField::from_fn(&g, |x| [(2.0 * x[1]).sin(), 0.0, 0.0]);
        u.mark_divergence_free(1e-12);
        let u = clean(u);
        let cfg = SolverConfig { dt: 0.1, nu: 1.0, ..Default::default() };
        let next = exp_euler_step(&u, 0.0, &cfg).unwrap();
        assert!(next.sub(&u.scaled((-0.4f64).exp())).max_abs() < 1e-14);
    }

    #[test]
    fn picard_on_taylor_green() {
        let g = TorusGrid::standard(2, 16).unwrap();
        let u = taylor_green(&g);
        let cfg = SolverConfig { window_t: 0.2, n_nodes: 21, ..Default::default() };
        let sol = picard_solve(&u, &cfg).unwrap();
        assert!(sol.iterations <= 2);
        let (t, last) = sol.trajectory.last().unwrap();
        let expected = u.scaled((-2.0 * t).exp());
        assert!(last.sub(&expected).max_abs() <= 1e-12);
    }

    #[test]
    fn picard_contracts_for_small_data() {
        let g = TorusGrid::standard(3, 8).unwrap();
        let u = random_divfree_field(&g, 4, 2.0, 1.0).unwrap();
        let u = normalize_x_half(&u, 2.0, 0.1).unwrap();
        let cfg = SolverConfig { window_t: 0.1, n_nodes: 21, ..Default::default() };
        let sol = picard_solve(&u, &cfg).unwrap();
        for w in sol.residual_history.windows(2) {
            assert!(w[1] < w[0]);
        }
        for field in &sol.trajectory.fields {
            assert!(field.divergence_residual() <= 1e-10);
            assert_eq!(field.mean_magnitude(), 0.0);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = TorusGrid::standard(2, 8).unwrap();
        let grad = SpectralVectorField::from_fn(&g, |x| [x[0].sin(), 0.0, 0.0]);
        assert!(march(&grad, &SolverConfig::default(), 1.0).is_err());
        let z = SpectralVectorField::zeros(&g);
        assert!(march(&z, &SolverConfig { dt: 0.0, ..Default::default() }, 1.0).is_err());
        assert!(march(&z, &SolverConfig::default(), 0.0).is_err());
        assert!(picard_solve(&z, &SolverConfig { n_nodes: 2, ..Default::default() }).is_err());
    }

    #[test]
    fn adaptive_window_accepts_rest_state() {
        let g = TorusGrid::standard(3, 8).unwrap();
        let z = SpectralVectorField::zeros(&g);
        let cfg = SolverConfig { window_t: 0.5, n_nodes: 11, ..Default::default() };
        let report = adaptive_window(&z, &cfg).unwrap();
        assert_eq!(report.t_star, 0.5);
        assert_eq!(report.attempts.len(), 1);
    }

    #[test]
    fn march_flags_blow_up() {
        let g = TorusGrid::standard(2, 8).unwrap();
        let u = random_divfree_field(&g, 1, 1.0, 1e9).unwrap();
        let traj = march(&u, &SolverConfig { dt: 0.01, ..Default::default() }, 0.1).unwrap();
        assert!(traj.blow_up.is_some());
    }
}
