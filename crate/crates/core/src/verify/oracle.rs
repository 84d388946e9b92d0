//! Two-dimensional Taylor–Green vortex, an exact solution whose convective
//! term is a pure gradient.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::TorusGrid;
use crate::operators;
use crate::solver::Trajectory;

/// `u = e^{-2νκ²t}(sin κx cos κy, -cos κx sin κy)` with `κ = 2π/period`,
/// built directly from its four Fourier modes.
pub fn taylor_green(grid: &TorusGrid, nu: f64, t: f64) -> Result<SpectralVectorField> {
    if grid.dim() != 2 {
        return Err(Error::InvalidArgument(format!(
            "Taylor-Green oracle is two-dimensional, grid has dim {}",
            grid.dim()
        )));
    }
    let kappa = 2.0 * std::f64::consts::PI / grid.period();
    let amp = (-2.0 * nu * kappa * kappa * t).exp();
    let mut coeffs = vec![vec![Complex64::default(); grid.len()]; 2];
    for a in [-1i64, 1] {
        for b in [-1i64, 1] {
            let flat = grid.index_of([a, b, 0]).expect("unit modes are on every grid");
            coeffs[0][flat] = Complex64::new(0.0, -0.25 * a as f64 * amp);
            coeffs[1][flat] = Complex64::new(0.0, 0.25 * b as f64 * amp);
        }
    }
    let mut u = SpectralVectorField::new(grid.clone(), coeffs)?;
    u.mark_divergence_free(0.0);
    Ok(u)
}

/// Relative L₂ error of each snapshot against the oracle at its time.
pub fn compare_oracle(traj: &Trajectory, nu: f64) -> Result<Vec<(f64, f64)>> {
    traj.times
        .iter()
        .zip(&traj.fields)
        .map(|(&t, u)| {
            let exact = taylor_green(u.grid(), nu, t)?;
            let err = (u.sub(&exact).parseval_l2_squared() / exact.parseval_l2_squared()).sqrt();
            Ok((t, err))
        })
        .collect()
}

/// `max|∂u/∂t - νΔu + P(u·∇)u| / max|u|` for the oracle at time `t`.
pub fn taylor_green_residual(grid: &TorusGrid, nu: f64, t: f64) -> Result<f64> {
    let u = taylor_green(grid, nu, t)?;
    let kappa = 2.0 * std::f64::consts::PI / grid.period();
    let mut r = u.scaled(-2.0 * nu * kappa * kappa);
    r.add_scaled(-nu, &operators::laplacian(&u));
    r.add_scaled(-1.0, &operators::nonlinear_f(&u)?);
    Ok(r.max_abs() / u.max_abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn initial_state_matches_formula() {
        let g = TorusGrid::standard(2, 16).unwrap();
        let u = taylor_green(&g, 1.0, 0.0).unwrap();
        let sampled = SpectralVectorField::from_fn(&g, |x| [x[0].sin() * x[1].cos(), -x[0].cos() * x[1].sin(), 0.0]);
        assert!(u.sub(&sampled).max_abs() < 1e-15);
        let norm = operators::lp_norm(&u, 2.0).unwrap();
        assert!((norm - PI * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(u.divergence_residual(), 0.0);
    }

    #[test]
    fn later_times_stay_divergence_free_and_solve_the_equation() {
        let g = TorusGrid::standard(2, 32).unwrap();
        for t in [0.0, 0.3, 1.0, 2.5] {
            assert_eq!(taylor_green(&g, 0.7, t).unwrap().divergence_residual(), 0.0);
            assert!(taylor_green_residual(&g, 0.7, t).unwrap() <= 1e-10);
        }
        let stretched = TorusGrid::new(2, 16, 1.0).unwrap();
        assert!(taylor_green_residual(&stretched, 0.01, 0.5).unwrap() <= 1e-10);
    }

    #[test]
    fn rejects_3d() {
        assert!(taylor_green(&TorusGrid::standard(3, 8).unwrap(), 1.0, 0.0).is_err());
    }
}
