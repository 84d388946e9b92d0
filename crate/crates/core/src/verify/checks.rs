use num_complex::Complex64;

use super::CheckReport;
use crate::error::Result;
use crate::field::SpectralVectorField;
use crate::generate::random_scalar_field;
use crate::grid::TorusGrid;
use crate::operators::{self, FracNormParams, GradientVariant};
use crate::spectral;
use crate::transform::inverse_transform;

fn rel_diff(a: &SpectralVectorField, b: &SpectralVectorField) -> f64 {
    let scale = a.max_abs().max(b.max_abs());
    if scale == 0.0 {
        0.0
    } else {
        a.max_abs_diff(b) / scale
    }
}

/// A generic (not divergence-free) field: `u + ∇h` with `h` drawn from the
/// scalar ensemble.
pub fn with_gradient_part(u: &SpectralVectorField, seed: u64, decay: f64) -> Result<SpectralVectorField> {
    let h = random_scalar_field(u.grid(), seed, decay, 1.0)?;
    Ok(u.add(&operators::gradient_of_scalar(u.grid(), &h)))
}

/// Projection, resolvent and semigroup identities over an ensemble:
/// `P² = P`, `div P = 0`, `P∇ = 0`, `(λ-Δ)R(λ) = I` and
/// `e^{sνΔ}e^{tνΔ} = e^{(s+t)νΔ}`, each as a max relative error.
pub fn check_operator_identities(ensemble: &[SpectralVectorField], lambdas: &[f64], times: &[f64], nu: f64, decay: f64, tol: f64) -> Result<CheckReport> {
    let mut idempotence = 0.0f64;
    let mut div_after_projection = 0.0f64;
    let mut gradient_leak = 0.0f64;
    let mut resolvent_identity = 0.0f64;
    let mut semigroup_law = 0.0f64;
    for (i, u) in ensemble.iter().enumerate() {
        let h = random_scalar_field(u.grid(), 1_000_003 + i as u64, decay, 1.0)?;
        let grad = operators::gradient_of_scalar(u.grid(), &h);
        let w = u.add(&grad);
        let pw = operators::leray_project(&w);
        idempotence = idempotence.max(rel_diff(&operators::leray_project(&pw), &pw));
        div_after_projection = div_after_projection.max(pw.divergence_residual());

        gradient_leak = gradient_leak.max(operators::leray_project(&grad).max_abs() / grad.max_abs());

        for &lambda in lambdas {
            let r = operators::resolvent(lambda, &w)?;
            resolvent_identity = resolvent_identity.max(rel_diff(&operators::shifted_operator(lambda, &r), &w));
        }
        let scale = u.max_abs();
        for &t in times {
            let et = operators::heat_semigroup(t, nu, u)?;
            for &s in times {
                let two = operators::heat_semigroup(s, nu, &et)?;
                let one = operators::heat_semigroup(s + t, nu, u)?;
                semigroup_law = semigroup_law.max(one.max_abs_diff(&two) / scale);
            }
        }
    }
    let worst = idempotence
        .max(div_after_projection)
        .max(gradient_leak)
        .max(resolvent_identity)
        .max(semigroup_law);
    Ok(CheckReport::asserted("operator_identities", worst <= tol)
        .with("ensemble_size", ensemble.len())
        .with("tolerance", tol)
        .with("projection_idempotence", idempotence)
        .with("divergence_after_projection", div_after_projection)
        .with("projection_of_gradient", gradient_leak)
        .with("resolvent_identity", resolvent_identity)
        .with("semigroup_law", semigroup_law))
}

/// Divergence-free in ⇔ divergence-free out for `R(λ)` and `λI - Δ`.
///
/// Forward direction: `div R(λ)u` for divergence-free `u`. Reverse: the
/// preimage `(λI - Δ)v` of a divergence-free image `v`. A gradient field is
/// also pushed through to record that the complementary subspace is
/// preserved (its image stays a nonzero-divergence gradient).
pub fn check_resolvent_divfree(lambdas: &[f64], ensemble: &[SpectralVectorField], tol: f64) -> Result<CheckReport> {
    let mut forward = 0.0f64;
    let mut reverse = 0.0f64;
    for u in ensemble {
        for &lambda in lambdas {
            forward = forward.max(operators::resolvent(lambda, u)?.divergence_residual());
            reverse = reverse.max(operators::shifted_operator(lambda, u).divergence_residual());
        }
    }
    let mut complement = f64::INFINITY;
    let mut gradient_divergence = 0.0f64;
    if let Some(first) = ensemble.first() {
        let grad = SpectralVectorField::from_fn(first.grid(), |x| [-x[0].sin(), 0.0, 0.0]);
        for &lambda in lambdas {
            let r = operators::resolvent(lambda, &grad)?;
            complement = complement.min(r.divergence_residual());
            gradient_divergence = gradient_divergence.max(operators::leray_project(&r).max_abs() / r.max_abs());
        }
    }
    let worst = forward.max(reverse);
    Ok(CheckReport::asserted("resolvent_divergence_free", worst <= tol)
        .with("ensemble_size", ensemble.len())
        .with("lambdas", lambdas)
        .with("tolerance", tol)
        .with("max_div_resolvent_image", forward)
        .with("max_div_preimage", reverse)
        .with("gradient_image_min_divergence", complement)
        .with("gradient_image_solenoidal_part", gradient_divergence))
}

/// Heat semigroup: identity at `t = 0`, `L_p` contraction for
/// `p ∈ {2, 4}`, and invariance of the divergence-free subspace.
pub fn check_semigroup(ensemble: &[SpectralVectorField], times: &[f64], nu: f64, tol: f64) -> Result<CheckReport> {
    let mut identity_defect = 0.0f64;
    let mut divergence = 0.0f64;
    let mut violations = 0usize;
    let mut worst_ratio = 0.0f64;
    let mut comparisons = 0usize;
    for u in ensemble {
        let zero = operators::heat_semigroup(0.0, nu, &operators::heat_semigroup(0.0, nu, u)?)?;
        identity_defect = identity_defect.max(rel_diff(&zero, u));
        let norms: Vec<f64> = [2.0, 4.0].iter().map(|&p| operators::lp_norm(u, p)).collect::<Result<_>>()?;
        for &t in times {
            let e = operators::heat_semigroup(t, nu, u)?;
            divergence = divergence.max(e.divergence_residual());
            for (&p, &before) in [2.0, 4.0].iter().zip(&norms) {
                let after = operators::lp_norm(&e, p)?;
                comparisons += 1;
                worst_ratio = worst_ratio.max(after / before);
                if after > before * (1.0 + 1e-12) {
                    violations += 1;
                }
            }
        }
    }
    let passed = identity_defect <= tol && divergence <= tol && violations == 0;
    Ok(CheckReport::asserted("heat_semigroup", passed)
        .with("ensemble_size", ensemble.len())
        .with("times", times)
        .with("tolerance", tol)
        .with("identity_at_zero", identity_defect)
        .with("max_divergence", divergence)
        .with("contraction_comparisons", comparisons)
        .with("contraction_violations", violations)
        .with("max_norm_ratio", worst_ratio))
}

/// `‖∇u‖_{L₂} = ‖(-Δ)^{1/2}u‖_{L₂}` with the full Jacobian (asserted), plus
/// the `p > 2` ratios and the diagonal-only variant (measured).
pub fn check_gradient_identity(ensemble: &[SpectralVectorField], tol: f64) -> Result<(CheckReport, CheckReport)> {
    let half2 = FracNormParams::new(0.5, 2.0)?;
    let mut worst = 0.0f64;
    for u in ensemble {
        let a = operators::gradient_norm(u, 2.0, GradientVariant::Full)?;
        let b = operators::frac_norm(u, half2)?;
        worst = worst.max((a - b).abs() / b);
    }
    let asserted = CheckReport::asserted("gradient_norm_identity_p2", worst <= tol)
        .with("ensemble_size", ensemble.len())
        .with("tolerance", tol)
        .with("max_relative_difference", worst);

    let mut measured = CheckReport::measurement("gradient_norm_ratios");
    let sample = &ensemble[..ensemble.len().min(10)];
    for p in [3.0, 4.0] {
        let params = FracNormParams::new(0.5, p)?;
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for u in sample {
            let r = operators::gradient_norm(u, p, GradientVariant::Full)? / operators::frac_norm(u, params)?;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        measured.record(&format!("full_over_frac_p{p}"), [lo, hi]);
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for u in sample {
        let r = operators::gradient_norm(u, 2.0, GradientVariant::Diagonal)? / operators::frac_norm(u, half2)?;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    measured.record("diagonal_over_frac_p2", [lo, hi]);
    Ok((asserted, measured))
}

/// Truncation and dealiasing keep divergence-free fields divergence-free
/// for every cutoff.
pub fn check_truncation_divergence(ensemble: &[SpectralVectorField], tol: f64) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for u in ensemble {
        let half = u.grid().n_modes() / 2;
        for m in 0..=half {
            worst = worst.max(spectral::truncate(u, m)?.divergence_residual());
        }
        worst = worst.max(spectral::dealias(u).divergence_residual());
    }
    Ok(CheckReport::asserted("truncation_preserves_divergence_free", worst <= tol)
        .with("ensemble_size", ensemble.len())
        .with("max_divergence", worst))
}

/// `⟨(u·∇)u, u⟩_{L₂} = 0` for divergence-free `u`, relative to `‖u‖³`.
pub fn check_energy_orthogonality(ensemble: &[SpectralVectorField], tol: f64) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for u in ensemble {
        let w = operators::advect(u, u)?;
        let norm = operators::lp_norm(u, 2.0)?;
        if norm > 0.0 {
            worst = worst.max(w.inner_product(u).abs() / norm.powi(3));
        }
    }
    Ok(CheckReport::asserted("convective_energy_orthogonality", worst <= tol)
        .with("ensemble_size", ensemble.len())
        .with("tolerance", tol)
        .with("max_relative_inner_product", worst))
}

/// Largest normalized `|⟨w, ∇h⟩_{L₂}| / (‖w‖ ‖∇h‖)` over `n_test` random
/// scalar fields `h`, plus the potential of the gradient part of `w` (the
/// maximizer, scoring `‖w - Pw‖/‖w‖`). Zero for the zero field.
pub fn check_gradient_orthogonality(w: &SpectralVectorField, n_test: usize, seed: u64, decay: f64) -> Result<f64> {
    let grads = random_gradients(w.grid(), n_test, seed, decay)?;
    Ok(gradient_score(w, &grads))
}

fn random_gradients(grid: &TorusGrid, n_test: usize, seed: u64, decay: f64) -> Result<Vec<SpectralVectorField>> {
    (0..n_test)
        .map(|i| {
            let h = random_scalar_field(grid, seed.wrapping_add(i as u64), decay, 1.0)?;
            Ok(operators::gradient_of_scalar(grid, &h))
        })
        .collect()
}

fn gradient_score(w: &SpectralVectorField, grads: &[SpectralVectorField]) -> f64 {
    let wn = w.parseval_l2_squared().sqrt();
    if wn == 0.0 {
        return 0.0;
    }
    let gradient_part = w.sub(&operators::leray_project(w));
    // ⟨w, w - Pw⟩ = ‖w - Pw‖², so the cosine is the norm ratio; this form
    // stays accurate when the gradient part is roundoff.
    let mut worst = gradient_part.parseval_l2_squared().sqrt() / wn;
    for grad in grads {
        let gn = grad.parseval_l2_squared().sqrt();
        if gn > 0.0 {
            worst = worst.max(w.inner_product(grad).abs() / (wn * gn));
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagonalDependence {
    pub is_diagonal: bool,
    pub max_offdiag: f64,
}

/// Whether `∂u_i/∂x_j = 0` for all `i ≠ j`, within `1e-10 · max|u|`.
pub fn check_diagonal_dependence(u: &SpectralVectorField) -> DiagonalDependence {
    let jac = operators::jacobian(u);
    let mut max_offdiag = 0.0f64;
    for (i, row) in jac.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if i != j {
                max_offdiag = entry.iter().fold(max_offdiag, |m, v| m.max(v.abs()));
            }
        }
    }
    let scale = inverse_transform(u).max_abs();
    DiagonalDependence {
        is_diagonal: max_offdiag <= 1e-10 * scale,
        max_offdiag,
    }
}

/// Field with `u_i = g_i(x_i)` built from random one-dimensional profiles.
pub fn random_diagonal_field(grid: &TorusGrid, seed: u64, decay: f64) -> Result<SpectralVectorField> {
    let h = random_scalar_field(grid, seed, decay, 1.0)?;
    let mut coeffs = vec![vec![Complex64::default(); grid.len()]; grid.dim()];
    for (i, c) in coeffs.iter_mut().enumerate() {
        for flat in 0..grid.len() {
            let m = grid.mode(flat);
            let on_axis = (0..grid.dim()).all(|a| a == i || m[a] == 0);
            if on_axis {
                c[flat] = h[flat];
            }
        }
    }
    SpectralVectorField::new(grid.clone(), coeffs)
}

/// Survey of the diagonal-dependence class inside the divergence-free
/// subspace: no nonzero random divergence-free field may pass, and the
/// Leray projection of mean-zero diagonal-dependent fields must vanish.
pub fn check_diagonal_class(ensemble: &[SpectralVectorField], decay: f64) -> Result<CheckReport> {
    let nonzero_passing = ensemble
        .iter()
        .filter(|u| u.max_abs() > 0.0 && check_diagonal_dependence(u).is_diagonal)
        .count();
    let mut projected = 0.0f64;
    let mut diag_ok = true;
    if let Some(first) = ensemble.first() {
        for seed in 0..10 {
            let d = random_diagonal_field(first.grid(), 3_000_017 + seed, decay)?;
            diag_ok &= check_diagonal_dependence(&d).is_diagonal;
            projected = projected.max(operators::leray_project(&d).max_abs() / d.max_abs());
        }
        let constant = SpectralVectorField::from_fn(first.grid(), |_| [1.0, 2.0, 3.0]);
        diag_ok &= check_diagonal_dependence(&constant).is_diagonal;
    }
    let passed = nonzero_passing == 0 && diag_ok && projected <= 1e-12;
    Ok(CheckReport::asserted("diagonal_dependence_class", passed)
        .with("ensemble_size", ensemble.len())
        .with("nonzero_divergence_free_passing", nonzero_passing)
        .with("diagonal_fields_detected", diag_ok)
        .with("max_projection_of_diagonal_field", projected))
}

/// Gradient-orthogonality probe: projected fields sit in the solenoidal
/// subspace, gradients in its complement, and generic `(u·∇)v` is measured.
pub fn check_advection_orthogonality(ensemble: &[SpectralVectorField], n_test: usize, decay: f64) -> Result<(CheckReport, CheckReport)> {
    let grid = ensemble[0].grid();
    let grads = random_gradients(grid, n_test, 4_000_037, decay)?;
    let mut projected = 0.0f64;
    let mut advected = Vec::new();
    for pair in ensemble.chunks_exact(2) {
        let w = operators::advect(&pair[0], &pair[1])?;
        projected = projected.max(gradient_score(&operators::leray_project(&w), &grads));
        advected.push(gradient_score(&w, &grads));
    }
    let grad = SpectralVectorField::from_fn(grid, |x| [-x[0].sin(), 0.0, 0.0]);
    let grad_score = gradient_score(&grad, &grads);
    let asserted = CheckReport::asserted("gradient_orthogonality", projected <= 1e-12 && (grad_score - 1.0).abs() <= 1e-12)
        .with("max_projected", projected)
        .with("gradient_field_score", grad_score)
        .with("n_test", n_test);
    let min = advected.iter().copied().fold(f64::INFINITY, f64::min);
    let max = advected.iter().copied().fold(0.0, f64::max);
    let measured = CheckReport::measurement("advection_gradient_orthogonality")
        .with("pairs", advected.len())
        .with("min_score", min)
        .with("max_score", max)
        .with("pairs_above_1e-10", advected.iter().filter(|&&s| s > 1e-10).count());
    Ok((asserted, measured))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_divfree_field;
    use crate::grid::TorusGrid;

    fn ensemble(g: &TorusGrid, n: u64) -> Vec<SpectralVectorField> {
        (0..n).map(|s| random_divfree_field(g, s, 2.0, 1.0).unwrap()).collect()
    }

    #[test]
    fn single_mode_resolvent_is_exact() {
        let g = TorusGrid::standard(3, 8).unwrap();
        let mut u = SpectralVectorField::from_fn(&g, |x| [x[1].sin(), 0.0, 0.0]);
        u.mark_divergence_free(1e-12);
        let r = check_resolvent_divfree(&[1.0], &[u], 1e-12).unwrap();
        assert!(r.passed);
        assert_eq!(r.measurements["max_div_resolvent_image"], 0.0);
        // the gradient's image keeps its divergence and has no solenoidal part
        assert!(r.measurements["gradient_image_min_divergence"].as_f64().unwrap() > 0.1);
        assert!(r.measurements["gradient_image_solenoidal_part"].as_f64().unwrap() < 1e-15);
    }

    #[test]
    fn semigroup_checks_pass_and_single_mode_decays() {
        let g = TorusGrid::standard(3, 8).unwrap();
        let r = check_semigroup(&ensemble(&g, 4), &[0.0, 0.01, 0.1], 1.0, 1e-12).unwrap();
        assert!(r.passed, "{:?}", r.measurements);

        let u = SpectralVectorField::from_fn(&g, |x| [x[1].sin(), 0.0, 0.0]);
        let before = operators::lp_norm(&u, 2.0).unwrap();
        let after = operators::lp_norm(&operators::heat_semigroup(0.1, 1.0, &u).unwrap(), 2.0).unwrap();
        assert!(after < before);
    }

    #[test]
    fn gradient_orthogonality_cases() {
        let g = TorusGrid::standard(3, 8).unwrap();
        let any = random_divfree_field(&g, 1, 2.0, 1.0).unwrap();
        let generic = with_gradient_part(&any, 5, 2.0).unwrap();
        assert!(check_gradient_orthogonality(&operators::leray_project(&generic), 20, 0, 2.0).unwrap() <= 1e-12);

        let grad = SpectralVectorField::from_fn(&g, |x| [-x[0].sin(), 0.0, 0.0]);
        let score = check_gradient_orthogonality(&grad, 20, 0, 2.0).unwrap();
        assert!((score - 1.0).abs() < 1e-12);
        assert_eq!(check_gradient_orthogonality(&SpectralVectorField::zeros(&g), 5, 0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_dependence_cases() {
        let g = TorusGrid::standard(3, 8).unwrap();
        let c = SpectralVectorField::from_fn(&g, |_| [1.0, -1.0, 0.5]);
        let d = check_diagonal_dependence(&c);
        assert!(d.is_diagonal);
        assert_eq!(d.max_offdiag, 0.0);
        let s = SpectralVectorField::from_fn(&g, |x| [x[1].sin(), 0.0, 0.0]);
        assert!(!check_diagonal_dependence(&s).is_diagonal);
        let r = check_diagonal_class(&ensemble(&g, 10), 2.0).unwrap();
        assert!(r.passed, "{:?}", r.measurements);
    }

    #[test]
    fn identities_fail_under_impossible_tolerance() {
        let g = TorusGrid::standard(3, 8).unwrap();
        let e = ensemble(&g, 3);
        assert!(check_operator_identities(&e, &[1.0, 10.0], &[0.1, 0.3], 1.0, 2.0, 1e-12).unwrap().passed);
        assert!(!check_operator_identities(&e, &[1.0, 10.0], &[0.1, 0.3], 1.0, 2.0, 1e-20).unwrap().passed);
    }
}
