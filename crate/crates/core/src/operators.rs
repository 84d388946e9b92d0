//! Fourier-diagonal operator calculus on the torus.
//!
//! Every linear operator here is a modewise multiplier: the Leray projector
//! `I - kkᵀ/|k|²`, the Laplacian `-|k|²`, the resolvent `1/(λ+|k|²)`, the heat
//! semigroup `e^{-νt|k|²}`, fractional powers `|k|^{2α}` of `-Δ`, and the
//! exponential-integrator weight `φ₁(-νh|k|²)`. The advection term is
//! evaluated pseudospectrally.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{PhysicalVectorField, SpectralVectorField};
use crate::grid::TorusGrid;
use crate::spectral::dealias;
use crate::transform::{forward_scalar, inverse_scalar, inverse_transform};

/// Exponent pair for `‖u‖_{X_α} = ‖(-Δ)^α u‖_{L_p}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FracNormParams {
    alpha: f64,
    p: f64,
}

impl FracNormParams {
    pub fn new(alpha: f64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidArgument(format!("alpha must lie in [0,1], got {alpha}")));
        }
        check_exponent(p)?;
        Ok(Self { alpha, p })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradientVariant {
    /// All `dim²` Jacobian entries.
    Full,
    /// Only `∂u_i/∂x_i`.
    Diagonal,
}

fn check_exponent(p: f64) -> Result<()> {
    if p >= 2.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("Lebesgue exponent must be >= 2, got {p}")))
    }
}

/// Helmholtz-Leray projection onto the divergence-free subspace.
pub fn leray_project(u: &SpectralVectorField) -> SpectralVectorField {
    let grid = u.grid().clone();
    let dim = grid.dim();
    let mut coeffs = u.components().to_vec();
    for flat in 1..grid.len() {
        let k = grid.wavevector(flat);
        let ksq = grid.k_squared(flat);
        let mut kdotu = Complex64::default();
        for i in 0..dim {
            kdotu += coeffs[i][flat] * k[i];
        }
        let s = kdotu / ksq;
        for i in 0..dim {
            coeffs[i][flat] -= s * k[i];
        }
    }
    SpectralVectorField::from_parts(grid, coeffs, true)
}

pub fn laplacian(u: &SpectralVectorField) -> SpectralVectorField {
    let ksq = u.grid().k_squared_all();
    keep_flag(u, u.map_modes(|f| -ksq[f]))
}

/// `R(λ:Δ) = (λI - Δ)^{-1}` for `λ > 0`.
pub fn resolvent(lambda: f64, u: &SpectralVectorField) -> Result<SpectralVectorField> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("resolvent needs lambda > 0, got {lambda}")));
    }
    let ksq = u.grid().k_squared_all();
    Ok(keep_flag(u, u.map_modes(|f| 1.0 / (lambda + ksq[f]))))
}

/// `(λI - Δ)u`.
pub fn shifted_operator(lambda: f64, u: &SpectralVectorField) -> SpectralVectorField {
    let ksq = u.grid().k_squared_all();
    keep_flag(u, u.map_modes(|f| lambda + ksq[f]))
}

/// `e^{tνΔ}u`.
pub fn heat_semigroup(t: f64, nu: f64, u: &SpectralVectorField) -> Result<SpectralVectorField> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("heat semigroup needs t >= 0, got {t}")));
    }
    if !(nu > 0.0) {
        return Err(Error::InvalidArgument(format!("viscosity must be positive, got {nu}")));
    }
    if t == 0.0 {
        return Ok(u.clone());
    }
    let ksq = u.grid().k_squared_all();
    Ok(keep_flag(u, u.map_modes(|f| (-nu * t * ksq[f]).exp())))
}

/// `(-Δ)^α u` on mean-zero fields, `α ∈ [-1, 1]`.
pub fn frac_power(alpha: f64, u: &SpectralVectorField) -> Result<SpectralVectorField> {
    if !(-1.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidArgument(format!("alpha must lie in [-1,1], got {alpha}")));
    }
    u.require_mean_zero()?;
    let ksq = u.grid().k_squared_all();
    Ok(keep_flag(
        u,
        u.map_modes(|f| if f == 0 { 0.0 } else { ksq[f].powf(alpha) }),
    ))
}

/// `φ₁(z) = (e^z - 1)/z` with `φ₁(0) = 1`.
pub fn phi1_scalar(z: f64) -> f64 {
    if z.abs() < 1e-6 {
        phi1_series(z)
    } else {
        z.exp_m1() / z
    }
}

pub(crate) fn phi1_series(z: f64) -> f64 {
    1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0))
}

/// `φ₁(hνΔ)u`, the exponential-Euler weight on the forcing term.
pub fn phi1(h: f64, nu: f64, u: &SpectralVectorField) -> Result<SpectralVectorField> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("phi1 needs h > 0, got {h}")));
    }
    let ksq = u.grid().k_squared_all();
    Ok(keep_flag(u, u.map_modes(|f| phi1_scalar(-nu * h * ksq[f]))))
}

fn keep_flag(src: &SpectralVectorField, mut out: SpectralVectorField) -> SpectralVectorField {
    out.set_divergence_free(src.is_flagged_divergence_free());
    out
}

/// Spectral `∂/∂x_axis`; the unpaired Nyquist wavenumber along `axis` is
/// dropped so real fields stay real.
pub fn partial_derivative(grid: &TorusGrid, coeffs: &[Complex64], axis: usize) -> Vec<Complex64> {
    let half = (grid.n_modes() / 2) as i64;
    coeffs
        .iter()
        .enumerate()
        .map(|(flat, &c)| {
            if grid.mode(flat)[axis] == half {
                Complex64::default()
            } else {
                c * Complex64::new(0.0, grid.wavevector(flat)[axis])
            }
        })
        .collect()
}

/// `∇h` of a scalar coefficient array.
pub fn gradient_of_scalar(grid: &TorusGrid, h: &[Complex64]) -> SpectralVectorField {
    let coeffs = (0..grid.dim()).map(|a| partial_derivative(grid, h, a)).collect();
    SpectralVectorField::from_parts(grid.clone(), coeffs, false)
}

/// Coefficients of `div u`.
pub fn divergence(u: &SpectralVectorField) -> Vec<Complex64> {
    let grid = u.grid();
    let mut out = vec![Complex64::default(); grid.len()];
    for (axis, c) in u.components().iter().enumerate() {
        for (o, d) in out.iter_mut().zip(partial_derivative(grid, c, axis)) {
            *o += d;
        }
    }
    out
}

/// `max_x |div u(x)|` over collocation points.
pub fn max_pointwise_divergence(u: &SpectralVectorField) -> f64 {
    inverse_scalar(u.grid(), &divergence(u))
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
}

/// Physical Jacobian entries, `jac[i][j] = ∂u_i/∂x_j`.
pub fn jacobian(u: &SpectralVectorField) -> Vec<Vec<Vec<f64>>> {
    let grid = u.grid();
    u.components()
        .iter()
        .map(|c| {
            (0..grid.dim())
                .map(|j| inverse_scalar(grid, &partial_derivative(grid, c, j)))
                .collect()
        })
        .collect()
}

/// `(u·∇)v` with two-thirds dealiasing of inputs and output.
pub fn advect(u: &SpectralVectorField, v: &SpectralVectorField) -> Result<SpectralVectorField> {
    advect_with(u, v, true)
}

pub fn advect_with(u: &SpectralVectorField, v: &SpectralVectorField, dealiased: bool) -> Result<SpectralVectorField> {
    u.require_same_grid(v)?;
    let grid = u.grid();
    let (u, v) = if dealiased {
        (dealias(u), dealias(v))
    } else {
        (u.clone(), v.clone())
    };
    let u_phys = inverse_transform(&u);
    let dim = grid.dim();
    let mut out = Vec::with_capacity(dim);
    for vi in v.components() {
        let mut w = vec![0.0; grid.len()];
        for (j, uj) in u_phys.components().iter().enumerate() {
            let dvi = inverse_scalar(grid, &partial_derivative(grid, vi, j));
            for ((w, a), b) in w.iter_mut().zip(uj).zip(&dvi) {
                *w += a * b;
            }
        }
        out.push(forward_scalar(grid, &w));
    }
    let w = SpectralVectorField::from_parts(grid.clone(), out, false);
    Ok(if dealiased { dealias(&w) } else { w })
}

/// `F(u) = -P(u·∇)u`. The mean mode of `(u·∇)u = div(u⊗u)` vanishes
/// analytically and is set to zero.
pub fn nonlinear_f(u: &SpectralVectorField) -> Result<SpectralVectorField> {
    nonlinear_f_with(u, true)
}

pub fn nonlinear_f_with(u: &SpectralVectorField, dealiased: bool) -> Result<SpectralVectorField> {
    let mut w = leray_project(&advect_with(u, u, dealiased)?);
    w.scale(-1.0);
    for c in w.components_mut() {
        c[0] = Complex64::default();
    }
    w.set_divergence_free(true);
    Ok(w)
}

fn lp_sum(values: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        values.iter().map(|v| v * v).sum()
    } else {
        values.iter().map(|v| v.abs().powf(p)).sum()
    }
}

/// `(Σ_i ‖u_i‖_{L^p}^p)^{1/p}` by collocation quadrature.
pub fn lp_norm(u: &SpectralVectorField, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(physical_lp_norm(&inverse_transform(u), p))
}

pub fn physical_lp_norm(u: &PhysicalVectorField, p: f64) -> f64 {
    let s: f64 = u.components().iter().map(|c| lp_sum(c, p)).sum();
    (u.grid().cell_volume() * s).powf(1.0 / p)
}

/// `‖(-Δ)^α u‖_{L_p}`.
pub fn frac_norm(u: &SpectralVectorField, params: FracNormParams) -> Result<f64> {
    if params.alpha == 0.0 {
        return lp_norm(u, params.p);
    }
    lp_norm(&frac_power(params.alpha, u)?, params.p)
}

/// `L_p` norm of the Jacobian (full) or of its diagonal.
pub fn gradient_norm(u: &SpectralVectorField, p: f64, variant: GradientVariant) -> Result<f64> {
    check_exponent(p)?;
    let grid = u.grid();
    let mut s = 0.0;
    for (i, c) in u.components().iter().enumerate() {
        for j in 0..grid.dim() {
            if variant == GradientVariant::Diagonal && i != j {
                continue;
            }
            s += lp_sum(&inverse_scalar(grid, &partial_derivative(grid, c, j)), p);
        }
    }
    Ok((grid.cell_volume() * s).powf(1.0 / p))
}
