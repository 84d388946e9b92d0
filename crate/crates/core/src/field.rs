//! Vector-field containers in spectral and physical space.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::TorusGrid;
use crate::transform;

/// Velocity field stored as per-component Fourier coefficients.
///
/// The `divergence_free` flag records membership in the solenoidal subspace;
/// it is set by constructions that guarantee `k·û(k) = 0` modewise and
/// dropped by anything that may break it.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralVectorField {
    grid: TorusGrid,
    coeffs: Vec<Vec<Complex64>>,
    divergence_free: bool,
}

/// Collocation values of a vector field on the uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalVectorField {
    grid: TorusGrid,
    values: Vec<Vec<f64>>,
}

impl SpectralVectorField {
    pub fn new(grid: TorusGrid, coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        check_shape(&grid, coeffs.len(), coeffs.iter().map(Vec::len))?;
        Ok(Self::from_parts(grid, coeffs, false))
    }

    pub(crate) fn from_parts(grid: TorusGrid, coeffs: Vec<Vec<Complex64>>, divergence_free: bool) -> Self {
        Self {
            grid,
            coeffs,
            divergence_free,
        }
    }

    pub fn zeros(grid: &TorusGrid) -> Self {
        let coeffs = vec![vec![Complex64::default(); grid.len()]; grid.dim()];
        Self::from_parts(grid.clone(), coeffs, true)
    }

    /// Sample `f` at the collocation points and transform.
    pub fn from_fn(grid: &TorusGrid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        transform::forward_transform(&PhysicalVectorField::from_fn(grid, f))
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    /// Mutable access drops the divergence-free flag.
    pub fn components_mut(&mut self) -> &mut [Vec<Complex64>] {
        self.divergence_free = false;
        &mut self.coeffs
    }

    pub fn into_components(self) -> Vec<Vec<Complex64>> {
        self.coeffs
    }

    pub fn is_flagged_divergence_free(&self) -> bool {
        self.divergence_free
    }

    /// Set the flag after verifying `k·û(k)` modewise within `tol` relative.
    pub fn mark_divergence_free(&mut self, tol: f64) -> bool {
        self.divergence_free = self.divergence_residual() <= tol;
        self.divergence_free
    }

    pub(crate) fn set_divergence_free(&mut self, flag: bool) {
        self.divergence_free = flag;
    }

    /// Largest coefficient magnitude over all components and modes.
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.iter().map(|v| v.norm_sqr()))
            .fold(0.0, f64::max)
            .sqrt()
    }

    /// `max_k |Σ_i k_i û_i(k)| / max_k |û(k)|`, or 0 for the zero field.
    pub fn divergence_residual(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let kv = self.grid.wavevectors();
        let mut worst = 0.0f64;
        for (flat, k) in kv.iter().enumerate() {
            let mut s = Complex64::default();
            for (i, c) in self.coeffs.iter().enumerate() {
                s += c[flat] * k[i];
            }
            worst = worst.max(s.norm_sqr());
        }
        worst.sqrt() / scale
    }

    /// `max_k |û(-k) - conj(û(k))| / max |û|`.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for c in &self.coeffs {
            for flat in 0..self.grid.len() {
                let partner = c[self.grid.conjugate_index(flat)];
                worst = worst.max((partner - c[flat].conj()).norm());
            }
        }
        worst / scale
    }

    /// Largest mean-mode coefficient magnitude over components.
    pub fn mean_magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c[0].norm()).fold(0.0, f64::max)
    }

    /// Mean-zero within `1e-12` of the largest coefficient.
    pub fn is_mean_zero(&self) -> bool {
        self.mean_magnitude() <= 1e-12 * self.max_abs()
    }

    /// Error unless the mean mode is (numerically) zero.
    pub fn require_mean_zero(&self) -> Result<()> {
        if self.is_mean_zero() {
            Ok(())
        } else {
            Err(Error::NonzeroMean(self.mean_magnitude()))
        }
    }

    pub fn require_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid && self.coeffs.len() == other.coeffs.len() {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    pub fn scale(&mut self, a: f64) {
        for c in &mut self.coeffs {
            for v in c.iter_mut() {
                *v *= a;
            }
        }
    }

    /// `self += a * other`. Panics if the grids differ.
    pub fn add_scaled(&mut self, a: f64, other: &Self) {
        assert!(self.grid == other.grid, "add_scaled on mismatched grids");
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            for (v, w) in c.iter_mut().zip(o) {
                *v += a * w;
            }
        }
        self.divergence_free &= other.divergence_free;
    }

    /// `max_k |û(k) - v̂(k)|` without forming the difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.require_same_grid(other).expect("fields on different grids");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()))
            .fold(0.0, f64::max)
            .sqrt()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(-1.0, other);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(1.0, other);
        out
    }

    /// Multiply every mode by the real symbol `m(flat)`.
    pub fn map_modes(&self, m: impl Fn(usize) -> f64) -> Self {
        let mut out = self.clone();
        for flat in 0..self.grid.len() {
            let factor = m(flat);
            for c in &mut out.coeffs {
                c[flat] *= factor;
            }
        }
        out
    }

    /// `Σ_k Σ_i |û_i(k)|² · |Ω|`, the squared L₂ norm by Parseval.
    pub fn parseval_l2_squared(&self) -> f64 {
        let s: f64 = self
            .coeffs
            .iter()
            .flat_map(|c| c.iter().map(|v| v.norm_sqr()))
            .sum();
        s * self.grid.domain_volume()
    }

    /// Real L₂ inner product `∫ u·v` via Parseval.
    pub fn inner_product(&self, other: &Self) -> f64 {
        assert!(self.grid == other.grid, "inner_product on mismatched grids");
        let s: f64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x * y.conj()).re))
            .sum();
        s * self.grid.domain_volume()
    }
}

impl PhysicalVectorField {
    pub fn new(grid: TorusGrid, values: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(&grid, values.len(), values.iter().map(Vec::len))?;
        if values.iter().any(|c| c.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidArgument("physical field has non-finite values".into()));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_parts(grid: TorusGrid, values: Vec<Vec<f64>>) -> Self {
        Self { grid, values }
    }

    pub fn from_fn(grid: &TorusGrid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let dim = grid.dim();
        let mut values = vec![Vec::with_capacity(grid.len()); dim];
        for flat in 0..grid.len() {
            let v = f(grid.point(flat));
            for (i, c) in values.iter_mut().enumerate() {
                c.push(v[i]);
            }
        }
        Self::from_parts(grid.clone(), values)
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn into_components(self) -> Vec<Vec<f64>> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flat_map(|c| c.iter().map(|v| v.abs()))
            .fold(0.0, f64::max)
    }

    /// Componentwise pointwise map.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let values = self
            .values
            .iter()
            .map(|c| c.iter().map(|&v| f(v)).collect())
            .collect();
        Self::from_parts(self.grid.clone(), values)
    }
}

fn check_shape(grid: &TorusGrid, n_comp: usize, lens: impl Iterator<Item = usize>) -> Result<()> {
    if n_comp != grid.dim() {
        return Err(Error::InvalidArgument(format!(
            "expected {} components, got {n_comp}",
            grid.dim()
        )));
    }
    for len in lens {
        if len != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                got: len,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_mismatch_rejected() {
        let g = TorusGrid::standard(2, 8).unwrap();
        let bad = vec![vec![0.0; 63], vec![0.0; 64]];
        assert!(matches!(
            PhysicalVectorField::new(g.clone(), bad),
            Err(Error::ShapeMismatch { expected: 64, got: 63 })
        ));
        assert!(PhysicalVectorField::new(g.clone(), vec![vec![0.0; 64]]).is_err());
        assert!(SpectralVectorField::new(g, vec![vec![Complex64::default(); 64]; 3]).is_err());
    }

    #[test]
    fn parseval_matches_closed_form() {
        // ∫ sin²(x₂) over [0,2π]³ = 4π³
        let g = TorusGrid::standard(3, 8).unwrap();
        let u = SpectralVectorField::from_fn(&g, |x| [x[1].sin(), 0.0, 0.0]);
        let expected = 4.0 * std::f64::consts::PI.powi(3);
        assert!((u.parseval_l2_squared() - expected).abs() < 1e-10 * expected);
    }

    #[test]
    fn real_field_is_hermitian() {
        let g = TorusGrid::standard(2, 8).unwrap();
        let u = SpectralVectorField::from_fn(&g, |x| [(x[0] + 2.0 * x[1]).cos() + x[0].sin(), x[1].cos(), 0.0]);
        assert!(u.hermitian_defect() < 1e-14);
    }
}
