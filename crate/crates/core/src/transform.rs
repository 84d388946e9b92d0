//! Multi-dimensional FFTs on the torus.
//!
//! Coefficients are normalized so that `u(x) = Σ_k û(k) e^{i k·x}`; the
//! constant-mode coefficient is the spatial mean.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::field::{PhysicalVectorField, SpectralVectorField};
use crate::grid::TorusGrid;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_nd(data: &mut [Complex64], dim: usize, n: usize, direction: FftDirection) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction));
    let total = data.len();
    let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
    let mut lines = vec![Complex64::default(); total];
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        if stride == 1 {
            plan.process_with_scratch(data, &mut scratch);
            continue;
        }
        let block = stride * n;
        for outer in 0..total / block {
            for inner in 0..stride {
                let line = &mut lines[(outer * stride + inner) * n..][..n];
                let base = outer * block + inner;
                for (i, v) in line.iter_mut().enumerate() {
                    *v = data[base + i * stride];
                }
            }
        }
        plan.process_with_scratch(&mut lines, &mut scratch);
        for outer in 0..total / block {
            for inner in 0..stride {
                let line = &lines[(outer * stride + inner) * n..][..n];
                let base = outer * block + inner;
                for (i, v) in line.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
            }
        }
    }
}

/// Fourier coefficients of one real scalar array.
pub fn forward_scalar(grid: &TorusGrid, values: &[f64]) -> Vec<Complex64> {
    assert_eq!(values.len(), grid.len(), "scalar array does not match grid");
    let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_nd(&mut data, grid.dim(), grid.n_modes(), FftDirection::Forward);
    let norm = 1.0 / grid.len() as f64;
    for c in &mut data {
        *c *= norm;
    }
    data
}

/// Collocation values of one scalar coefficient array (real part kept).
pub fn inverse_scalar(grid: &TorusGrid, coeffs: &[Complex64]) -> Vec<f64> {
    assert_eq!(coeffs.len(), grid.len(), "coefficient array does not match grid");
    let mut data = coeffs.to_vec();
    fft_nd(&mut data, grid.dim(), grid.n_modes(), FftDirection::Inverse);
    data.into_iter().map(|c| c.re).collect()
}

pub fn forward_transform(u: &PhysicalVectorField) -> SpectralVectorField {
    let grid = u.grid();
    let coeffs = u
        .components()
        .iter()
        .map(|c| forward_scalar(grid, c))
        .collect();
    SpectralVectorField::from_parts(grid.clone(), coeffs, false)
}

pub fn inverse_transform(u: &SpectralVectorField) -> PhysicalVectorField {
    let grid = u.grid();
    let values = u
        .components()
        .iter()
        .map(|c| inverse_scalar(grid, c))
        .collect();
    PhysicalVectorField::from_parts(grid.clone(), values)
}
