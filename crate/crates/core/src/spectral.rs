//! Mode filters: two-thirds dealiasing and cube truncation.

use crate::error::{Error, Result};
use crate::field::SpectralVectorField;

/// Zero every mode with some `|k_i| > m`. Keeps the divergence-free flag
/// since divergence acts modewise.
fn cube_filter(u: &SpectralVectorField, m: i64) -> SpectralVectorField {
    let grid = u.grid().clone();
    let flag = u.is_flagged_divergence_free();
    let mut out = u.clone();
    for c in out.components_mut() {
        for (flat, v) in c.iter_mut().enumerate() {
            if grid.mode(flat).iter().any(|&k| k.abs() > m) {
                *v = Default::default();
            }
        }
    }
    out.set_divergence_free(flag);
    out
}

/// Two-thirds rule: zero modes with any `|k_i| > floor(n/3)`.
pub fn dealias(u: &SpectralVectorField) -> SpectralVectorField {
    cube_filter(u, u.grid().dealias_cutoff())
}

/// Keep only modes with every `|k_i| <= m`, for `m <= n/2`.
pub fn truncate(u: &SpectralVectorField, m: usize) -> Result<SpectralVectorField> {
    let half = u.grid().n_modes() / 2;
    if m > half {
        return Err(Error::InvalidArgument(format!(
            "truncation order {m} exceeds n_modes/2 = {half}"
        )));
    }
    Ok(cube_filter(u, m as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TorusGrid;
    use num_complex::Complex64;

    fn single_mode(g: &TorusGrid, mode: [i64; 3]) -> SpectralVectorField {
        let mut u = SpectralVectorField::zeros(g);
        let flat = g.index_of(mode).unwrap();
        u.components_mut()[1][flat] = Complex64::new(1.0, 0.0);
        u
    }

    #[test]
    fn two_thirds_cutoff() {
        let g = TorusGrid::standard(3, 16).unwrap();
        let hi = dealias(&single_mode(&g, [6, 0, 0]));
        assert_eq!(hi.max_abs(), 0.0);
        let lo = dealias(&single_mode(&g, [5, 0, 0]));
        assert_eq!(lo.max_abs(), 1.0);
        let neg = dealias(&single_mode(&g, [-6, 0, 0]));
        assert_eq!(neg.max_abs(), 0.0);
    }

    #[test]
    fn dealias_idempotent() {
        let g = TorusGrid::standard(2, 16).unwrap();
        let u = SpectralVectorField::from_fn(&g, |x| [(7.0 * x[0]).sin() + x[1].cos(), (3.0 * x[1]).sin(), 0.0]);
        let once = dealias(&u);
        assert_eq!(dealias(&once), once);
    }

    #[test]
    fn truncate_bounds() {
        let g = TorusGrid::standard(2, 8).unwrap();
        let u = SpectralVectorField::from_fn(&g, |x| [1.0 + x[0].sin(), (2.0 * x[1]).cos(), 0.0]);
        assert_eq!(truncate(&u, 4).unwrap(), u);
        let mean_only = truncate(&u, 0).unwrap();
        let nonzero: Vec<_> = (0..g.len())
            .filter(|&f| mean_only.components().iter().any(|c| c[f].norm() > 0.0))
            .collect();
        assert_eq!(nonzero, vec![0]);
        assert!(truncate(&u, 5).is_err());
    }
}
