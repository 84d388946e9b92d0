//! Uniform periodic grids on the torus `[0, period)^dim`.
//!
//! Spectral arrays are stored in FFT order: along each axis, index `i`
//! carries wavenumber `i` for `i <= n/2` and `i - n` otherwise, so the
//! per-axis lattice is `{-n/2+1, ..., n/2}`. Flat indices are row-major with
//! axis 0 slowest. Physical arrays use the same flat layout over the
//! collocation points `x_a = i * period / n`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Discretization descriptor shared by every field on the same torus.
#[derive(Clone)]
pub struct TorusGrid {
    dim: usize,
    n_modes: usize,
    period: f64,
    tables: Arc<Tables>,
}

struct Tables {
    modes: Vec<[i64; 3]>,
    wavevectors: Vec<[f64; 3]>,
    k_squared: Vec<f64>,
}

impl TorusGrid {
    pub fn new(dim: usize, n_modes: usize, period: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidGrid(format!("dim must be 2 or 3, got {dim}")));
        }
        if !n_modes.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n_modes must be even, got {n_modes}")));
        }
        if n_modes < 8 {
            return Err(Error::InvalidGrid(format!("n_modes must be >= 8, got {n_modes}")));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidGrid(format!("period must be positive, got {period}")));
        }

        let len = n_modes.pow(dim as u32);
        let scale = 2.0 * PI / period;
        let mut modes = Vec::with_capacity(len);
        let mut wavevectors = Vec::with_capacity(len);
        let mut k_squared = Vec::with_capacity(len);
        for flat in 0..len {
            let idx = unflatten(flat, dim, n_modes);
            let mut m = [0i64; 3];
            let mut k = [0.0f64; 3];
            for a in 0..dim {
                m[a] = axis_wavenumber(idx[a], n_modes);
                k[a] = m[a] as f64 * scale;
            }
            modes.push(m);
            wavevectors.push(k);
            k_squared.push(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        }

        Ok(Self {
            dim,
            n_modes,
            period,
            tables: Arc::new(Tables {
                modes,
                wavevectors,
                k_squared,
            }),
        })
    }

    /// Torus of side `2π`.
    pub fn standard(dim: usize, n_modes: usize) -> Result<Self> {
        Self::new(dim, n_modes, 2.0 * PI)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Number of lattice points (= number of modes) per component.
    pub fn len(&self) -> usize {
        self.tables.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.n_modes; self.dim]
    }

    pub fn domain_volume(&self) -> f64 {
        self.period.powi(self.dim as i32)
    }

    pub fn cell_volume(&self) -> f64 {
        self.domain_volume() / self.len() as f64
    }

    /// Largest retained `|k_i|` under the two-thirds rule: the largest `K`
    /// with `3K < n`, so quadratic products alias only onto discarded
    /// modes. Equals `floor(n/3)` unless `n` is a multiple of 3.
    pub fn dealias_cutoff(&self) -> i64 {
        ((self.n_modes - 1) / 3) as i64
    }

    /// Integer lattice coordinates of a flat spectral index; unused axes are 0.
    pub fn mode(&self, flat: usize) -> [i64; 3] {
        self.tables.modes[flat]
    }

    /// Physical wavevector `2π/period * mode`.
    pub fn wavevector(&self, flat: usize) -> [f64; 3] {
        self.tables.wavevectors[flat]
    }

    pub fn k_squared(&self, flat: usize) -> f64 {
        self.tables.k_squared[flat]
    }

    pub fn modes(&self) -> &[[i64; 3]] {
        &self.tables.modes
    }

    pub fn wavevectors(&self) -> &[[f64; 3]] {
        &self.tables.wavevectors
    }

    pub fn k_squared_all(&self) -> &[f64] {
        &self.tables.k_squared
    }

    /// Flat index of the mode `-k` (with wraparound at the Nyquist plane).
    pub fn conjugate_index(&self, flat: usize) -> usize {
        let n = self.n_modes;
        let idx = unflatten(flat, self.dim, n);
        let mut out = 0;
        for &i in idx.iter().take(self.dim) {
            out = out * n + (n - i) % n;
        }
        out
    }

    /// Flat index of an integer lattice mode, if it lies in the lattice.
    pub fn index_of(&self, mode: [i64; 3]) -> Option<usize> {
        let n = self.n_modes as i64;
        let mut out = 0usize;
        for (a, &m) in mode.iter().enumerate() {
            if a >= self.dim {
                if m != 0 {
                    return None;
                }
                continue;
            }
            if m <= -n / 2 || m > n / 2 {
                return None;
            }
            out = out * self.n_modes + m.rem_euclid(n) as usize;
        }
        Some(out)
    }

    /// True when some axis sits on the unpaired wavenumber `n/2`.
    pub fn is_nyquist(&self, flat: usize) -> bool {
        let half = (self.n_modes / 2) as i64;
        self.mode(flat)[..self.dim].contains(&half)
    }

    /// Collocation coordinates of a flat physical index.
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let idx = unflatten(flat, self.dim, self.n_modes);
        let h = self.period / self.n_modes as f64;
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = idx[a] as f64 * h;
        }
        x
    }
}

impl PartialEq for TorusGrid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n_modes == other.n_modes && self.period == other.period
    }
}

impl fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid")
            .field("dim", &self.dim)
            .field("n_modes", &self.n_modes)
            .field("period", &self.period)
            .finish()
    }
}

fn axis_wavenumber(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn unflatten(mut flat: usize, dim: usize, n: usize) -> [usize; 3] {
    let mut idx = [0usize; 3];
    for a in (0..dim).rev() {
        idx[a] = flat % n;
        flat /= n;
    }
    idx
}
