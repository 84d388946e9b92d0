//! Seeded random fields and forcing specifications.
//!
//! Random coefficients are drawn from a ChaCha stream keyed by
//! `(seed, mode)`, so a given wavenumber receives the same draw on every
//! grid that contains it. Refining the grid therefore only adds modes.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::TorusGrid;
use crate::operators;

const VECTOR_STREAM: u64 = 0;
const SCALAR_STREAM: u64 = 1;

fn mode_rng(seed: u64, mode: [i64; 3], stream: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    for (a, m) in mode.iter().enumerate() {
        key[8 * (a + 1)..8 * (a + 2)].copy_from_slice(&m.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

fn envelope(k_squared: f64, decay: f64, amplitude: f64) -> f64 {
    amplitude * (1.0 + k_squared).powf(-decay / 2.0)
}

/// Raw per-mode draws, zero on the mean mode and the Nyquist planes.
fn raw_coefficients(grid: &TorusGrid, seed: u64, decay: f64, amplitude: f64, n_comp: usize, stream: u64) -> Vec<Vec<Complex64>> {
    let mut raw = vec![vec![Complex64::default(); grid.len()]; n_comp];
    for flat in 1..grid.len() {
        if grid.is_nyquist(flat) {
            continue;
        }
        let mut rng = mode_rng(seed, grid.mode(flat), stream);
        let env = envelope(grid.k_squared(flat), decay, amplitude);
        for comp in raw.iter_mut() {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            comp[flat] = Complex64::new(re, im) * env;
        }
    }
    raw
}

/// Enforce `û(-k) = conj(û(k))` by averaging each mode with its partner.
fn hermitize(grid: &TorusGrid, raw: &[Complex64]) -> Vec<Complex64> {
    (0..grid.len())
        .map(|flat| 0.5 * (raw[flat] + raw[grid.conjugate_index(flat)].conj()))
        .collect()
}

/// Mean-zero, real, divergence-free field with spectrum
/// `amplitude · (1+|k|²)^{-decay/2}` times standard complex normals.
pub fn random_divfree_field(grid: &TorusGrid, seed: u64, spectrum_decay: f64, amplitude: f64) -> Result<SpectralVectorField> {
    if !(spectrum_decay > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "spectrum_decay must be positive, got {spectrum_decay}"
        )));
    }
    let raw = raw_coefficients(grid, seed, spectrum_decay, amplitude, grid.dim(), VECTOR_STREAM);
    let coeffs = raw.iter().map(|c| hermitize(grid, c)).collect();
    let u = SpectralVectorField::from_parts(grid.clone(), coeffs, false);
    Ok(operators::leray_project(&u))
}

/// Mean-zero real scalar field drawn from the same spectral ensemble.
pub fn random_scalar_field(grid: &TorusGrid, seed: u64, spectrum_decay: f64, amplitude: f64) -> Result<Vec<Complex64>> {
    if !(spectrum_decay > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "spectrum_decay must be positive, got {spectrum_decay}"
        )));
    }
    let raw = raw_coefficients(grid, seed, spectrum_decay, amplitude, 1, SCALAR_STREAM);
    Ok(hermitize(grid, &raw[0]))
}

/// Rescale `u` so that its `X_{1/2}` norm in `L_p` equals `target`.
pub fn normalize_x_half(u: &SpectralVectorField, p: f64, target: f64) -> Result<SpectralVectorField> {
    let norm = operators::frac_norm(u, operators::FracNormParams::new(0.5, p)?)?;
    if norm == 0.0 {
        return Err(Error::ZeroNorm("normalize_x_half"));
    }
    Ok(u.scaled(target / norm))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForcingKind {
    Zero,
    Steady,
    HoelderModulated,
}

/// External force `f(t)`: zero, a steady divergence-free field, or
/// `t^ϱ · base` with Hölder exponent `ϱ ∈ (0,1]`.
#[derive(Clone, Debug)]
pub struct ForcingSpec {
    kind: ForcingKind,
    base: SpectralVectorField,
    exponent: f64,
}

impl ForcingSpec {
    pub fn zero(grid: &TorusGrid) -> Self {
        Self {
            kind: ForcingKind::Zero,
            base: SpectralVectorField::zeros(grid),
            exponent: 1.0,
        }
    }

    pub fn steady(base: SpectralVectorField) -> Result<Self> {
        Self::new(ForcingKind::Steady, base, 1.0)
    }

    pub fn hoelder_modulated(base: SpectralVectorField, exponent: f64) -> Result<Self> {
        Self::new(ForcingKind::HoelderModulated, base, exponent)
    }

    pub fn new(kind: ForcingKind, mut base: SpectralVectorField, exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "forcing exponent must lie in (0,1], got {exponent}"
            )));
        }
        if !base.mark_divergence_free(1e-12) {
            return Err(Error::InvalidArgument("forcing base field is not divergence-free".into()));
        }
        Ok(Self { kind, base, exponent })
    }

    pub fn kind(&self) -> ForcingKind {
        self.kind
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn base(&self) -> &SpectralVectorField {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.kind == ForcingKind::Zero || self.base.max_abs() == 0.0
    }

    pub fn at(&self, t: f64) -> SpectralVectorField {
        match self.kind {
            ForcingKind::Zero => SpectralVectorField::zeros(self.base.grid()),
            ForcingKind::Steady => self.base.clone(),
            ForcingKind::HoelderModulated => self.base.scaled(t.max(0.0).powf(self.exponent)),
        }
    }
}
