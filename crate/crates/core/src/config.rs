//! Experiment configuration: one JSON document with sections `grid`,
//! `solver`, `forcing`, `run`, `initial` and `verify`. Every key is
//! optional; unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::generate::{normalize_x_half, random_divfree_field, ForcingKind, ForcingSpec};
use crate::grid::TorusGrid;
use crate::solver::{Scheme, SolverConfig};
use crate::verify::{taylor_green, VerifyConfig};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub dim: usize,
    pub n_modes: usize,
    pub period: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            dim: 3,
            n_modes: 32,
            period: 2.0 * std::f64::consts::PI,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub nu: f64,
    pub p: f64,
    pub scheme: Scheme,
    pub dt: f64,
    #[serde(rename = "window_T")]
    pub window_t: f64,
    pub n_nodes: usize,
    pub picard_tol: f64,
    pub picard_max_iters: usize,
    pub dealias: bool,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            nu: d.nu,
            p: d.p,
            scheme: d.scheme,
            dt: d.dt,
            window_t: d.window_t,
            n_nodes: d.n_nodes,
            picard_tol: d.picard_tol,
            picard_max_iters: d.picard_max_iters,
            dealias: d.dealias,
        }
    }
}

/// The forcing profile is `amplitude` times a seeded random
/// divergence-free field, modulated in time according to `kind`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForcingSection {
    pub kind: ForcingKind,
    pub exponent: f64,
    pub seed: u64,
    pub amplitude: f64,
    pub decay: f64,
}

impl Default for ForcingSection {
    fn default() -> Self {
        Self {
            kind: ForcingKind::Zero,
            exponent: 0.5,
            seed: 0,
            amplitude: 1.0,
            decay: 2.0,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub t_end: f64,
    pub snapshot_every: usize,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            t_end: 0.1,
            snapshot_every: 10,
            seed: 0,
            out_dir: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Zero,
    TaylorGreen,
    Random,
}

/// Initial data. For `random`, `amplitude` is the target `X_{1/2}` norm
/// (in `L_p` with the solver's `p`) and the seed is `run.seed`; for
/// `taylor_green` it multiplies the unit vortex.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSection {
    pub kind: InitialKind,
    pub amplitude: f64,
    pub decay: f64,
}

impl Default for InitialSection {
    fn default() -> Self {
        Self {
            kind: InitialKind::Random,
            amplitude: 1.0,
            decay: 2.0,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub grid: GridSection,
    pub solver: SolverSection,
    pub forcing: ForcingSection,
    pub run: RunSection,
    pub initial: InitialSection,
    pub verify: VerifyConfig,
}

impl Config {
    /// Parse and validate. Errors name the offending key path and, for
    /// syntax errors, the line and column.
    pub fn from_json(text: &str, origin: &Path) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Config = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let message = if path.is_empty() || path == "." {
                inner.to_string()
            } else {
                format!("{path}: {inner}")
            };
            Error::Config {
                path: origin.to_path_buf(),
                message,
            }
        })?;
        config.validate().map_err(|e| Error::Config {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_json(&text, path)
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.grid()?;
        self.solver_config(&grid)?.validate()?;
        if !(self.run.t_end > 0.0 && self.run.t_end.is_finite()) {
            return Err(Error::InvalidArgument(format!("run.t_end must be positive, got {}", self.run.t_end)));
        }
        if self.run.snapshot_every == 0 {
            return Err(Error::InvalidArgument("run.snapshot_every must be >= 1".into()));
        }
        if self.initial.kind == InitialKind::TaylorGreen && self.grid.dim != 2 {
            return Err(Error::InvalidArgument("initial.kind taylor_green needs grid.dim = 2".into()));
        }
        if !self.initial.amplitude.is_finite() || !(self.initial.decay > 0.0) {
            return Err(Error::InvalidArgument("initial.amplitude must be finite and initial.decay positive".into()));
        }
        self.verify.validate()
    }

    pub fn grid(&self) -> Result<TorusGrid> {
        TorusGrid::new(self.grid.dim, self.grid.n_modes, self.grid.period)
    }

    pub fn forcing(&self, grid: &TorusGrid) -> Result<ForcingSpec> {
        let f = &self.forcing;
        match f.kind {
            ForcingKind::Zero => Ok(ForcingSpec::zero(grid)),
            kind => {
                let base = random_divfree_field(grid, f.seed, f.decay, f.amplitude)?;
                ForcingSpec::new(kind, base, f.exponent)
            }
        }
    }

    pub fn solver_config(&self, grid: &TorusGrid) -> Result<SolverConfig> {
        let s = &self.solver;
        Ok(SolverConfig {
            nu: s.nu,
            p: s.p,
            scheme: s.scheme,
            dt: s.dt,
            window_t: s.window_t,
            n_nodes: s.n_nodes,
            picard_tol: s.picard_tol,
            picard_max_iters: s.picard_max_iters,
            forcing: Some(self.forcing(grid)?),
            dealias: s.dealias,
            t0: 0.0,
            snapshot_every: self.run.snapshot_every,
        })
    }

    pub fn initial_field(&self, grid: &TorusGrid) -> Result<SpectralVectorField> {
        let init = &self.initial;
        match init.kind {
            InitialKind::Zero => Ok(SpectralVectorField::zeros(grid)),
            InitialKind::TaylorGreen => Ok(taylor_green(grid, self.solver.nu, 0.0)?.scaled(init.amplitude)),
            InitialKind::Random => {
                let u = random_divfree_field(grid, self.run.seed, init.decay, 1.0)?;
                if init.amplitude == 0.0 {
                    Ok(SpectralVectorField::zeros(grid))
                } else {
                    normalize_x_half(&u, self.solver.p, init.amplitude)
                }
            }
        }
    }

    /// Apply a `--seed` override to every seeded part of the experiment.
    pub fn set_seed(&mut self, seed: u64) {
        self.run.seed = seed;
        self.verify.seed = seed;
    }
}
