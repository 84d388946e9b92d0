//! Numerical checks of the operator identities, estimates and hypotheses
//! behind the mild-solution framework.
//!
//! Exact structural claims (divergence preservation by projection,
//! resolvent and heat semigroup) are asserted modewise at roundoff level.
//! Inequalities with unknown constants are measured over seeded ensembles
//! and summarized as boundedness verdicts; they are never asserted against a
//! fixed constant.

mod checks;
mod estimates;
mod oracle;
mod suite;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Result;
use crate::field::SpectralVectorField;
use crate::generate::random_divfree_field;
use crate::grid::TorusGrid;

pub use checks::*;
pub use estimates::*;
pub use oracle::*;
pub use suite::*;

/// Outcome of one named check.
///
/// Measurement-only checks have `asserted == false` and never fail a suite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub asserted: bool,
    pub passed: bool,
    pub measurements: Map<String, Value>,
}

impl CheckReport {
    pub fn asserted(name: impl Into<String>, passed: bool) -> Self {
        Self {
            name: name.into(),
            asserted: true,
            passed,
            measurements: Map::new(),
        }
    }

    pub fn measurement(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            asserted: false,
            passed: true,
            measurements: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.record(key, value);
        self
    }

    pub fn record(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.measurements.insert(key.to_string(), v);
    }

    /// True unless this is an asserted check that failed.
    pub fn ok(&self) -> bool {
        !self.asserted || self.passed
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Bounded,
    Growing,
    Inconclusive,
}

/// Seeded family of random divergence-free fields; member `i` uses seed
/// `seed + i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub size: usize,
    pub seed: u64,
    pub decay: f64,
    pub amplitude: f64,
}

impl Ensemble {
    pub fn new(size: usize, seed: u64, decay: f64) -> Self {
        Self {
            size,
            seed,
            decay,
            amplitude: 1.0,
        }
    }

    pub fn member(&self, grid: &TorusGrid, i: usize) -> Result<SpectralVectorField> {
        random_divfree_field(grid, self.seed.wrapping_add(i as u64), self.decay, self.amplitude)
    }

    pub fn fields(&self, grid: &TorusGrid) -> Result<Vec<SpectralVectorField>> {
        (0..self.size).map(|i| self.member(grid, i)).collect()
    }
}

/// Relative growth of `last` over `first`, used for boundedness verdicts.
pub fn relative_growth(first: f64, last: f64) -> f64 {
    (last - first) / first
}

/// Bounded iff the value grows by less than 10% from the first to the last
/// resolution.
pub fn growth_verdict(values: &[f64]) -> Verdict {
    match (values.first(), values.last()) {
        (Some(&a), Some(&b)) if values.len() >= 2 && a.is_finite() && b.is_finite() && a > 0.0 => {
            if relative_growth(a, b) < 0.10 {
                Verdict::Bounded
            } else {
                Verdict::Growing
            }
        }
        _ => Verdict::Inconclusive,
    }
}
