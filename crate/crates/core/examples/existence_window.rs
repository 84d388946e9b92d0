//! Largest convergent Picard window as the initial data grow.
//!
//!     cargo run --release --example existence_window

use ns_mild::generate::{normalize_x_half, random_divfree_field};
use ns_mild::solver::SolverConfig;
use ns_mild::verify::existence_time_trend;
use ns_mild::{Result, TorusGrid};

fn main() -> Result<()> {
    let grid = TorusGrid::standard(3, 16)?;
    let base = normalize_x_half(&random_divfree_field(&grid, 0, 4.0, 1.0)?, 2.0, 20.0)?;
    let cfg = SolverConfig { window_t: 1.0, n_nodes: 21, ..Default::default() };
    let trend = existence_time_trend(&[0.1, 1.0, 10.0], &base, &cfg)?;
    for ((a, t_star), w) in trend.points.iter().zip(&trend.windows) {
        println!("amplitude {a:>5}: T* = {t_star} after {} attempt(s)", w.attempts.len());
    }
    println!("nonincreasing: {}", trend.nonincreasing);
    Ok(())
}
