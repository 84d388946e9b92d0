//! March with a forcing profile that is Hölder continuous in time, using
//! both exponential Euler and successive Picard windows.
//!
//!     cargo run --release --example forced_march

use ns_mild::generate::{normalize_x_half, random_divfree_field, ForcingSpec};
use ns_mild::solver::{march, picard_march, SolverConfig};
use ns_mild::{Result, TorusGrid};

fn main() -> Result<()> {
    let grid = TorusGrid::standard(3, 16)?;
    let u0 = normalize_x_half(&random_divfree_field(&grid, 5, 2.0, 1.0)?, 2.0, 0.5)?;
    let forcing = ForcingSpec::hoelder_modulated(random_divfree_field(&grid, 6, 2.0, 0.5)?, 0.5)?;
    let cfg = SolverConfig {
        dt: 1e-3,
        window_t: 0.05,
        n_nodes: 51,
        snapshot_every: 50,
        forcing: Some(forcing),
        ..Default::default()
    };
    let euler = march(&u0, &cfg, 0.2)?;
    let picard = picard_march(&u0, &cfg, 0.2)?;
    println!("{:>6} {:>14} {:>14}", "t", "energy (Euler)", "energy (Picard)");
    for (a, b) in euler.diagnostics.iter().zip(&picard.diagnostics) {
        println!("{:>6.3} {:>14.8} {:>14.8}", a.time, a.energy, b.energy);
    }
    Ok(())
}
