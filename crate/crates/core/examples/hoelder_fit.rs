//! Time regularity of a marched trajectory and the empirical Lipschitz
//! constant of the nonlinearity along two trajectories.
//!
//!     cargo run --release --example hoelder_fit

use ns_mild::generate::{normalize_x_half, random_divfree_field};
use ns_mild::solver::{march, SolverConfig};
use ns_mild::verify::{check_assumption_f, estimate_hoelder};
use ns_mild::{Result, TorusGrid};

fn main() -> Result<()> {
    let cfg = SolverConfig { dt: 5e-3, ..Default::default() };
    for n in [8, 16] {
        let grid = TorusGrid::standard(3, n)?;
        let a = march(&normalize_x_half(&random_divfree_field(&grid, 0, 4.0, 1.0)?, 2.0, 1.0)?, &cfg, 0.05)?;
        let b = march(&normalize_x_half(&random_divfree_field(&grid, 1, 4.0, 1.0)?, 2.0, 1.0)?, &cfg, 0.05)?;
        let fit = estimate_hoelder(&a, 0.5)?;
        let f = check_assumption_f(&a, &b, 0.5, 2.0)?;
        println!(
            "N = {n:>2}: beta {:.4} (r^2 {:.3}, {} pairs), max ratio {:.4e}",
            fit.beta, fit.r_squared, fit.sample_pairs, f.max_ratio
        );
    }
    Ok(())
}
