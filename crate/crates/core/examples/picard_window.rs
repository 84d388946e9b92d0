//! Fixed-point iteration of the integral equation on one window, checked
//! against exponential Euler marching.
//!
//!     cargo run --release --example picard_window

use ns_mild::generate::{normalize_x_half, random_divfree_field};
use ns_mild::solver::{march, picard_solve, SolverConfig};
use ns_mild::{Result, TorusGrid};

fn main() -> Result<()> {
    let grid = TorusGrid::standard(3, 16)?;
    let u0 = normalize_x_half(&random_divfree_field(&grid, 11, 2.0, 1.0)?, 2.0, 0.1)?;

    let cfg = SolverConfig { window_t: 0.1, n_nodes: 101, dt: 1e-3, ..Default::default() };
    let sol = picard_solve(&u0, &cfg)?;
    println!("Picard converged in {} iterations", sol.iterations);
    for w in sol.residual_history.windows(2) {
        println!("  residual {:.3e} -> {:.3e} (ratio {:.2e})", w[0], w[1], w[1] / w[0]);
    }

    let marched = march(&u0, &cfg, 0.1)?;
    let (_, a) = sol.trajectory.last().unwrap();
    let (_, b) = marched.last().unwrap();
    let rel = (a.sub(b).parseval_l2_squared() / b.parseval_l2_squared()).sqrt();
    println!("relative L2 difference at t = 0.1: {rel:.3e}");
    Ok(())
}
