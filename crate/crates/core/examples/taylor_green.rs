//! March the Taylor-Green vortex and compare with the closed form.
//!
//!     cargo run --release --example taylor_green

use ns_mild::solver::{march, SolverConfig};
use ns_mild::verify::{compare_oracle, taylor_green, taylor_green_residual};
use ns_mild::{Result, TorusGrid};

fn main() -> Result<()> {
    let grid = TorusGrid::standard(2, 64)?;
    let nu = 1.0;
    let u0 = taylor_green(&grid, nu, 0.0)?;
    let cfg = SolverConfig { nu, dt: 1e-3, snapshot_every: 200, ..Default::default() };
    let traj = march(&u0, &cfg, 1.0)?;

    println!("{:>6} {:>14} {:>14} {:>12}", "t", "energy", "2pi^2 e^-4t", "rel err");
    let errors = compare_oracle(&traj, nu)?;
    for (d, (_, err)) in traj.diagnostics.iter().zip(errors) {
        let exact = 2.0 * std::f64::consts::PI.powi(2) * (-4.0 * nu * d.time).exp();
        println!("{:>6.3} {:>14.10} {:>14.10} {:>12.3e}", d.time, d.energy, exact, err);
    }
    println!("substitution residual at t=0.5: {:.3e}", taylor_green_residual(&grid, nu, 0.5)?);
    Ok(())
}
