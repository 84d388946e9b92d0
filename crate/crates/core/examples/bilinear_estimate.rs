//! Empirical constant of the advection estimate
//! `|(u.grad)v|_p <= C |(-Laplacian)^theta u|_p |(-Laplacian)^omega v|_p`
//! across two resolutions.
//!
//!     cargo run --release --example bilinear_estimate

use ns_mild::verify::{bilinear_ratio, estimate_bilinear_constant, Ensemble};
use ns_mild::{Result, SpectralVectorField, TorusGrid};

fn main() -> Result<()> {
    let grid = TorusGrid::standard(3, 16)?;
    let u = SpectralVectorField::from_fn(&grid, |x| [x[1].sin(), 0.0, 0.0]);
    let v = SpectralVectorField::from_fn(&grid, |x| [0.0, x[0].sin(), 0.0]);
    println!("single-mode ratio {:.8}", bilinear_ratio(&u, &v, 0.75, 0.75, 2.0)?);

    let ensemble = Ensemble::new(20, 0, 4.0);
    for exponents in [(0.0, 0.75, 0.75), (0.0, 0.5, 0.5)] {
        let report = estimate_bilinear_constant(&ensemble, 3, exponents, 2.0, &[8, 16])?;
        println!("{}: {:?} -> {:?}", report.name, report.per_resolution, report.verdict);
    }
    Ok(())
}
