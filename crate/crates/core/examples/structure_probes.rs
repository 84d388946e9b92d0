//! Probes of two structural conditions on initial data and the convective
//! term: diagonal dependence and orthogonality to gradients.
//!
//!     cargo run --release --example structure_probes

use ns_mild::operators;
use ns_mild::verify::{check_diagonal_dependence, check_gradient_orthogonality, random_diagonal_field, Ensemble};
use ns_mild::{Result, SpectralVectorField, TorusGrid};

fn main() -> Result<()> {
    let grid = TorusGrid::standard(3, 16)?;
    let ensemble = Ensemble::new(10, 0, 2.0);

    let shear = SpectralVectorField::from_fn(&grid, |x| [x[1].sin(), 0.0, 0.0]);
    println!("shear (sin y, 0, 0): {:?}", check_diagonal_dependence(&shear));
    let passing = (0..ensemble.size)
        .filter(|&i| check_diagonal_dependence(&ensemble.member(&grid, i).unwrap()).is_diagonal)
        .count();
    println!("random divergence-free fields that are diagonal: {passing}/{}", ensemble.size);
    let d = random_diagonal_field(&grid, 3, 2.0)?;
    println!(
        "diagonal field: div {:.3e}, |P d| / |d| = {:.3e}",
        d.divergence_residual(),
        operators::leray_project(&d).max_abs() / d.max_abs()
    );

    for i in 0..3 {
        let u = ensemble.member(&grid, 2 * i)?;
        let v = ensemble.member(&grid, 2 * i + 1)?;
        let w = operators::advect(&u, &v)?;
        println!(
            "pair {i}: gradient score of (u.grad)v {:.4}, of P(u.grad)v {:.3e}",
            check_gradient_orthogonality(&w, 20, 100, 2.0)?,
            check_gradient_orthogonality(&operators::leray_project(&w), 20, 100, 2.0)?
        );
    }
    Ok(())
}
