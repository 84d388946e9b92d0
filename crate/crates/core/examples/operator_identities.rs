//! Leray projection, resolvent and heat semigroup on a random field.
//!
//!     cargo run --release --example operator_identities

use ns_mild::generate::{random_divfree_field, random_scalar_field};
use ns_mild::operators::{self, FracNormParams, GradientVariant};
use ns_mild::{Result, TorusGrid};

fn main() -> Result<()> {
    let grid = TorusGrid::standard(3, 16)?;
    let u = random_divfree_field(&grid, 7, 2.0, 1.0)?;
    let h = random_scalar_field(&grid, 8, 2.0, 1.0)?;
    let w = u.add(&operators::gradient_of_scalar(&grid, &h));

    let pw = operators::leray_project(&w);
    println!("div(w)              {:.3e}", w.divergence_residual());
    println!("div(Pw)             {:.3e}", pw.divergence_residual());
    println!("|P(Pw) - Pw|        {:.3e}", operators::leray_project(&pw).sub(&pw).max_abs());
    println!("|Pw - u|            {:.3e}", pw.sub(&u).max_abs());

    for lambda in [1.0, 10.0, 100.0] {
        let r = operators::resolvent(lambda, &u)?;
        let back = operators::shifted_operator(lambda, &r);
        println!("lambda {lambda:>5}: |(lambda - Laplacian) R u - u| {:.3e}, div {:.3e}", back.sub(&u).max_abs(), r.divergence_residual());
    }

    for t in [0.01, 0.1, 1.0] {
        let e = operators::heat_semigroup(t, 1.0, &u)?;
        let ratio2 = operators::lp_norm(&e, 2.0)? / operators::lp_norm(&u, 2.0)?;
        let ratio4 = operators::lp_norm(&e, 4.0)? / operators::lp_norm(&u, 4.0)?;
        println!("t {t:>5}: L2 ratio {ratio2:.6}, L4 ratio {ratio4:.6}");
    }

    let grad = operators::gradient_norm(&u, 2.0, GradientVariant::Full)?;
    let half = operators::frac_norm(&u, FracNormParams::new(0.5, 2.0)?)?;
    println!("|grad u| = {grad:.12}, |(-Laplacian)^(1/2) u| = {half:.12}");
    Ok(())
}
