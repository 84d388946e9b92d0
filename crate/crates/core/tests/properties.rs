//! Property tests of the structural invariants over random seeds, grids and
//! parameters.

use ns_mild::generate::{normalize_x_half, random_divfree_field, random_scalar_field};
use ns_mild::operators::{self, FracNormParams, GradientVariant};
use ns_mild::solver::{march, SolverConfig};
use ns_mild::spectral::{dealias, truncate};
use ns_mild::transform::{forward_transform, inverse_transform};
use ns_mild::verify::{taylor_green_residual, CheckReport};
use ns_mild::{PhysicalVectorField, SpectralVectorField, TorusGrid};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn grid() -> impl Strategy<Value = TorusGrid> {
    (2usize..=3, prop::sample::select(vec![8usize, 10, 12, 16]), prop::sample::select(vec![1.0, 2.0 * std::f64::consts::PI, 5.0]))
        .prop_map(|(d, n, l)| TorusGrid::new(d, n, l).unwrap())
}

fn field(g: &TorusGrid, seed: u64) -> SpectralVectorField {
    random_divfree_field(g, seed, 2.0, 1.0).unwrap()
}

fn rel(a: &SpectralVectorField, b: &SpectralVectorField) -> f64 {
    let s = a.max_abs().max(b.max_abs());
    if s == 0.0 {
        0.0
    } else {
        a.sub(b).max_abs() / s
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_round_trip(g in grid(), seed in any::<u64>()) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let values = (0..g.dim()).map(|_| (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
        let u = PhysicalVectorField::new(g.clone(), values).unwrap();
        let back = inverse_transform(&forward_transform(&u));
        let err = u.components().iter().zip(back.components())
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * u.max_abs());
    }

    #[test]
    fn parseval(g in grid(), seed in any::<u64>()) {
        let u = field(&g, seed);
        let spectral = u.parseval_l2_squared();
        let physical = operators::physical_lp_norm(&inverse_transform(&u), 2.0).powi(2);
        prop_assert!((spectral - physical).abs() <= 1e-10 * physical);
    }

    #[test]
    fn truncation_keeps_divergence_free(g in grid(), seed in any::<u64>(), frac in 0.0f64..=1.0) {
        let u = field(&g, seed);
        let m = (frac * (g.n_modes() / 2) as f64).round() as usize;
        prop_assert!(truncate(&u, m).unwrap().divergence_residual() <= 1e-12);
        prop_assert!(dealias(&u).divergence_residual() <= 1e-12);
    }

    #[test]
    fn projection_identities(g in grid(), seed in any::<u64>()) {
        let h = random_scalar_field(&g, seed ^ 0x5555, 2.0, 1.0).unwrap();
        let grad = operators::gradient_of_scalar(&g, &h);
        let w = field(&g, seed).add(&grad);
        let pw = operators::leray_project(&w);
        prop_assert!(rel(&operators::leray_project(&pw), &pw) <= 1e-12);
        prop_assert!(pw.divergence_residual() <= 1e-12);
        prop_assert!(operators::leray_project(&grad).max_abs() <= 1e-12 * grad.max_abs());
    }

    #[test]
    fn resolvent_identity_and_divergence(g in grid(), seed in any::<u64>(), lambda in prop::sample::select(vec![1.0, 10.0, 100.0])) {
        let u = field(&g, seed);
        let r = operators::resolvent(lambda, &u).unwrap();
        prop_assert!(rel(&operators::shifted_operator(lambda, &r), &u) <= 1e-12);
        prop_assert!(r.divergence_residual() <= 1e-12);
    }

    #[test]
    fn semigroup_law_and_contraction(
        g in grid(),
        seed in any::<u64>(),
        s in prop::sample::select(vec![0.0, 0.01, 0.1, 1.0]),
        t in prop::sample::select(vec![0.01, 0.1, 1.0]),
        nu in 0.1f64..2.0,
    ) {
        let u = field(&g, seed);
        let et = operators::heat_semigroup(t, nu, &u).unwrap();
        let two = operators::heat_semigroup(s, nu, &et).unwrap();
        let one = operators::heat_semigroup(s + t, nu, &u).unwrap();
        prop_assert!(one.sub(&two).max_abs() <= 1e-12 * u.max_abs());
        prop_assert!(et.divergence_residual() <= 1e-12);
        for p in [2.0, 4.0] {
            let before = operators::lp_norm(&u, p).unwrap();
            let after = operators::lp_norm(&et, p).unwrap();
            prop_assert!(after <= before * (1.0 + 1e-12), "p = {p}: {after} > {before}");
        }
    }

    #[test]
    fn fractional_powers_compose(g in grid(), seed in any::<u64>(), a in -1.0f64..=1.0, b in -1.0f64..=1.0) {
        prop_assume!((-1.0..=1.0).contains(&(a + b)));
        let u = field(&g, seed);
        let ab = operators::frac_power(a, &operators::frac_power(b, &u).unwrap()).unwrap();
        let direct = operators::frac_power(a + b, &u).unwrap();
        prop_assert!(rel(&ab, &direct) <= 1e-12);
    }

    #[test]
    fn convective_term_is_energy_neutral(g in grid(), seed in any::<u64>()) {
        let u = field(&g, seed);
        let w = operators::advect(&u, &u).unwrap();
        let norm = operators::lp_norm(&u, 2.0).unwrap();
        prop_assert!(w.inner_product(&u).abs() <= 1e-8 * norm.powi(3));
    }

    #[test]
    fn gradient_norm_equals_half_power_norm(g in grid(), seed in any::<u64>()) {
        let u = field(&g, seed);
        let a = operators::gradient_norm(&u, 2.0, GradientVariant::Full).unwrap();
        let b = operators::frac_norm(&u, FracNormParams::new(0.5, 2.0).unwrap()).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * b);
    }

    #[test]
    fn taylor_green_solves_the_equation(t in 0.0f64..3.0, nu in 0.01f64..2.0, n in prop::sample::select(vec![8usize, 16, 32])) {
        let g = TorusGrid::standard(2, n).unwrap();
        prop_assert!(taylor_green_residual(&g, nu, t).unwrap() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn unforced_march_dissipates_and_stays_solenoidal(
        seed in any::<u64>(),
        dim in 2usize..=3,
        amplitude in 0.1f64..5.0,
        nu in 0.2f64..2.0,
        dt_scale in 0.05f64..=1.0,
    ) {
        let g = TorusGrid::standard(dim, 8).unwrap();
        let u0 = normalize_x_half(&field(&g, seed), 2.0, amplitude).unwrap();
        let cfg = SolverConfig { nu, dt: dt_scale * 0.1 / nu, ..Default::default() };
        let traj = march(&u0, &cfg, 10.0 * cfg.dt).unwrap();
        prop_assert!(traj.blow_up.is_none());
        for u in &traj.fields {
            prop_assert!(u.divergence_residual() <= 1e-10);
            prop_assert!(u.components().iter().all(|c| c[0].re == 0.0 && c[0].im == 0.0));
        }
        for w in traj.diagnostics.windows(2) {
            prop_assert!(w[1].energy <= w[0].energy * (1.0 + 1e-12), "{} > {}", w[1].energy, w[0].energy);
        }
    }

    #[test]
    fn zero_stays_zero(dim in 2usize..=3, dt in 1e-3f64..0.1) {
        let g = TorusGrid::standard(dim, 8).unwrap();
        let traj = march(&SpectralVectorField::zeros(&g), &SolverConfig { dt, ..Default::default() }, 5.0 * dt).unwrap();
        prop_assert!(traj.fields.iter().all(|u| u.max_abs() == 0.0));
    }

    #[test]
    fn checks_are_deterministic(seed in any::<u64>()) {
        let g = TorusGrid::standard(3, 8).unwrap();
        let fields: Vec<_> = (0..4).map(|i| field(&g, seed.wrapping_add(i))).collect();
        let run = || -> CheckReport {
            ns_mild::verify::check_semigroup(&fields, &[0.01, 0.1], 1.0, 1e-12).unwrap()
        };
        prop_assert_eq!(serde_json::to_string(&run()).unwrap(), serde_json::to_string(&run()).unwrap());
    }
}
