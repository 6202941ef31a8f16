use gft_core::beta_solver::{beta_from_integral, BetaNormalization};
use gft_core::numerics::quadrature::QuadratureConfig;
use gft_core::numerics::series::PowerSeries;
use gft_core::transform::{apply_h, apply_psi, apply_transform, extremal_function, AnalyticFn};
use gft_core::verifier::{
    cs_region, default_z_grid, hohlov_region, m_pi_check, thm41_b_bound, thm41_region,
};
use gft_core::weights::WeightSpec;
use gft_core::Params;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn near_one_series() -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec((-0.4f64..0.4, -0.4f64..0.4), 1..40).prop_map(|v| {
        PowerSeries::from_fn(v.len() + 1, |n| {
            if n == 0 {
                c(1.0, 0.0)
            } else {
                let (a, b) = v[n - 1];
                c(a, b) / (n * n) as f64
            }
        })
    })
}

/// Roots in the range used by the `gamma > 0` sufficiency theorem.
fn in_range_params() -> impl Strategy<Value = Params> {
    (0.5f64..=1.0, 1.0f64..4.0, 1.0f64..1.9, 0.0f64..=0.5).prop_filter_map(
        "roots",
        |(mu, nu, d, xi)| {
            let nu = nu.max(d * mu / (2.0 - d));
            Params::from_roots(mu, nu, d, 1.0 - (1.0 - xi) / d).ok()
        },
    )
}

fn max_diff(a: &PowerSeries, b: &PowerSeries) -> f64 {
    (0..a.order().min(b.order()))
        .map(|n| (a.coeff(n) - b.coeff(n)).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn log_exp_round_trip(s in near_one_series()) {
        let back = s.log().unwrap().exp().unwrap();
        prop_assert!(max_diff(&s, &back) < 1e-10);
    }

    #[test]
    fn pow_composes(s in near_one_series(), a in 0.2f64..3.0, b in 0.2f64..3.0) {
        let lhs = s.pow(a).unwrap().pow(b).unwrap();
        let rhs = s.pow(a * b).unwrap();
        prop_assert!(max_diff(&lhs, &rhs) < 1e-9);
        let prod = s.pow(a).unwrap().mul(&s.pow(b).unwrap()).unwrap();
        prop_assert!(max_diff(&prod, &s.pow(a + b).unwrap()) < 1e-9);
    }

    #[test]
    fn beta_defining_relation(i in -5.0f64..0.99) {
        let b = beta_from_integral(i).unwrap();
        prop_assert!(((b - 0.5) / (1.0 - b) + i).abs() < 1e-9);
        let pb = BetaNormalization::Printed.invert(i).unwrap();
        prop_assert!((pb / (1.0 - pb) + i).abs() < 1e-9);
    }

    #[test]
    fn region_is_deterministic_and_monotone_in_b(p in in_range_params(), frac in 0.0f64..2.0) {
        let bound = thm41_b_bound(&p);
        prop_assume!(bound > 0.0);
        let b = bound * frac;
        prop_assume!(b > 0.0);
        let r1 = thm41_region(&p, 1.0, b, 20.0);
        let r2 = thm41_region(&p, 1.0, b, 20.0);
        prop_assert_eq!(&r1, &r2);
        prop_assert_eq!(r1.check("B<=bound").unwrap().pass, b <= bound);
        prop_assert_eq!(r1.pass, r1.failures().next().is_none());
        if r1.pass {
            prop_assert!(thm41_region(&p, 1.0, b * 0.5, 20.0).pass);
        }
    }

    #[test]
    fn hohlov_at_a_one_is_cs(p in in_range_params(), b in 0.05f64..1.5, gap in 1.0f64..6.0) {
        let cc = b + gap;
        prop_assert_eq!(hohlov_region(&p, 1.0, b, cc), cs_region(&p, b, cc));
    }

    #[test]
    fn psi_inverts_h(p in in_range_params(), beta in -1.0f64..0.9) {
        let f = extremal_function(&p, beta, 64);
        let h = apply_h(&p, &f).unwrap();
        prop_assert!(max_diff(&apply_psi(&p, &h), f.s()) < 1e-13);
        // H of the extremal is beta + (1 - beta)(1 + z)/(1 - z)
        for n in 1..64 {
            prop_assert!((h.coeff(n).re - 2.0 * (1.0 - beta)).abs() < 1e-12);
        }
    }

    #[test]
    fn transform_scales_h_coefficients(p in in_range_params(), beta in -1.0f64..0.9, b in 0.1f64..2.0) {
        let w = WeightSpec::carlson_shaffer(b, b + 3.0).unwrap();
        let f = extremal_function(&p, beta, 48);
        let vf = apply_transform(&w, &f, 48);
        let hf = apply_h(&p, &f).unwrap();
        let hvf = apply_h(&p, &vf).unwrap();
        let tau = w.moments(48);
        for (n, t) in tau.iter().enumerate() {
            prop_assert!((hvf.coeff(n) - hf.coeff(n) * *t).norm() < 1e-12 * hf.coeff(n).norm().max(1.0));
        }
    }
}

#[test]
fn identity_is_fixed_by_h_normalization() {
    let f = AnalyticFn::identity(1.5, 8).unwrap();
    assert_eq!(f.s().coeff(0), c(1.0, 0.0));
    assert!((1..8).all(|n| f.s().coeff(n) == c(0.0, 0.0)));
}

/// The exact minimum over `|eps| = 1` never exceeds any sampled `eps`.
#[test]
fn eps_minimum_bounds_every_sample() {
    let p = Params::from_roots(0.7, 1.6, 1.2, 0.3).unwrap();
    let w = WeightSpec::general_beta(1.0, 0.3, 3.5, vec![]).unwrap();
    let z = default_z_grid(24);
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let eps: Vec<Complex64> = (0..1000)
        .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    let r = m_pi_check(&p, &w, &z, &eps, &QuadratureConfig::default(), 1e-6).unwrap();
    let grid = r.check("m_pi_grid_min").unwrap().value;
    let exact = r.check("m_pi_eps_min").unwrap().value;
    assert!(exact <= grid + 1e-15, "exact {exact} vs sampled {grid}");
    // 1000 angles resolve the minimum to about (pi/1000)^2 relative
    assert!(grid - exact < 1e-4 * grid.abs().max(1.0));
}
