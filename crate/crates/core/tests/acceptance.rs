//! Acceptance suite: one pass/fail line per criterion. Runs without the libtest harness so
//! the lines are always printed; any failure makes the binary exit nonzero.

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use gft_core::beta_solver::{
    beta0_cs, beta_series, solve_beta, BetaNormalization, DEFAULT_SERIES_TERMS,
};
use gft_core::numerics::quadrature::{integrate, QuadratureConfig};
use gft_core::numerics::series::PowerSeries;
use gft_core::q_functions::{q_integral, q_pfq, q_series, DEFAULT_N_MAX};
use gft_core::transform::{
    check_c_membership, star_functional, transformed_extremal, GridSpec, SHARP_TOL,
};
use gft_core::verifier::{
    beta_region, decreasing_condition, default_eps_grid, default_t_grid, default_z_grid,
    m_pi_check, thm41_b_bound, thm41_region, thm42_b_bound, M_TOL,
};
use gft_core::weights::WeightSpec;
use gft_core::{Params, Witness};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

/// (alpha, gamma, delta, zeta) via roots for gamma > 0, directly for gamma = 0.
fn q_param_sets() -> Vec<Params> {
    let pos = [
        (1.0, 1.0, 1.0, 0.0),
        (1.0, 1.0, 1.0, 0.25),
        (1.0, 1.0, 1.0, 0.5),
        (0.5, 2.0, 1.0, 0.0),
        (0.5, 1.0, 1.5, 0.5),
        (0.75, 1.25, 1.2, 0.3),
        (0.6, 3.0, 1.8, 0.6),
        (0.9, 1.1, 2.0, 0.75),
        (0.55, 4.0, 1.4, 0.5),
        (0.8, 2.5, 1.1, 0.2),
    ];
    let zero = [
        (1.0, 1.0, 0.0),
        (0.5, 3.0, 0.8),
        (0.75, 4.0, 0.85),
        (0.6, 1.0, 0.3),
        (0.9, 2.0, 0.6),
    ];
    let mut v: Vec<Params> = pos
        .iter()
        .map(|&(m, n, d, z)| Params::from_roots(m, n, d, z).unwrap())
        .collect();
    v.extend(
        zero.iter()
            .map(|&(a, d, z)| Params::derive(a, 0.0, d, z).unwrap()),
    );
    v
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (mut worst_int, mut worst_pfq) = (0.0f64, 0.0f64);
    let sets = q_param_sets();
    for p in &sets {
        for i in 0..10 {
            let t = i as f64 / 10.0;
            let qi = q_integral(p, t, &cfg()).map_err(e)?.value;
            let qs = q_series(p, t, DEFAULT_N_MAX).map_err(e)?.value;
            let qp = q_pfq(p, t, 1e-15).map_err(e)?.value;
            worst_int = worst_int.max((qi - qs).abs());
            worst_pfq = worst_pfq.max((qs - qp).abs());
        }
    }
    let elapsed = start.elapsed();
    ensure(worst_int <= 1e-8, || {
        format!("|q_integral - q_series| = {worst_int:e} > 1e-8")
    })?;
    ensure(worst_pfq <= 1e-10, || {
        format!("|q_series - q_pfq| = {worst_pfq:e} > 1e-10")
    })?;
    ensure(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} parameter sets, max |int-series| {worst_int:.1e}, max |series-pfq| {worst_pfq:.1e}, {elapsed:.2?}",
        sets.len()
    ))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_cs = 0.0f64;
    for xi in [0.0, 0.25, 0.5] {
        // delta = 1 makes zeta = xi
        let p = Params::from_roots(1.0, 1.0, 1.0, xi).map_err(e)?;
        for w in [
            WeightSpec::komatu(1.0, 1.0),
            WeightSpec::komatu(1.0, 2.0),
            WeightSpec::carlson_shaffer(1.0, 4.0),
        ] {
            let w = w.map_err(e)?;
            let q = solve_beta(&p, &w, &cfg()).map_err(e)?;
            let s = beta_series(&p, &w, DEFAULT_SERIES_TERMS).map_err(e)?;
            worst = worst.max((q.beta - s.beta).abs());
            if w.to_string().starts_with("cs") {
                let c = beta0_cs(&p, 1.0, 4.0, BetaNormalization::Sharp).map_err(e)?;
                worst_cs = worst_cs.max((c.beta - q.beta).abs());
            }
        }
    }
    ensure(worst <= 1e-6, || format!("quadrature vs series {worst:e}"))?;
    ensure(worst_cs <= 1e-6, || {
        format!("6F5 vs quadrature {worst_cs:e}")
    })?;
    Ok(format!(
        "max |quad-series| {worst:.1e}, max |6F5-quad| {worst_cs:.1e}"
    ))
}

fn criterion_3() -> Outcome {
    let mut worst = 0.0f64;
    for (k, p) in [(1.0, 1.0), (1.0, 2.0), (0.5, 3.0)] {
        let w = WeightSpec::komatu(k, p).map_err(e)?;
        for n in 0..=20 {
            let closed = ((1.0 + k) / (1.0 + k + n as f64)).powf(p);
            let quad = w.moment_quadrature(n, &cfg()).map_err(e)?;
            worst = worst.max((closed - quad).abs());
        }
    }
    ensure(worst <= 1e-10, || {
        format!("komatu moments off by {worst:e}")
    })?;
    let w = WeightSpec::hohlov(1.0, 1.0, 3.0).map_err(e)?;
    let tau = w.moments(21);
    let mut worst_h = 0.0f64;
    let mut poch = 1.0;
    for (n, t) in tau.iter().enumerate() {
        // (1)_n (1)_n / ((3)_n n!) = (1)_n / (3)_n
        if n > 0 {
            let m = (n - 1) as f64;
            poch *= (1.0 + m) / (3.0 + m);
        }
        worst_h = worst_h.max((t - poch).abs());
    }
    ensure(worst_h <= 1e-8, || {
        format!("hohlov moments off by {worst_h:e}")
    })?;
    Ok(format!(
        "komatu max err {worst:.1e}, hohlov max err {worst_h:.1e}"
    ))
}

fn sharp_setup() -> Result<(Params, WeightSpec, f64), String> {
    let p = Params::derive(1.0, 0.0, 1.0, 0.0).map_err(e)?;
    let w = WeightSpec::komatu(1.0, 1.0).map_err(e)?;
    let beta = solve_beta(&p, &w, &cfg()).map_err(e)?.beta;
    Ok((p, w, beta))
}

fn criterion_4() -> Outcome {
    let (p, w, beta) = sharp_setup()?;
    let want = (1.5 - 2.0 * LN_2) / (2.0 - 2.0 * LN_2);
    ensure((beta - want).abs() < 1e-10, || {
        format!("sharp beta {beta} vs {want}")
    })?;
    let z = Complex64::new(-0.9995, 0.0);
    let mut errs = Vec::new();
    for order in [256, 512, 1024] {
        let f = transformed_extremal(&p, &w, beta, order);
        errs.push((star_functional(&f, z).map_err(e)? - p.xi()).norm());
    }
    let last = errs[2];
    ensure(last <= 5e-3, || format!("error {last:e} at order 1024"))?;
    ensure(errs.windows(2).all(|w| w[1] <= w[0] + 1e-12), || {
        format!("errors not decreasing: {errs:?}")
    })?;
    Ok(format!(
        "|star - xi| at z = -0.9995: {:.3e} / {:.3e} / {:.3e} (orders 256/512/1024)",
        errs[0], errs[1], errs[2]
    ))
}

struct Sample {
    p: Params,
    a: f64,
    b: f64,
    c: f64,
}

fn sample_gamma_pos(rng: &mut ChaCha8Rng) -> Sample {
    loop {
        let mu = rng.gen_range(0.5..=1.0);
        let d = rng.gen_range(1.0..1.9);
        let nu = rng.gen_range(1.0f64..3.0).max(d * mu / (2.0 - d)) * rng.gen_range(1.0..1.5);
        let xi = rng.gen_range(0.0..=0.5);
        let zeta = 1.0 - (1.0 - xi) / d;
        let Ok(p) = Params::from_roots(mu, nu, d, zeta) else {
            continue;
        };
        let bound = thm41_b_bound(&p);
        if bound <= 1e-3 {
            continue;
        }
        let b = rng.gen_range(1e-3..bound);
        let a = rng.gen_range(0.1..2.0);
        let c = a + b + 2.0 + rng.gen_range(0.0..1.0);
        return Sample { p, a, b, c };
    }
}

fn sample_gamma_zero(rng: &mut ChaCha8Rng) -> Sample {
    loop {
        let alpha = rng.gen_range(0.5..0.95);
        let d = rng.gen_range(3.0..6.0);
        let xi = rng.gen_range(0.0..=0.5);
        let zeta = 1.0 - (1.0 - xi) / d;
        let Ok(p) = Params::derive(alpha, 0.0, d, zeta) else {
            continue;
        };
        let bound = thm42_b_bound(&p);
        if bound <= 1e-3 {
            continue;
        }
        let b = rng.gen_range(1e-3..bound);
        let a = rng.gen_range(0.1..2.0);
        let c = a + b + 3.0 + rng.gen_range(0.0..1.0);
        return Sample { p, a, b, c };
    }
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_241_014);
    let mut samples: Vec<Sample> = (0..20).map(|_| sample_gamma_pos(&mut rng)).collect();
    samples.extend((0..10).map(|_| sample_gamma_zero(&mut rng)));
    let grid = GridSpec::default();
    let (z_grid, eps_grid, t_grid) = (
        default_z_grid(72),
        default_eps_grid(16),
        default_t_grid(200),
    );
    let (mut m_min, mut c_min) = (f64::INFINITY, f64::INFINITY);
    for (i, s) in samples.iter().enumerate() {
        let tag = format!(
            "point {i} ({} A={} B={} C={})",
            describe(&s.p),
            s.a,
            s.b,
            s.c
        );
        let region = beta_region(&s.p, s.a, s.b, s.c);
        ensure(region.pass, || format!("{tag}: sampled outside the region"))?;
        let w = WeightSpec::general_beta(s.a, s.b, s.c, vec![]).map_err(e)?;
        let dec = decreasing_condition(&s.p, &w, &t_grid, &cfg()).map_err(e)?;
        ensure(dec.pass, || {
            format!("{tag}: decreasing condition fails {:?}", dec.checks)
        })?;
        let m = m_pi_check(&s.p, &w, &z_grid, &eps_grid, &cfg(), M_TOL).map_err(e)?;
        let mv = m.check("m_pi_eps_min").map(|c| c.value).unwrap_or(f64::NAN);
        ensure(mv >= -1e-6, || format!("{tag}: M min {mv:e}"))?;
        m_min = m_min.min(mv);
        let beta = solve_beta(&s.p, &w, &cfg()).map_err(e)?.beta;
        let f = transformed_extremal(&s.p, &w, beta, grid.required_order());
        let cm = check_c_membership(&f, s.p.zeta(), &grid, SHARP_TOL).map_err(e)?;
        ensure(cm.min_value >= -1e-3, || {
            format!("{tag}: min Re - xi = {:e}", cm.min_value)
        })?;
        c_min = c_min.min(cm.min_value);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(180), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "30 points: min M {m_min:.1e}, min Re - xi {c_min:.2e}, {elapsed:.2?}"
    ))
}

fn describe(p: &Params) -> String {
    if p.gamma_is_zero() {
        format!("alpha={} delta={} zeta={}", p.alpha(), p.delta(), p.zeta())
    } else {
        format!(
            "mu={} nu={} delta={} zeta={}",
            p.mu(),
            p.nu(),
            p.delta(),
            p.zeta()
        )
    }
}

fn criterion_6() -> Outcome {
    let (p, w, beta) = sharp_setup()?;
    let grid = GridSpec::default();
    let f = transformed_extremal(&p, &w, beta - 0.1, grid.required_order());
    let cm = check_c_membership(&f, p.zeta(), &grid, SHARP_TOL).map_err(e)?;
    ensure(!cm.pass && cm.min_value < -1e-3, || {
        format!("no failure: min {:e}", cm.min_value)
    })?;
    let Some(Witness::Z { re, im }) = cm.witness_z else {
        return Err("no witness".into());
    };
    let dist = Complex64::new(re + 1.0, im).norm();
    ensure(dist < 0.05, || format!("witness {re}+{im}i is not near -1"))?;
    Ok(format!(
        "min Re - xi = {:.3e} at z = {re:.4}{im:+.4}i",
        cm.min_value
    ))
}

fn criterion_7() -> Outcome {
    let mut flips = 0;
    for (mu, nu, delta, zeta) in [
        (0.5, 2.0, 1.0, 0.0),
        (0.7, 1.8, 1.3, 0.4),
        (0.9, 1.2, 1.1, 0.2),
    ] {
        let p = Params::from_roots(mu, nu, delta, zeta).map_err(e)?;
        let b1 = 0.25 * (1.0 / mu - 3.0 + delta * (3.0 - 2.0 * zeta));
        let b2 = (2.0 / (delta + 1.0 / mu)) * ((2.0 * delta - 1.0) / mu - delta + 1.0);
        let bound = b1.min(b2);
        ensure(bound > 0.0, || format!("empty region at mu={mu}"))?;
        let mut bs: Vec<f64> = (0..=100)
            .map(|i| bound * (0.5 + i as f64 / 100.0))
            .collect();
        bs.extend([bound, bound.next_down(), bound.next_up()]);
        for b in bs {
            let pass = thm41_region(&p, 1.0, b, 10.0).pass;
            ensure(pass == (b <= bound), || {
                format!("B = {b:e}: region {pass} vs bound {bound:e}")
            })?;
        }
        ensure(
            thm41_region(&p, 1.0, bound, 10.0).pass
                && !thm41_region(&p, 1.0, bound.next_up(), 10.0).pass,
            || "no flip at the bound".into(),
        )?;
        flips += 1;
    }
    Ok(format!("{flips} parameter sets flip exactly at the bound"))
}

fn criterion_8() -> Outcome {
    // lambda' and lambda'' against central differences
    let mut d1 = 0.0f64;
    let mut d2 = 0.0f64;
    for w in [
        WeightSpec::general_beta(1.0, 1.0, 4.0, vec![]),
        WeightSpec::general_beta(0.7, 1.6, 5.0, vec![0.5, 0.25]),
        WeightSpec::hohlov(0.5, 1.5, 4.5),
    ] {
        let w = w.map_err(e)?;
        for t in [0.2, 0.5, 0.8] {
            let h = 1e-5;
            let fd1 = (w.eval(t + h) - w.eval(t - h)) / (2.0 * h);
            let h2 = 1e-4;
            let fd2 = (w.eval(t + h2) - 2.0 * w.eval(t) + w.eval(t - h2)) / (h2 * h2);
            d1 = d1.max((w.lambda_deriv(t, 1).map_err(e)? - fd1).abs());
            d2 = d2.max((w.lambda_deriv(t, 2).map_err(e)? - fd2).abs());
        }
    }
    ensure(d1 <= 1e-6 && d2 <= 1e-4, || {
        format!("lambda derivative errors {d1:e}, {d2:e}")
    })?;

    // Pi' identity
    let mut dpi = 0.0f64;
    let p = Params::from_roots(0.6, 1.7, 1.3, 0.5).map_err(e)?;
    let w = WeightSpec::general_beta(1.0, 0.4, 3.6, vec![]).map_err(e)?;
    for t in [0.1, 0.4, 0.7] {
        // five-point stencil, O(h^4)
        let h = 1e-3;
        let pi = |x: f64| w.pi_int(&p, x, &cfg());
        let fd = (pi(t - 2.0 * h).map_err(e)? - 8.0 * pi(t - h).map_err(e)?
            + 8.0 * pi(t + h).map_err(e)?
            - pi(t + 2.0 * h).map_err(e)?)
            / (12.0 * h);
        let d = w.pi_deriv(&p, t, &cfg()).map_err(e)?;
        dpi = dpi.max((d - fd).abs() / d.abs().max(1.0));
    }
    ensure(dpi <= 1e-6, || format!("Pi' error {dpi:e}"))?;

    // series round trips
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut rt = 0.0f64;
    for _ in 0..20 {
        let s = PowerSeries::from_fn(64, |n| {
            if n == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)) / (n * n) as f64
            }
        });
        let back = s.log().map_err(e)?.exp().map_err(e)?;
        let pw = s.pow(1.7).map_err(e)?.pow(1.0 / 1.7).map_err(e)?;
        for n in 0..64 {
            rt = rt
                .max((back.coeff(n) - s.coeff(n)).norm())
                .max((pw.coeff(n) - s.coeff(n)).norm());
        }
    }
    ensure(rt <= 1e-10, || format!("series round trip error {rt:e}"))?;

    // golden integrals
    let g = [
        integrate(|_| 1.0, &cfg()).map_err(e)?.value - 1.0,
        integrate(|t| t.powf(-0.5), &cfg()).map_err(e)?.value - 2.0,
        integrate(|t| (1.0 / t).ln(), &cfg()).map_err(e)?.value - 1.0,
    ];
    let gq = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    ensure(gq <= 1e-12, || format!("golden integral error {gq:e}"))?;
    Ok(format!(
        "lambda' {d1:.1e}, lambda'' {d2:.1e}, Pi' {dpi:.1e}, round trip {rt:.1e}, goldens {gq:.1e}"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("q-method agreement", criterion_1),
        ("beta dual-path", criterion_2),
        ("moments", criterion_3),
        ("sharpness at z = -1", criterion_4),
        ("end-to-end sufficiency", criterion_5),
        ("negative control", criterion_6),
        ("region boundary exactness", criterion_7),
        ("numeric hygiene", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} [{name}]: PASS  {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL  {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
