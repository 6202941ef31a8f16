//! Hypothesis checks: the dual functional `M_Pi(h_xi) >= 0`, the decreasing-ratio
//! condition that implies it, and the closed-form parameter regions for the beta-type,
//! Hohlov, Carlson-Shaffer and Komatu weights.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::kernels::{h_integrand_eps_floor, h_integrand_parts};
use crate::numerics::quadrature::{integrate_batch, QuadratureConfig};
use crate::params::Params;
use crate::report::{Check, Report, Witness};
use crate::weights::{pi_gap, WeightSpec};

/// Slack on successive differences in [`decreasing_condition`], relative to `max(1, |D|)`.
pub const MONOTONE_TOL: f64 = 1e-9;
/// Slack for `M >= 0`.
pub const M_TOL: f64 = 1e-6;

/// `z_k = e^{2 pi i k / n}`, `k = 1..n-1`; `z = 1` itself is a pole of `h_xi`.
pub fn default_z_grid(n: usize) -> Vec<Complex64> {
    (1..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect()
}

/// `n` equispaced unimodular points, starting at `1`.
pub fn default_eps_grid(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
        .collect()
}

/// `n` geometrically spaced points from `1e-8` to `0.999`.
pub fn default_t_grid(n: usize) -> Vec<f64> {
    let (lo, hi) = (1e-8f64.ln(), 0.999f64.ln());
    (0..n)
        .map(|i| (lo + (hi - lo) * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}

/// `(m, |t^(delta/m - 1) P(t)|)` with `m = mu, P = Pi` for `gamma > 0` and
/// `m = alpha, P = Lambda_alpha` for `gamma = 0`.
fn m_weight(p: &Params, w: &WeightSpec, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let m = if p.gamma_is_zero() { p.alpha() } else { p.mu() };
    w.pi_int_scaled(p, t, p.delta() / m - 1.0, cfg)
}

/// `M(z, eps) = int_0^1 t^(delta/m - 1) P(t) h_{xi,delta,z}(t) dt` over the given grids.
///
/// The integrand is affine in `eps`, so the exact minimum over `|eps| = 1` is also
/// reported along with the integral of the pointwise `eps` floor (a weaker bound).
pub fn m_pi_check(
    p: &Params,
    w: &WeightSpec,
    z_grid: &[Complex64],
    eps_grid: &[Complex64],
    cfg: &QuadratureConfig,
    tol: f64,
) -> Result<Report> {
    let nz = z_grid.len();
    let inner = QuadratureConfig {
        abs_tol: cfg.abs_tol * 1e-2,
        ..*cfg
    };
    let q = integrate_batch(
        4 * nz,
        |t, out| {
            let wt = m_weight(p, w, t, &inner)?;
            for (k, &z) in z_grid.iter().enumerate() {
                let (c, a) = h_integrand_parts(p, z, t);
                out[4 * k] = wt * c;
                out[4 * k + 1] = wt * a.re;
                out[4 * k + 2] = wt * a.im;
                out[4 * k + 3] = wt * h_integrand_eps_floor(p, z, t);
            }
            Ok(())
        },
        cfg,
    )?;

    let mut grid_min = (
        f64::INFINITY,
        Witness::Text {
            detail: "empty grid".into(),
        },
    );
    let mut exact_min = grid_min.clone();
    let mut floor_min = f64::INFINITY;
    for (k, &z) in z_grid.iter().enumerate() {
        let c = q[4 * k].value;
        let a = Complex64::new(q[4 * k + 1].value, q[4 * k + 2].value);
        for &eps in eps_grid {
            let m = c + (eps * a).re;
            if m < grid_min.0 {
                grid_min = (m, Witness::z_eps(z, eps));
            }
        }
        let eps_star = if a.norm() > 0.0 {
            -a.conj() / a.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let m = c - a.norm();
        if m < exact_min.0 {
            exact_min = (m, Witness::z_eps(z, eps_star));
        }
        floor_min = floor_min.min(q[4 * k + 3].value);
    }

    let mut r = Report::new();
    r.push(Check::ge("m_pi_grid_min", grid_min.0, -tol).with_witness(grid_min.1));
    r.push(Check::ge("m_pi_eps_min", exact_min.0, -tol).with_witness(exact_min.1));
    r.note(format!(
        "integral of the pointwise eps floor: min {floor_min:.6e}"
    ));
    r.note(format!("{} z points x {} eps points", nz, eps_grid.len()));
    if p.gamma_is_zero() {
        r.note("gamma = 0: weight t^(delta/alpha - 1) Lambda_alpha(t)");
    }
    Ok(r)
}

/// The ratio whose monotonicity implies `M >= 0`:
/// `D(t) = t^((delta-1)/m) (delta (1 - 1/m) P(t) - t P'(t)) / log(1/t)^(1 + 2 xi)`
/// with `(m, P) = (mu, Pi)` or `(alpha, Lambda_alpha)`. `P'` is analytic:
/// `-t Pi' = Lambda_nu t^(-a)` and `-t Lambda_alpha' = t lambda(t) t^(-delta/alpha)`.
pub fn decreasing_ratio(p: &Params, w: &WeightSpec, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let d = p.delta();
    let den = (1.0 / t).ln().powf(1.0 + 2.0 * p.xi());
    if p.gamma_is_zero() {
        let a = p.alpha();
        let num = d * (1.0 - 1.0 / a) * w.lambda_int_scaled(p, t, (d - 1.0) / a, cfg)?
            + t.powf(1.0 - 1.0 / a) * w.eval(t);
        return Ok(num / den);
    }
    let mu = p.mu();
    let s = (d - 1.0) / mu;
    let num = d * (1.0 - 1.0 / mu) * w.pi_int_scaled(p, t, s, cfg)?
        + w.lambda_int_scaled(p, t, s - pi_gap(p), cfg)?;
    Ok(num / den)
}

/// `D` nonincreasing on `t_grid` (sorted increasing), up to [`MONOTONE_TOL`] relative slack.
pub fn decreasing_condition(
    p: &Params,
    w: &WeightSpec,
    t_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Report> {
    let mut r = Report::new();
    let m = if p.gamma_is_zero() { p.alpha() } else { p.mu() };
    if !(0.5..=1.0).contains(&m) {
        r.note(format!(
            "{} = {m} outside [1/2, 1]",
            if p.gamma_is_zero() { "alpha" } else { "mu" }
        ));
    }
    if !p.gamma_is_zero() && p.nu() < 1.0 {
        r.note(format!("nu = {} < 1", p.nu()));
    }
    if p.delta() < 1.0 {
        r.note(format!("delta = {} < 1", p.delta()));
    }
    if !(0.0..=0.5).contains(&p.xi()) {
        r.note(format!("xi = {} outside [0, 1/2]", p.xi()));
    }
    let vals: Vec<Result<f64>> = t_grid
        .par_iter()
        .map(|&t| decreasing_ratio(p, w, t, cfg))
        .collect();
    let vals: Vec<f64> = vals.into_iter().collect::<Result<_>>()?;
    // worst normalized increase
    let mut worst = (f64::NEG_INFINITY, 0usize);
    for (i, pair) in vals.windows(2).enumerate() {
        let rise = (pair[1] - pair[0]) / pair[0].abs().max(1.0);
        if rise > worst.0 {
            worst = (rise, i);
        }
    }
    let i = worst.1;
    let witness = if t_grid.len() >= 2 {
        Witness::Interval {
            lo: t_grid[i],
            hi: t_grid[i + 1],
        }
    } else {
        Witness::Text {
            detail: "fewer than two points".into(),
        }
    };
    r.push(
        Check::le(
            "d_nonincreasing",
            worst.0.max(f64::NEG_INFINITY),
            MONOTONE_TOL,
        )
        .with_witness(witness),
    );
    if let (Some(first), Some(last)) = (vals.first(), vals.last()) {
        r.note(format!(
            "D({:e}) = {first:.6e}, D({}) = {last:.6e}",
            t_grid[0],
            t_grid[t_grid.len() - 1]
        ));
    }
    Ok(r)
}

/// `min{ (1/mu - 3 + delta(3 - 2 zeta))/4, 2/(delta + 1/mu) ((2 delta - 1)/mu - delta + 1) }`.
pub fn thm41_b_bound(p: &Params) -> f64 {
    let (mu, d, z) = (p.mu(), p.delta(), p.zeta());
    let b1 = 0.25 * (1.0 / mu - 3.0 + d * (3.0 - 2.0 * z));
    let b2 = (2.0 / (d + 1.0 / mu)) * ((2.0 * d - 1.0) / mu - d + 1.0);
    b1.min(b2)
}

/// `min{ (1/alpha + delta - 2)/2, delta(1/alpha - 1)/(1/alpha + delta - 1), (3/alpha + delta - 6)/4 }`.
pub fn thm42_b_bound(p: &Params) -> f64 {
    let (a, d) = (p.alpha(), p.delta());
    let b1 = 0.5 * (1.0 / a + d - 2.0);
    let b2 = d * (1.0 / a - 1.0) / (1.0 / a + d - 1.0);
    let b3 = 0.25 * (3.0 / a + d - 6.0);
    b1.min(b2).min(b3)
}
/// The Komatu `k` bound for `gamma = 0`. It equals the `gamma = 0` beta-type bound minus one,
/// which is what the substitution `k = B - 1` predicts.
pub fn komatu_gamma0_k_bound(p: &Params) -> f64 {
    let (a, d) = (p.alpha(), p.delta());
    let b1 = 0.5 * (1.0 / a + d - 4.0);
    let b2 = d * (1.0 / a - 1.0) / (1.0 / a + d - 1.0) - 1.0;
    let b3 = 0.25 * (3.0 / a + d - 10.0);
    b1.min(b2).min(b3)
}

fn positive(r: &mut Report, names: &[(&str, f64)]) {
    for &(n, v) in names {
        r.push(Check::flag(format!("{n}>0"), v > 0.0));
    }
}

fn zeta_range(r: &mut Report, p: &Params) {
    let xi = p.xi();
    r.push(
        Check::flag("zeta_range", (0.0..=0.5).contains(&xi)).with_witness(Witness::Interval {
            lo: 1.0 - 1.0 / p.delta(),
            hi: 1.0 - 0.5 / p.delta(),
        }),
    );
}

/// Parameter hypotheses shared by every `gamma > 0` statement.
fn gamma_pos_range(r: &mut Report, p: &Params) {
    r.push(Check::flag("gamma>0", !p.gamma_is_zero()));
    r.push(Check::ge("mu>=1/2", p.mu(), 0.5));
    r.push(Check::le("mu<=1", p.mu(), 1.0));
    r.push(Check::ge("nu>=1", p.nu(), 1.0));
    r.push(Check::ge("delta>=1", p.delta(), 1.0));
    r.push(Check::le("delta<=2", p.delta(), 2.0));
    zeta_range(r, p);
    r.push(Check::ge(
        "(2-delta)/mu>=delta/nu",
        (2.0 - p.delta()) / p.mu(),
        p.delta() / p.nu(),
    ));
    if p.delta() == 2.0 {
        r.note("delta = 2: (2-delta)/mu >= delta/nu cannot hold, the region is vacuous");
    }
}

fn gamma0_range(r: &mut Report, p: &Params) {
    r.push(Check::flag("gamma=0", p.gamma_is_zero()));
    r.push(Check::ge("alpha>=1/2", p.alpha(), 0.5));
    r.push(Check::le("alpha<=1", p.alpha(), 1.0));
    r.push(Check::ge("delta>=3", p.delta(), 3.0));
    zeta_range(r, p);
}

/// Sufficient region for the beta-type weight with `gamma > 0`.
pub fn thm41_region(p: &Params, a: f64, b: f64, c: f64) -> Report {
    let mut r = Report::new();
    positive(&mut r, &[("A", a), ("B", b), ("C", c)]);
    gamma_pos_range(&mut r, p);
    r.push(Check::ge("C>=A+B+2", c, a + b + 2.0));
    r.push(Check::le("B<=bound", b, thm41_b_bound(p)));
    r
}

/// Sufficient region for the beta-type weight with `gamma = 0`.
pub fn thm42_region(p: &Params, a: f64, b: f64, c: f64) -> Report {
    let mut r = Report::new();
    positive(&mut r, &[("A", a), ("B", b), ("C", c)]);
    gamma0_range(&mut r, p);
    r.push(Check::ge("C>=A+B+3", c, a + b + 3.0));
    r.push(Check::le("B<=bound", b, thm42_b_bound(p)));
    r
}

/// The region for either branch, chosen by `gamma`.
pub fn beta_region(p: &Params, a: f64, b: f64, c: f64) -> Report {
    if p.gamma_is_zero() {
        thm42_region(p, a, b, c)
    } else {
        thm41_region(p, a, b, c)
    }
}

pub fn hohlov_region(p: &Params, a: f64, b: f64, c: f64) -> Report {
    let mut r = Report::new();
    positive(&mut r, &[("a", a), ("b", b), ("c", c)]);
    if p.gamma_is_zero() {
        gamma0_range(&mut r, p);
        r.push(Check::ge("c>=a+b+3", c, a + b + 3.0));
        r.push(Check::le("b<=bound", b, thm42_b_bound(p)));
    } else {
        gamma_pos_range(&mut r, p);
        r.push(Check::ge("c>=a+b+2", c, a + b + 2.0));
        r.push(Check::le("b<=bound", b, thm41_b_bound(p)));
    }
    match WeightSpec::hohlov(a, b, c) {
        Ok(w) => {
            let ok = (1..64).all(|i| w.eval(i as f64 / 64.0) >= 0.0);
            r.push(Check::flag("lambda>=0", ok));
        }
        Err(e) => {
            r.push(Check::flag("lambda>=0", false).with_witness(Witness::Text {
                detail: e.to_string(),
            }));
        }
    }
    r
}

/// Carlson-Shaffer: the Hohlov region at `a = 1`, i.e. `c >= b + 3` (`gamma > 0`) or `c >= b + 4`.
pub fn cs_region(p: &Params, b: f64, c: f64) -> Report {
    hohlov_region(p, 1.0, b, c)
}

pub fn komatu_region(p: &Params, k: f64, p_exp: f64) -> Report {
    let mut r = Report::new();
    r.push(Check::flag("k>-1", k > -1.0));
    if p.gamma_is_zero() {
        gamma0_range(&mut r, p);
        r.push(Check::ge("p>=2", p_exp, 2.0));
        r.push(Check::le("k<=bound", k, komatu_gamma0_k_bound(p)));
        if p_exp < 3.0 {
            r.note("C - A - B = p - 1 >= 3 would need p >= 4 to follow from the beta-type region");
        }
    } else {
        gamma_pos_range(&mut r, p);
        r.push(Check::ge("p>=1", p_exp, 1.0));
        r.push(Check::le("k<=bound", k, thm41_b_bound(p) - 1.0));
        if p_exp < 3.0 {
            r.note("C - A - B = p - 1 >= 2 would need p >= 3 to follow from the beta-type region");
        }
    }
    r
}
