//! The function `q(t)` against which the weight is integrated to obtain the sharp `beta`.
//!
//! With `g(s) = (1 - 1/delta) g0(s) + (1/delta) g1(s)` built from
//! [`psi0`](crate::kernels::psi0) and [`psi1`](crate::kernels::psi1), `q` solves
//! `d/dt (t^(delta/nu) q) = (delta^2 / (mu nu)) t^(delta/nu - 1) int_0^1 g(st) s^(delta/mu - 1) ds`
//! (or its one-factor analogue when `gamma = 0`) with `q(0) = 1`. Three independent
//! evaluations are provided: the integral solution, the power series, and the
//! hypergeometric form.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{psi0, psi1};
use crate::numerics::accel::euler_power_sum;
use crate::numerics::hypergeometric::{pfq, pfq_abel};
use crate::numerics::quadrature::{integrate, try_integrate, QuadratureConfig};
use crate::params::Params;
use crate::report::{Check, Report, Witness};

pub const DEFAULT_N_MAX: usize = 20_000;
const EULER_RAW: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QMethod {
    Integral,
    Series,
    Pfq,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QEval {
    pub value: f64,
    pub t: f64,
    pub method: QMethod,
}

fn check_domain(p: &Params, t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParams(format!("t = {t} outside [0, 1]")));
    }
    if p.xi() >= 1.0 {
        return Err(Error::InvalidParams(format!(
            "q needs xi < 1, got {}",
            p.xi()
        )));
    }
    Ok(())
}

/// The bracket `(1 - 1/delta) g0(s) + (1/delta) g1(s)`.
pub fn g_combo(p: &Params, s: f64) -> f64 {
    let d = p.delta();
    (1.0 - 1.0 / d) * psi0(p.xi(), s) + psi1(p.xi(), s) / d
}

/// Signed series coefficient
/// `q_n = delta (n + delta)(n + 1 - xi)(-1)^n / ((1 - xi)(delta + n nu)(delta + n mu))`.
pub fn q_coeff(p: &Params, n: usize) -> f64 {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * q_coeff_abs(p, n)
}

fn q_coeff_abs(p: &Params, n: usize) -> f64 {
    let d = p.delta();
    let xi = p.xi();
    let m = n as f64;
    d * (m + d) * (m + 1.0 - xi) / ((1.0 - xi) * (d + m * p.nu()) * (d + m * p.mu()))
}

/// `q(t) = (delta/alpha) int_0^1 g(tx) x^(delta/alpha - 1) dx` for `gamma = 0`.
pub fn q_gamma0(p: &Params, t: f64, cfg: &QuadratureConfig) -> Result<QEval> {
    check_domain(p, t)?;
    if !p.gamma_is_zero() {
        return Err(Error::InvalidParams("q_gamma0 needs gamma = 0".into()));
    }
    if p.alpha() <= 0.0 {
        return Err(Error::InvalidParams("q_gamma0 needs alpha > 0".into()));
    }
    let value = if t == 0.0 {
        1.0
    } else {
        let e = p.delta() / p.alpha();
        e * integrate(|x| g_combo(p, t * x) * x.powf(e - 1.0), cfg)?.value
    };
    Ok(QEval {
        value,
        t,
        method: QMethod::Integral,
    })
}

/// `q(t) = (delta^2/(mu nu)) int int g(trs) r^(delta/nu - 1) s^(delta/mu - 1) dr ds`.
pub fn q_gamma_pos(p: &Params, t: f64, cfg: &QuadratureConfig) -> Result<QEval> {
    check_domain(p, t)?;
    if p.gamma_is_zero() || p.mu() <= 0.0 {
        return Err(Error::InvalidParams("q_gamma_pos needs gamma > 0".into()));
    }
    if t == 0.0 {
        return Ok(QEval {
            value: 1.0,
            t,
            method: QMethod::Integral,
        });
    }
    let d = p.delta();
    let (er, es) = (d / p.nu() - 1.0, d / p.mu() - 1.0);
    let outer = try_integrate(
        |r| {
            let inner = integrate(|s| g_combo(p, t * r * s) * s.powf(es), cfg)?;
            Ok(inner.value * r.powf(er))
        },
        cfg,
    )?;
    Ok(QEval {
        value: d * d / (p.mu() * p.nu()) * outer.value,
        t,
        method: QMethod::Integral,
    })
}

/// Integral solution for either branch.
pub fn q_integral(p: &Params, t: f64, cfg: &QuadratureConfig) -> Result<QEval> {
    if p.gamma_is_zero() {
        q_gamma0(p, t, cfg)
    } else {
        q_gamma_pos(p, t, cfg)
    }
}

/// Power series in `t`, Euler-accelerated for `t > 0.9`. At `t = 1` the terms need not decay
/// and the value is the Abel sum, which is the limit of `q(t)` as `t -> 1`.
pub fn q_series(p: &Params, t: f64, n_max: usize) -> Result<QEval> {
    check_domain(p, t)?;
    let value = if t == 0.0 {
        1.0
    } else if t > 0.9 {
        let s = euler_power_sum(
            |n| Complex64::new(q_coeff_abs(p, n), 0.0),
            n_max,
            Complex64::new(-t, 0.0),
            EULER_RAW,
            1e-16,
        );
        if !s.converged {
            return Err(Error::NonConvergent {
                terms: s.terms,
                last_term: s.last_term,
            });
        }
        s.value.re
    } else {
        let mut sum = 0.0;
        let mut tn = 1.0;
        let mut small = 0;
        let mut done = false;
        let mut last = f64::INFINITY;
        for n in 0..n_max {
            let term = q_coeff(p, n) * tn;
            sum += term;
            tn *= t;
            last = term.abs();
            if last <= 1e-17 * sum.abs().max(1.0) {
                small += 1;
                if small >= 2 {
                    done = true;
                    break;
                }
            } else {
                small = 0;
            }
        }
        if !done {
            return Err(Error::NonConvergent {
                terms: n_max,
                last_term: last,
            });
        }
        sum
    };
    Ok(QEval {
        value,
        t,
        method: QMethod::Series,
    })
}

/// Hypergeometric parameters: `5F4(1, 1+delta, 2-xi, delta/mu, delta/nu; delta, 1-xi,
/// 1+delta/mu, 1+delta/nu; -t)` for `gamma > 0`. For `gamma = 0` the `delta/mu` pair cancels
/// in the limit `mu -> 0`, leaving the corresponding `4F3`.
pub fn q_pfq_parameters(p: &Params) -> (Vec<f64>, Vec<f64>) {
    let d = p.delta();
    let xi = p.xi();
    let mut num = vec![1.0, 1.0 + d, 2.0 - xi];
    let mut den = vec![d, 1.0 - xi];
    if !p.gamma_is_zero() {
        num.push(d / p.mu());
        den.push(1.0 + d / p.mu());
    }
    num.push(d / p.nu());
    den.push(1.0 + d / p.nu());
    (num, den)
}

pub fn q_pfq(p: &Params, t: f64, tol: f64) -> Result<QEval> {
    check_domain(p, t)?;
    if p.nu() <= 0.0 {
        return Err(Error::InvalidParams("q_pfq needs nu > 0".into()));
    }
    let (num, den) = q_pfq_parameters(p);
    // sum(den) - sum(num) = -1 exactly, so t = 1 is only Abel summable
    let value = if t == 1.0 {
        pfq_abel(&num, &den, -1.0, tol)?
    } else {
        pfq(&num, &den, -t, tol)?
    };
    Ok(QEval {
        value,
        t,
        method: QMethod::Pfq,
    })
}

/// Right side of the defining differential equation for `d/dt (t^(delta/nu) q(t))`.
pub fn q_ode_rhs(p: &Params, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let d = p.delta();
    let e = d / p.nu();
    if p.gamma_is_zero() {
        Ok(e * t.powf(e - 1.0) * g_combo(p, t))
    } else {
        let es = d / p.mu() - 1.0;
        let inner = integrate(|s| g_combo(p, s * t) * s.powf(es), cfg)?;
        Ok(d * d / (p.mu() * p.nu()) * t.powf(e - 1.0) * inner.value)
    }
}

/// `|central difference of t^(delta/nu) q(t) - ode_rhs|` using the series for `q`.
pub fn q_ode_residual(p: &Params, t: f64, h: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let e = p.delta() / p.nu();
    let f = |s: f64| -> Result<f64> { Ok(s.powf(e) * q_series(p, s, DEFAULT_N_MAX)?.value) };
    let fd = (f(t + h)? - f(t - h)?) / (2.0 * h);
    Ok((fd - q_ode_rhs(p, t, cfg)?).abs())
}

/// Diagnostic: is `q` nonincreasing on an `n`-point grid of [0, 1]? Report only.
pub fn q_monotone_report(p: &Params, n: usize) -> Result<Report> {
    let mut worst = f64::NEG_INFINITY;
    let mut at = 0.0;
    let mut prev = q_series(p, 0.0, DEFAULT_N_MAX)?.value;
    for k in 1..n.max(2) {
        let t = k as f64 / (n.max(2) - 1) as f64;
        let v = q_series(p, t, DEFAULT_N_MAX)?.value;
        if v - prev > worst {
            worst = v - prev;
            at = t;
        }
        prev = v;
    }
    let mut r = Report::new();
    r.push(Check::le("q_max_increment", worst, 1e-12).with_witness(Witness::T { t: at }));
    r.note("monotonicity of q in t is an observed property, not a hypothesis");
    Ok(r)
}
