//! The sharp `beta` defined by `(beta - 1/2)/(1 - beta) = -I`, `I = int_0^1 lambda(t) q(t) dt`.
//!
//! Solving for `beta` gives `beta = (1/2 - I)/(1 - I)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::accel::euler_alternating_sum;
use crate::numerics::hypergeometric::pfq_abel;
use crate::numerics::quadrature::{try_integrate, QuadratureConfig};
use crate::params::Params;
use crate::q_functions::{q_coeff, q_pfq_parameters, q_series, DEFAULT_N_MAX};
use crate::weights::{WeightFamily, WeightSpec};

pub const DEFAULT_SERIES_TERMS: usize = 500;
/// `|1 - I|` below this is treated as a singular inversion.
const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BetaMethod {
    Quadrature,
    Series,
    ClosedForm,
}

/// How `beta` is recovered from `I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum BetaNormalization {
    /// `(beta - 1/2)/(1 - beta) = -I`, used throughout the sharpness argument.
    #[default]
    Sharp,
    /// `beta/(1 - beta) = -I`, the closed-form convention for the Hohlov, Carlson-Shaffer and Komatu cases.
    Printed,
}

impl BetaNormalization {
    pub fn invert(self, integral: f64) -> Result<f64> {
        let den = 1.0 - integral;
        if !integral.is_finite() || den.abs() <= SINGULAR_TOL {
            return Err(Error::SingularInversion { integral });
        }
        Ok(match self {
            BetaNormalization::Sharp => (0.5 - integral) / den,
            BetaNormalization::Printed => -integral / den,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaResult {
    pub beta: f64,
    /// `I = int lambda q`
    pub integral: f64,
    pub method: BetaMethod,
    /// Quadrature error estimate, or the last accelerated term for series paths.
    pub error_estimate: f64,
    /// Quadrature level or number of terms consumed.
    pub work: usize,
}

impl BetaResult {
    /// `beta` under the `beta/(1 - beta) = -I` normalization.
    pub fn printed_normalization(&self) -> Result<f64> {
        BetaNormalization::Printed.invert(self.integral)
    }
}

/// `beta = (1/2 - I)/(1 - I)`.
pub fn beta_from_integral(integral: f64) -> Result<f64> {
    BetaNormalization::Sharp.invert(integral)
}

/// `I` by quadrature of `lambda(t) q(t)` with `q` from its series.
///
/// When `lambda ~ t^rho` with `rho < 0` the substitution `t = u^(1/(rho+1))` removes the
/// endpoint singularity; without it most of the mass for `rho` near `-1` sits below the
/// smallest double.
pub fn solve_beta(p: &Params, w: &WeightSpec, cfg: &QuadratureConfig) -> Result<BetaResult> {
    let rho = w.origin_exponent();
    let q = if rho < 0.0 {
        let k = 1.0 / (rho + 1.0);
        try_integrate(
            |u| {
                let ln_t = k * u.ln();
                let t = ln_t.exp();
                Ok(k * w.eval_regular(t, ln_t) * q_series(p, t, DEFAULT_N_MAX)?.value)
            },
            cfg,
        )?
    } else {
        try_integrate(
            |t| Ok(w.eval(t) * q_series(p, t, DEFAULT_N_MAX)?.value),
            cfg,
        )?
    };
    Ok(BetaResult {
        beta: beta_from_integral(q.value)?,
        integral: q.value,
        method: BetaMethod::Quadrature,
        error_estimate: q.error,
        work: q.level as usize,
    })
}

/// `I = sum_n q_n tau_n`, an alternating series in the moments, Euler-accelerated.
/// `n_max` counts the terms after the constant one.
pub fn beta_series(p: &Params, w: &WeightSpec, n_max: usize) -> Result<BetaResult> {
    let tau = w.moments(n_max + 1);
    let s = euler_alternating_sum(|n| q_coeff(p, n).abs() * tau[n], n_max + 1, 50, 1e-15);
    if !s.converged {
        return Err(Error::NonConvergent {
            terms: s.terms,
            last_term: s.last_term,
        });
    }
    let integral = s.value.re;
    Ok(BetaResult {
        beta: beta_from_integral(integral)?,
        integral,
        method: BetaMethod::Series,
        error_estimate: s.last_term,
        work: s.terms,
    })
}

/// `6F5(1, b, 1+delta, 2-xi, delta/mu, delta/nu; c, delta, 1-xi, 1+delta/mu, 1+delta/nu; -1)`,
/// which equals `I` for the Carlson-Shaffer weight `cs:b,c`. With `gamma = 0` the
/// `delta/mu` pair drops out.
pub fn cs_hypergeometric(p: &Params, b: f64, c: f64, tol: f64) -> Result<f64> {
    let (mut num, mut den) = q_pfq_parameters(p);
    num.insert(1, b);
    den.insert(0, c);
    pfq_abel(&num, &den, -1.0, tol)
}

/// Closed-form `beta_0` for the Carlson-Shaffer weight.
pub fn beta0_cs(p: &Params, b: f64, c: f64, norm: BetaNormalization) -> Result<BetaResult> {
    let integral = cs_hypergeometric(p, b, c, 1e-15)?;
    Ok(BetaResult {
        beta: norm.invert(integral)?,
        integral,
        method: BetaMethod::ClosedForm,
        error_estimate: 0.0,
        work: 0,
    })
}

/// The closed form when the weight admits one.
pub fn closed_form(
    p: &Params,
    w: &WeightSpec,
    norm: BetaNormalization,
) -> Option<Result<BetaResult>> {
    match w.family() {
        WeightFamily::CarlsonShaffer { b, c } => Some(beta0_cs(p, *b, *c, norm)),
        WeightFamily::Hohlov { a, b, c } if *a == 1.0 => Some(beta0_cs(p, *b, *c, norm)),
        _ => None,
    }
}
