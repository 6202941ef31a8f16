//! Double-exponential (tanh-sinh) quadrature on the unit interval.
//!
//! The substitution `t = 1 / (1 + exp(-pi sinh s))` maps the real line onto (0, 1) and
//! makes algebraic `t^(p-1)` and logarithmic `log(1/t)^q` endpoint behaviour decay
//! double-exponentially in `s`, so one rule covers every weight family used by the crate.
//! Levels halve the step `h = 2^-L` and reuse all earlier nodes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `pi sinh(S_MAX)` stays just below the `exp` overflow threshold, so the smallest node is
/// about 1e-304.
const S_MAX: f64 = 6.1;
const MIN_LEVEL: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_level: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_level: 10,
        }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_level: u32) -> Result<Self> {
        let cfg = Self {
            abs_tol,
            rel_tol,
            max_level,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParams(format!(
                "quadrature tolerances must be positive (abs_tol {}, rel_tol {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_level < MIN_LEVEL {
            return Err(Error::InvalidParams(format!(
                "max_level must be at least {MIN_LEVEL}, got {}",
                self.max_level
            )));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// A converged quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    /// `|I_L - I_(L-1)|` at the final level, which overstates the true error once the
    /// rule is in its double-exponential regime.
    pub error: f64,
    pub level: u32,
    pub evals: usize,
}

/// Node and Jacobian-weighted mass of the DE rule at abscissa `s` for step `h`.
/// Returns `None` when the node rounds onto an endpoint.
#[inline]
fn node(s: f64, h: f64) -> Option<(f64, f64)> {
    let u = std::f64::consts::PI * s.sinh();
    let e = (-u).exp();
    let t = 1.0 / (1.0 + e);
    if t <= 0.0 || t >= 1.0 {
        return None;
    }
    // t (1 - t) = e / (1 + e)^2
    let w = h * std::f64::consts::PI * s.cosh() * e / ((1.0 + e) * (1.0 + e));
    if w == 0.0 || !w.is_finite() {
        return None;
    }
    Some((t, w))
}

/// Integrates `n` functions sharing one set of nodes; `f(t, out)` fills `out[..n]`.
///
/// Every component must meet the tolerance before the refinement stops. This is how
/// expensive per-node quantities (such as nested integrals) are shared across many
/// integrands.
pub fn integrate_batch<F>(n: usize, mut f: F, cfg: &QuadratureConfig) -> Result<Vec<Quadrature>>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    cfg.validate()?;
    let mut buf = vec![0.0; n];
    let mut sums = vec![0.0; n];
    let mut evals = 0usize;

    let mut eval_at = |s: f64, h: f64, sums: &mut [f64], evals: &mut usize| -> Result<()> {
        if let Some((t, w)) = node(s, h) {
            buf.iter_mut().for_each(|b| *b = 0.0);
            f(t, &mut buf)?;
            *evals += 1;
            for (acc, &v) in sums.iter_mut().zip(buf.iter()) {
                if !v.is_finite() {
                    return Err(Error::NonFiniteIntegrand { t });
                }
                *acc += w * v;
            }
        }
        Ok(())
    };

    // level 0: h = 1, integer abscissae
    let k_max = S_MAX.floor() as i64;
    for k in -k_max..=k_max {
        eval_at(k as f64, 1.0, &mut sums, &mut evals)?;
    }
    let mut prev = sums.clone();
    let mut h = 1.0;
    let mut errors = vec![f64::INFINITY; n];
    for level in 1..=cfg.max_level {
        h *= 0.5;
        // the previous sum carries weights scaled by 2h; halve it and add the odd nodes
        let mut next: Vec<f64> = prev.iter().map(|v| 0.5 * v).collect();
        let m_max = (S_MAX / h).floor() as i64;
        let mut m = -m_max;
        if m % 2 == 0 {
            m += 1;
        }
        while m <= m_max {
            eval_at(m as f64 * h, h, &mut next, &mut evals)?;
            m += 2;
        }
        let mut done = level >= MIN_LEVEL;
        for i in 0..n {
            errors[i] = (next[i] - prev[i]).abs();
            if errors[i] > cfg.target(next[i]) {
                done = false;
            }
        }
        prev = next;
        if done {
            return Ok(prev
                .iter()
                .zip(errors.iter())
                .map(|(&value, &error)| Quadrature {
                    value,
                    error,
                    level,
                    evals,
                })
                .collect());
        }
    }
    let worst = (0..n)
        .max_by(|&a, &b| {
            let ra = errors[a] / cfg.target(prev[a]);
            let rb = errors[b] / cfg.target(prev[b]);
            ra.total_cmp(&rb)
        })
        .unwrap_or(0);
    Err(Error::ToleranceNotMet {
        value: prev.get(worst).copied().unwrap_or(f64::NAN),
        error: errors.get(worst).copied().unwrap_or(f64::NAN),
        level: cfg.max_level,
    })
}

/// Fallible scalar integrand over (0, 1).
pub fn try_integrate<F>(mut f: F, cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut out = integrate_batch(
        1,
        |t, buf| {
            buf[0] = f(t)?;
            Ok(())
        },
        cfg,
    )?;
    Ok(out.remove(0))
}

/// Integrates `f` over (0, 1). Nodes never touch the endpoints.
pub fn integrate<F>(f: F, cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    try_integrate(|t| Ok(f(t)), cfg)
}

/// Integrates `f` over (a, b) by the affine map `t = a + (b - a) x`.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    let len = b - a;
    let q = integrate(|x| f(a + len * x), cfg)?;
    Ok(Quadrature {
        value: q.value * len,
        error: q.error * len.abs(),
        ..q
    })
}

/// Iterated integral over the unit square, inner variable `v`.
pub fn try_integrate2d<F>(mut f: F, cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let mut inner_err: f64 = 0.0;
    let mut inner_evals = 0usize;
    let outer = try_integrate(
        |u| {
            let q = try_integrate(|v| f(u, v), cfg)?;
            inner_err = inner_err.max(q.error);
            inner_evals += q.evals;
            Ok(q.value)
        },
        cfg,
    )?;
    Ok(Quadrature {
        error: outer.error + inner_err,
        evals: inner_evals,
        ..outer
    })
}

pub fn integrate2d<F>(f: F, cfg: &QuadratureConfig) -> Result<Quadrature>
where
    F: Fn(f64, f64) -> f64,
{
    try_integrate2d(|u, v| Ok(f(u, v)), cfg)
}
