//! Generalized hypergeometric series `pFq(num; den; z)` for real `z` in [-1, 0].

use num_complex::Complex64;

use super::accel::euler_power_sum;
use super::special::is_nonpositive_integer;
use crate::error::{Error, Result};

const MAX_TERMS: usize = 200_000;
/// Raw terms summed before the Euler transform takes over near the unit circle.
const EULER_RAW: usize = 50;
const EULER_MAX: usize = 20_000;

/// Coefficients `prod (num_i)_n / (prod (den_j)_n n!)` by term-ratio recursion.
#[derive(Debug, Clone)]
pub struct PfqCoefficients<'a> {
    num: &'a [f64],
    den: &'a [f64],
    n: usize,
    current: f64,
}

impl<'a> PfqCoefficients<'a> {
    pub fn new(num: &'a [f64], den: &'a [f64]) -> Self {
        Self {
            num,
            den,
            n: 0,
            current: 1.0,
        }
    }
}

impl Iterator for PfqCoefficients<'_> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let out = self.current;
        let k = self.n as f64;
        let mut ratio = 1.0 / (k + 1.0);
        for &a in self.num {
            ratio *= a + k;
        }
        for &b in self.den {
            ratio /= b + k;
        }
        self.current *= ratio;
        self.n += 1;
        Some(out)
    }
}

fn validate(num: &[f64], den: &[f64], z: f64) -> Result<()> {
    if num.len() > den.len() + 1 {
        return Err(Error::InvalidParams(format!(
            "pFq needs p <= q + 1, got p = {}, q = {}",
            num.len(),
            den.len()
        )));
    }
    if let Some(b) = den.iter().find(|&&b| is_nonpositive_integer(b)) {
        return Err(Error::InvalidParams(format!(
            "denominator parameter {b} is a pole"
        )));
    }
    if num.iter().chain(den).any(|x| !x.is_finite()) || !z.is_finite() {
        return Err(Error::InvalidParams("non-finite pFq parameter".into()));
    }
    if num.len() == den.len() + 1 && !(-1.0..=0.0).contains(&z) {
        return Err(Error::InvalidParams(format!("z = {z} outside [-1, 0]")));
    }
    Ok(())
}

/// Parameter excess `sum den - sum num`; the `p = q + 1` series at `z = -1` converges
/// (conditionally) only when this exceeds -1.
pub fn parameter_gap(num: &[f64], den: &[f64]) -> f64 {
    den.iter().sum::<f64>() - num.iter().sum::<f64>()
}

/// `pFq(num; den; z)` to within `tol`.
///
/// Terminating series (some numerator parameter a nonpositive integer) are summed exactly.
pub fn pfq(num: &[f64], den: &[f64], z: f64, tol: f64) -> Result<f64> {
    validate(num, den, z)?;
    if num.len() == den.len() + 1 && z == -1.0 && parameter_gap(num, den) <= -1.0 {
        return Err(Error::InvalidParams(format!(
            "series diverges at z = -1: sum(den) - sum(num) = {} <= -1",
            parameter_gap(num, den)
        )));
    }
    sum_series(num, den, z, tol)
}

/// Abel (Euler) value of `pFq` at `z = -1` when the ordinary series diverges with
/// polynomially growing terms. Agrees with [`pfq`] whenever the latter converges.
pub fn pfq_abel(num: &[f64], den: &[f64], z: f64, tol: f64) -> Result<f64> {
    validate(num, den, z)?;
    sum_series(num, den, z, tol)
}

fn sum_series(num: &[f64], den: &[f64], z: f64, tol: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(1.0);
    }
    let terminating = num.iter().any(|&a| is_nonpositive_integer(a));
    if z.abs() > 0.9 && !terminating {
        let mut coeffs = PfqCoefficients::new(num, den);
        let s = euler_power_sum(
            |_| Complex64::new(coeffs.next().unwrap_or(0.0), 0.0),
            EULER_MAX,
            Complex64::new(z, 0.0),
            EULER_RAW,
            tol,
        );
        if !s.converged || !s.value.re.is_finite() {
            return Err(Error::NonConvergent {
                terms: s.terms,
                last_term: s.last_term,
            });
        }
        return Ok(s.value.re);
    }

    let mut sum = 0.0;
    let mut zn = 1.0;
    let mut small = 0;
    let mut last = f64::INFINITY;
    for (n, c) in PfqCoefficients::new(num, den).enumerate().take(MAX_TERMS) {
        let term = c * zn;
        if !term.is_finite() {
            return Err(Error::NonConvergent {
                terms: n,
                last_term: term.abs(),
            });
        }
        sum += term;
        zn *= z;
        last = term.abs();
        if term == 0.0 && n > 0 {
            return Ok(sum);
        }
        if last <= tol * sum.abs().max(1.0) {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergent {
        terms: MAX_TERMS,
        last_term: last,
    })
}
