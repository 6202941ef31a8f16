//! Truncated complex power series.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::accel::euler_power_sum;
use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 256;

/// `sum_{n < order} coeffs[n] z^n`. Binary operations truncate to the shorter order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

fn check(coeffs: &[Complex64], context: &'static str) -> Result<()> {
    match coeffs
        .iter()
        .position(|c| !c.re.is_finite() || !c.im.is_finite())
    {
        Some(index) => Err(Error::PrecisionLoss { context, index }),
        None => Ok(()),
    }
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self {
            coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    /// Builds `sum f(n) z^n` for `n < order`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        Self {
            coeffs: (0..order).map(f).collect(),
        }
    }

    pub fn zeros(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zeros(order);
        if order > 0 {
            s.coeffs[0] = Complex64::new(1.0, 0.0);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            coeffs: self.coeffs.iter().take(order).copied().collect(),
        }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        }
    }

    /// Multiplies by `z`, dropping the top coefficient.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.order());
        if self.order() > 0 {
            coeffs.push(Complex64::new(0.0, 0.0));
            coeffs.extend_from_slice(&self.coeffs[..self.order() - 1]);
        }
        Self { coeffs }
    }

    /// Formal derivative; the result is one shorter.
    pub fn derivative(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &c)| c * n as f64)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, &a) in self.coeffs.iter().take(n).enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        check(&out, "series_mul")?;
        Ok(Self { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        let b0 = other.coeff(0);
        if n > 0 && b0 == Complex64::new(0.0, 0.0) {
            return Err(Error::InvalidParams(
                "series division by a series with zero constant term".into(),
            ));
        }
        let mut q = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= other.coeffs[j] * q[k - j];
            }
            q.push(acc / b0);
        }
        check(&q, "series_div")?;
        Ok(Self { coeffs: q })
    }

    fn require_unit(&self, op: &str) -> Result<()> {
        if self.order() > 0 && (self.coeffs[0] - 1.0).norm() > 1e-14 {
            return Err(Error::InvalidParams(format!(
                "{op} needs constant term 1, got {}",
                self.coeffs[0]
            )));
        }
        Ok(())
    }

    pub fn log(&self) -> Result<Self> {
        self.require_unit("series_log")?;
        let n = self.order();
        let mut l = vec![Complex64::new(0.0, 0.0); n];
        for k in 1..n {
            let mut acc = self.coeffs[k] * k as f64;
            for (j, lj) in l.iter().enumerate().take(k).skip(1) {
                acc -= lj * j as f64 * self.coeffs[k - j];
            }
            l[k] = acc / k as f64;
        }
        check(&l, "series_log")?;
        Ok(Self { coeffs: l })
    }

    pub fn exp(&self) -> Result<Self> {
        let n = self.order();
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        if n == 0 {
            return Ok(Self { coeffs: e });
        }
        e[0] = self.coeffs[0].exp();
        for k in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeffs[j] * j as f64 * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        check(&e, "series_exp")?;
        Ok(Self { coeffs: e })
    }

    /// `s^p` for `s_0 = 1`, equal to `exp(p log s)`; computed by the Miller recurrence
    /// `n q_n = sum_{k=1}^n ((p + 1) k - n) s_k q_{n-k}`.
    pub fn pow(&self, p: f64) -> Result<Self> {
        self.require_unit("series_pow")?;
        let n = self.order();
        let mut q = vec![Complex64::new(0.0, 0.0); n];
        if n == 0 {
            return Ok(Self { coeffs: q });
        }
        q[0] = Complex64::new(1.0, 0.0);
        for m in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=m {
                acc += self.coeffs[k] * q[m - k] * ((p + 1.0) * k as f64 - m as f64);
            }
            q[m] = acc / m as f64;
        }
        check(&q, "series_pow")?;
        Ok(Self { coeffs: q })
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Evaluation with the tail Euler-transformed, for points close to the unit circle
    /// where the truncated sum has not settled. `raw` leading terms are summed directly.
    pub fn eval_accelerated(&self, z: Complex64, raw: usize, tol: f64) -> Complex64 {
        euler_power_sum(|n| self.coeffs[n], self.order(), z, raw, tol).value
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        PowerSeries::from_fn(n, |k| self.coeffs[k] + rhs.coeffs[k])
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().min(rhs.order());
        PowerSeries::from_fn(n, |k| self.coeffs[k] - rhs.coeffs[k])
    }
}

impl Mul<f64> for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: f64) -> PowerSeries {
        self.scale(Complex64::new(rhs, 0.0))
    }
}
