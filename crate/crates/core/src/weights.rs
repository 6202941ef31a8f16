//! Weight families `lambda(t)` on (0, 1), their moments, derivatives and the integrals
//! `Lambda_nu(t) = int_t^1 lambda(s) s^(-delta/nu) ds` and
//! `Pi(t) = int_t^1 Lambda_nu(s) s^(-(delta/mu - delta/nu) - 1) ds`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate, try_integrate, QuadratureConfig};
use crate::numerics::special::{beta, gamma};
use crate::params::Params;
use crate::report::{Check, Report, Witness};

/// Number of `omega` coefficients kept for the Hohlov family.
pub const HOHLOV_TERMS: usize = 128;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightFamily {
    /// `K t^(B-1) (1-t)^(C-A-B) omega(1-t)`, `omega(u) = 1 + sum_n x_n u^n`.
    GeneralBeta {
        a: f64,
        b: f64,
        c: f64,
        omega: Vec<f64>,
    },
    Hohlov {
        a: f64,
        b: f64,
        c: f64,
    },
    CarlsonShaffer {
        b: f64,
        c: f64,
    },
    /// `((1+k)^p / Gamma(p)) t^k (log 1/t)^(p-1)`.
    Komatu {
        k: f64,
        p: f64,
    },
}

/// Beta-type realization shared by the first three families.
#[derive(Debug, Clone, PartialEq, Serialize)]
struct BetaForm {
    b: f64,
    /// `C - A - B`
    e: f64,
    /// `x_0 = 1, x_1, ..., x_M`
    x: Vec<f64>,
    k: f64,
    /// Estimated share of the normalization sum lost to truncating `omega`.
    tail: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
enum Form {
    Beta(BetaForm),
    Komatu { k: f64, p: f64, kconst: f64 },
}

/// A validated, normalized weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightSpec {
    family: WeightFamily,
    #[serde(skip)]
    form: Form,
    /// Normalization constant `K`.
    pub k_norm: f64,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidWeight(msg.into())
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

/// `omega` coefficients of `2F1(c - a, 1 - a; c - a - b + 1; u)`, truncated; terminating
/// when `1 - a` is a nonpositive integer.
fn hohlov_omega(a: f64, b: f64, c: f64) -> Result<Vec<f64>> {
    let d = c - a - b + 1.0;
    if d <= 0.0 {
        return Err(invalid(format!(
            "hohlov needs c - a - b > -1, got {}",
            c - a - b
        )));
    }
    let mut x = vec![1.0];
    let mut cur = 1.0;
    for n in 0..HOHLOV_TERMS {
        let m = n as f64;
        cur *= (c - a + m) * (1.0 - a + m) / ((d + m) * (m + 1.0));
        if cur == 0.0 {
            break;
        }
        if cur < 0.0 {
            return Err(invalid(format!(
                "hohlov omega coefficient x_{} = {cur:e} is negative (a = {a}, b = {b}, c = {c})",
                n + 1
            )));
        }
        x.push(cur);
    }
    Ok(x)
}

impl BetaForm {
    fn new(b: f64, e: f64, x: Vec<f64>, tail_rate: Option<f64>) -> Result<Self> {
        let inv: f64 = x
            .iter()
            .enumerate()
            .map(|(j, &xj)| xj * beta(b, e + 1.0 + j as f64))
            .sum();
        if !(inv.is_finite() && inv > 0.0) {
            return Err(invalid(format!("normalization sum is {inv}")));
        }
        let tail = match (tail_rate, x.len()) {
            (Some(rate), m) if m > 1 => {
                let last = x[m - 1] * beta(b, e + m as f64);
                last * (m as f64) / rate.max(1e-3) / inv
            }
            _ => 0.0,
        };
        Ok(Self {
            b,
            e,
            x,
            k: 1.0 / inv,
            tail,
        })
    }

    /// `omega(u), omega'(u), omega''(u)`
    fn omega(&self, u: f64) -> (f64, f64, f64) {
        let (mut w0, mut w1, mut w2) = (0.0, 0.0, 0.0);
        // Horner for the value and both derivatives
        for &xj in self.x.iter().rev() {
            w2 = w2 * u + 2.0 * w1;
            w1 = w1 * u + w0;
            w0 = w0 * u + xj;
        }
        (w0, w1, w2)
    }

    fn eval(&self, t: f64) -> f64 {
        let u = 1.0 - t;
        self.k * t.powf(self.b - 1.0) * u.powf(self.e) * self.omega(u).0
    }

    /// `tau_n = K sum_j x_j B(B + n, e + 1 + j)` for `n < count`.
    fn moments(&self, count: usize) -> Vec<f64> {
        let mut out = vec![0.0; count];
        for (j, &xj) in self.x.iter().enumerate() {
            let y = self.e + 1.0 + j as f64;
            let mut bval = beta(self.b, y);
            for (n, slot) in out.iter_mut().enumerate() {
                *slot += self.k * xj * bval;
                let bn = self.b + n as f64;
                bval *= bn / (bn + y);
            }
        }
        out
    }
}

impl WeightSpec {
    pub fn new(family: WeightFamily) -> Result<Self> {
        let form = match &family {
            WeightFamily::GeneralBeta { a, b, c, omega } => {
                positive("A", *a)?;
                positive("B", *b)?;
                positive("C", *c)?;
                let e = c - a - b;
                if e <= 0.0 {
                    return Err(invalid(format!("genbeta needs C - A - B > 0, got {e}")));
                }
                if let Some((n, x)) = omega
                    .iter()
                    .enumerate()
                    .find(|(_, x)| !(x.is_finite() && **x >= 0.0))
                {
                    return Err(invalid(format!(
                        "omega coefficient x_{} = {x} must be >= 0",
                        n + 1
                    )));
                }
                let mut x = vec![1.0];
                x.extend_from_slice(omega);
                Form::Beta(BetaForm::new(*b, e, x, None)?)
            }
            WeightFamily::Hohlov { a, b, c } => {
                positive("a", *a)?;
                positive("b", *b)?;
                positive("c", *c)?;
                let x = hohlov_omega(*a, *b, *c)?;
                let rate = if x.len() > HOHLOV_TERMS {
                    Some(*a)
                } else {
                    None
                };
                Form::Beta(BetaForm::new(*b, c - a - b, x, rate)?)
            }
            WeightFamily::CarlsonShaffer { b, c } => {
                positive("b", *b)?;
                positive("c", *c)?;
                if c - b - 1.0 <= -1.0 {
                    return Err(invalid(format!("cs needs c > b, got b = {b}, c = {c}")));
                }
                Form::Beta(BetaForm::new(*b, c - 1.0 - b, vec![1.0], None)?)
            }
            WeightFamily::Komatu { k, p } => {
                if !(k.is_finite() && *k > -1.0) {
                    return Err(invalid(format!("komatu needs k > -1, got {k}")));
                }
                if !(p.is_finite() && *p >= 1.0) {
                    return Err(invalid(format!("komatu needs p >= 1, got {p}")));
                }
                let kconst = ((1.0 + k).ln() * p).exp() / gamma(*p);
                Form::Komatu {
                    k: *k,
                    p: *p,
                    kconst,
                }
            }
        };
        let k_norm = match &form {
            Form::Beta(bf) => bf.k,
            Form::Komatu { kconst, .. } => *kconst,
        };
        Ok(Self {
            family,
            form,
            k_norm,
        })
    }

    pub fn komatu(k: f64, p: f64) -> Result<Self> {
        Self::new(WeightFamily::Komatu { k, p })
    }

    pub fn hohlov(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(WeightFamily::Hohlov { a, b, c })
    }

    pub fn carlson_shaffer(b: f64, c: f64) -> Result<Self> {
        Self::new(WeightFamily::CarlsonShaffer { b, c })
    }

    pub fn general_beta(a: f64, b: f64, c: f64, omega: Vec<f64>) -> Result<Self> {
        Self::new(WeightFamily::GeneralBeta { a, b, c, omega })
    }

    pub fn family(&self) -> &WeightFamily {
        &self.family
    }

    /// `(A, B, C)` of the beta-type representation, if any.
    pub fn abc(&self) -> Option<(f64, f64, f64)> {
        match &self.family {
            WeightFamily::GeneralBeta { a, b, c, .. } | WeightFamily::Hohlov { a, b, c } => {
                Some((*a, *b, *c))
            }
            WeightFamily::CarlsonShaffer { b, c } => Some((1.0, *b, *c)),
            WeightFamily::Komatu { .. } => None,
        }
    }

    /// `omega` coefficients `x_0 = 1, x_1, ...` of the beta-type representation.
    pub fn omega_coeffs(&self) -> Option<&[f64]> {
        match &self.form {
            Form::Beta(bf) => Some(&bf.x),
            Form::Komatu { .. } => None,
        }
    }

    /// Relative size of the truncated `omega` tail (nonzero only for truncated Hohlov).
    pub fn omega_tail(&self) -> f64 {
        match &self.form {
            Form::Beta(bf) => bf.tail,
            Form::Komatu { .. } => 0.0,
        }
    }

    /// `Gamma(c) / (Gamma(a) Gamma(b) Gamma(c - a - b + 1))` for Hohlov and Carlson-Shaffer.
    pub fn hohlov_constant(&self) -> Option<f64> {
        let (a, b, c) = match &self.family {
            WeightFamily::Hohlov { a, b, c } => (*a, *b, *c),
            WeightFamily::CarlsonShaffer { b, c } => (1.0, *b, *c),
            _ => return None,
        };
        Some(gamma(c) / (gamma(a) * gamma(b) * gamma(c - a - b + 1.0)))
    }

    /// Exponent `rho` with `lambda(t) ~ t^rho` (up to logarithms) as `t -> 0`.
    pub fn origin_exponent(&self) -> f64 {
        match &self.form {
            Form::Beta(bf) => bf.b - 1.0,
            Form::Komatu { k, .. } => *k,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.form {
            Form::Beta(bf) => bf.eval(t),
            Form::Komatu { k, p, kconst } => {
                let l = (1.0 / t).ln();
                let logf = if *p == 1.0 { 1.0 } else { l.powf(p - 1.0) };
                kconst * t.powf(*k) * logf
            }
        }
    }

    /// `lambda(t) t^(-rho)` with `rho` the [origin exponent](Self::origin_exponent), from
    /// `ln t` so that it stays finite after `t` itself underflows.
    pub fn eval_regular(&self, t: f64, ln_t: f64) -> f64 {
        match &self.form {
            Form::Beta(bf) => {
                let u = 1.0 - t;
                bf.k * u.powf(bf.e) * bf.omega(u).0
            }
            Form::Komatu { p, kconst, .. } => {
                if *p == 1.0 {
                    *kconst
                } else {
                    kconst * (-ln_t).powf(p - 1.0)
                }
            }
        }
    }

    /// `lambda'(t)` (order 1) or `lambda''(t)` (order 2) for beta-type weights, from
    /// `lambda' = K t^(B-2) (1-t)^(e-1) [((B-1)(1-t) - e t) omega - t (1-t) omega']`
    /// and the analogous second-order expansion.
    pub fn lambda_deriv(&self, t: f64, order: u8) -> Result<f64> {
        let bf = match &self.form {
            Form::Beta(bf) => bf,
            Form::Komatu { .. } => {
                return Err(invalid(
                    "komatu weights are not of beta type; use komatu_deriv",
                ))
            }
        };
        let u = 1.0 - t;
        let (b1, e) = (bf.b - 1.0, bf.e);
        let (w0, w1, w2) = bf.omega(u);
        let base = bf.k * t.powf(bf.b - 3.0) * u.powf(e - 2.0);
        match order {
            1 => Ok(base * t * u * ((b1 * u - e * t) * w0 - t * u * w1)),
            2 => {
                let poly = b1 * (b1 - 1.0) * u * u - 2.0 * b1 * e * t * u + e * (e - 1.0) * t * t;
                let mixed = -2.0 * t * u * (b1 * u - e * t);
                Ok(base * (poly * w0 + mixed * w1 + t * t * u * u * w2))
            }
            _ => Err(invalid(format!(
                "derivative order must be 1 or 2, got {order}"
            ))),
        }
    }

    /// Derivatives of the Komatu weight; order 1 or 2.
    pub fn komatu_deriv(&self, t: f64, order: u8) -> Result<f64> {
        let (k, p, kc) = match &self.form {
            Form::Komatu { k, p, kconst } => (*k, *p, *kconst),
            Form::Beta(_) => return Err(invalid("not a komatu weight")),
        };
        // lambda = K exp(k ln t) L^(p-1), L = ln(1/t), L' = -1/t
        let l = (1.0 / t).ln();
        let pw = |e: f64| if e == 0.0 { 1.0 } else { l.powf(e) };
        let q = p - 1.0;
        match order {
            1 => Ok(kc * t.powf(k - 1.0) * (k * pw(q) - q * pw(q - 1.0))),
            2 => Ok(kc
                * t.powf(k - 2.0)
                * (k * (k - 1.0) * pw(q) - (2.0 * k - 1.0) * q * pw(q - 1.0)
                    + q * (q - 1.0) * pw(q - 2.0))),
            _ => Err(invalid(format!(
                "derivative order must be 1 or 2, got {order}"
            ))),
        }
    }

    /// Moments `tau_0, ..., tau_(count-1)` from the closed forms.
    pub fn moments(&self, count: usize) -> Vec<f64> {
        match &self.form {
            Form::Beta(bf) => bf.moments(count),
            Form::Komatu { k, p, .. } => (0..count)
                .map(|n| ((1.0 + k) / (1.0 + k + n as f64)).powf(*p))
                .collect(),
        }
    }

    pub fn moment(&self, n: usize) -> f64 {
        self.moments(n + 1)[n]
    }

    /// `tau_n` by quadrature, as an independent check of [`moments`](Self::moments).
    pub fn moment_quadrature(&self, n: usize, cfg: &QuadratureConfig) -> Result<f64> {
        Ok(integrate(|t| t.powi(n as i32) * self.eval(t), cfg)?.value)
    }

    /// `int_0^1 lambda - 1`.
    pub fn normalization_error(&self, cfg: &QuadratureConfig) -> Result<f64> {
        Ok(integrate(|t| self.eval(t), cfg)?.value - 1.0)
    }

    fn lambda_exponent(p: &Params) -> Result<f64> {
        if !(p.nu() > 0.0) {
            return Err(invalid("Lambda needs nu > 0 (alpha > 0 when gamma = 0)"));
        }
        Ok(p.delta() / p.nu())
    }

    /// `Lambda_nu(t) = int_t^1 lambda(s) s^(-delta/nu) ds`, via `s = t^y`.
    pub fn lambda_int(&self, p: &Params, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let e = Self::lambda_exponent(p)?;
        if t == 0.0 {
            if self.origin_exponent() + 1.0 - e <= 0.0 {
                return Err(Error::DivergentTail(format!(
                    "lambda(s) s^(-{e}) is not integrable at 0 (lambda ~ s^{})",
                    self.origin_exponent()
                )));
            }
            return Ok(integrate(|s| self.eval(s) * s.powf(-e), cfg)?.value);
        }
        self.lambda_int_scaled(p, t, 0.0, cfg)
    }

    /// `t^power Lambda_nu(t)` for `t` in `(0, 1]`, with every power of `t` folded into one
    /// exponent so that no factor overflows on its own.
    pub fn lambda_int_scaled(
        &self,
        p: &Params,
        t: f64,
        power: f64,
        cfg: &QuadratureConfig,
    ) -> Result<f64> {
        let e = Self::lambda_exponent(p)?;
        self.log_integral(t, cfg, |y, lt| {
            // lambda(s) s^(1-e) t^power with s = t^y
            let ln_s = -y * lt;
            let rho = self.origin_exponent();
            ((rho + 1.0 - e) * ln_s - power * lt).exp() * self.eval_regular(ln_s.exp(), ln_s)
        })
    }

    /// `lt int_0^1 g(y, lt) dy` with `lt = ln(1/t)`; zero at `t = 1`.
    fn log_integral<G>(&self, t: f64, cfg: &QuadratureConfig, g: G) -> Result<f64>
    where
        G: Fn(f64, f64) -> f64,
    {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::InvalidParams(format!("t = {t} outside (0, 1]")));
        }
        if t == 1.0 {
            return Ok(0.0);
        }
        let lt = (1.0 / t).ln();
        Ok(lt * integrate(|y| g(y, lt), cfg)?.value)
    }

    /// `Pi(t)`; equals `Lambda_alpha(t)` when `gamma = 0`. For `gamma > 0` the order of
    /// integration is swapped:
    /// `Pi(t) = int_t^1 lambda(u) u^(-delta/nu) (t^(-a) - u^(-a))/a du`, `a = delta/mu - delta/nu`.
    pub fn pi_int(&self, p: &Params, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if p.gamma_is_zero() {
            return self.lambda_int(p, t, cfg);
        }
        if t == 0.0 {
            return Err(Error::DivergentTail(
                "Pi(0) is infinite when gamma > 0".into(),
            ));
        }
        self.pi_int_scaled(p, t, 0.0, cfg)
    }

    /// `t^a Pi(t)`, `a = delta/mu - delta/nu`, bounded as `t -> 0` where `Pi` itself blows up.
    pub fn pi_scaled(&self, p: &Params, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if p.gamma_is_zero() {
            return self.lambda_int(p, t, cfg);
        }
        self.pi_int_scaled(p, t, pi_gap(p), cfg)
    }

    /// `t^power Pi(t)` for `t` in `(0, 1]`; `gamma = 0` gives `t^power Lambda_alpha(t)`.
    pub fn pi_int_scaled(
        &self,
        p: &Params,
        t: f64,
        power: f64,
        cfg: &QuadratureConfig,
    ) -> Result<f64> {
        if p.gamma_is_zero() {
            return self.lambda_int_scaled(p, t, power, cfg);
        }
        let e = Self::lambda_exponent(p)?;
        let a = pi_gap(p);
        let rho = self.origin_exponent();
        self.log_integral(t, cfg, |y, lt| {
            let ln_u = -y * lt;
            // (1 - (t/u)^a) / a
            let w = if a == 0.0 {
                (1.0 - y) * lt
            } else {
                -(-a * (1.0 - y) * lt).exp_m1() / a
            };
            ((rho + 1.0 - e) * ln_u - (power - a) * lt).exp()
                * self.eval_regular(ln_u.exp(), ln_u)
                * w
        })
    }

    /// `Pi(t)` from its definition as an iterated integral; slow, for cross-checks.
    pub fn pi_int_nested(&self, p: &Params, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if p.gamma_is_zero() {
            return self.lambda_int(p, t, cfg);
        }
        let a = pi_gap(p);
        let len = 1.0 - t;
        let q = try_integrate(
            |x| {
                let s = t + len * x;
                Ok(self.lambda_int(p, s, cfg)? * s.powf(-a - 1.0))
            },
            cfg,
        )?;
        Ok(q.value * len)
    }

    /// `Pi'(t) = -Lambda_nu(t) t^(-delta/mu + delta/nu - 1)`.
    pub fn pi_deriv(&self, p: &Params, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
        if p.gamma_is_zero() {
            return Ok(-self.eval(t) * t.powf(-p.delta() / p.nu()));
        }
        Ok(-self.lambda_int(p, t, cfg)? * t.powf(-pi_gap(p) - 1.0))
    }

    /// Decay of `t^(delta/nu) Lambda(t)` and `t^(delta/mu) Pi(t)` at `t = 1e-2, 1e-3, 1e-4`,
    /// and vanishing at `t = 1` for beta-type weights with `C - A - B >= 1`.
    pub fn limit_checks(&self, p: &Params, cfg: &QuadratureConfig) -> Result<Report> {
        let ts: [f64; 3] = [1e-2, 1e-3, 1e-4];
        let mut r = Report::new();
        let e = Self::lambda_exponent(p)?;
        let lam: Vec<f64> = ts
            .iter()
            .map(|&t| Ok(t.powf(e) * self.lambda_int(p, t, cfg)?))
            .collect::<Result<_>>()?;
        r.push(decay_check("t^(delta/nu) Lambda -> 0", &ts, &lam));
        if p.gamma_is_zero() {
            r.note("gamma = 0: Pi coincides with Lambda_alpha");
        } else {
            let em = p.delta() / p.mu();
            let pi: Vec<f64> = ts
                .iter()
                .map(|&t| Ok(t.powf(em) * self.pi_int(p, t, cfg)?))
                .collect::<Result<_>>()?;
            r.push(decay_check("t^(delta/mu) Pi -> 0", &ts, &pi));
        }
        if let Form::Beta(bf) = &self.form {
            if bf.e >= 1.0 {
                let t = 1.0 - 1e-8;
                r.push(
                    Check::le("lambda(1-1e-8)", self.eval(t), 1e-6 * bf.k)
                        .with_witness(Witness::T { t }),
                );
            }
        }
        Ok(r)
    }
}

fn decay_check(name: &str, ts: &[f64], vals: &[f64]) -> Check {
    let decays = vals.windows(2).all(|w| w[1].abs() <= w[0].abs());
    let last = *vals.last().unwrap_or(&f64::NAN);
    Check::flag(name, decays && last.is_finite()).with_witness(Witness::Text {
        detail: ts
            .iter()
            .zip(vals)
            .map(|(t, v)| format!("{t:e}:{v:e}"))
            .collect::<Vec<_>>()
            .join(" "),
    })
}

/// `a = delta/mu - delta/nu`, nonnegative under `mu <= nu`.
pub fn pi_gap(p: &Params) -> f64 {
    p.delta() / p.mu() - p.delta() / p.nu()
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            WeightFamily::GeneralBeta { a, b, c, omega } => {
                write!(f, "genbeta:{a},{b},{c}")?;
                for x in omega {
                    write!(f, ",{x}")?;
                }
                Ok(())
            }
            WeightFamily::Hohlov { a, b, c } => write!(f, "hohlov:{a},{b},{c}"),
            WeightFamily::CarlsonShaffer { b, c } => write!(f, "cs:{b},{c}"),
            WeightFamily::Komatu { k, p } => write!(f, "komatu:{k},{p}"),
        }
    }
}

impl FromStr for WeightSpec {
    type Err = Error;

    /// Parses `hohlov:a,b,c`, `cs:b,c`, `komatu:k,p` or `genbeta:A,B,C[,x1,...]`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s
            .split_once(':')
            .ok_or_else(|| invalid(format!("expected family:args, got '{s}'")))?;
        let args: Vec<f64> = rest
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| invalid(format!("bad number '{a}' in '{s}'")))
            })
            .collect::<Result<_>>()?;
        let want = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(invalid(format!(
                    "{name} takes {n} arguments, got {}",
                    args.len()
                )))
            }
        };
        let family = match name.trim().to_ascii_lowercase().as_str() {
            "hohlov" => {
                want(3)?;
                WeightFamily::Hohlov {
                    a: args[0],
                    b: args[1],
                    c: args[2],
                }
            }
            "cs" | "carlson-shaffer" => {
                want(2)?;
                WeightFamily::CarlsonShaffer {
                    b: args[0],
                    c: args[1],
                }
            }
            "komatu" => {
                want(2)?;
                WeightFamily::Komatu {
                    k: args[0],
                    p: args[1],
                }
            }
            "genbeta" => {
                if args.len() < 3 {
                    return Err(invalid("genbeta takes A,B,C[,x1,...]"));
                }
                WeightFamily::GeneralBeta {
                    a: args[0],
                    b: args[1],
                    c: args[2],
                    omega: args[3..].to_vec(),
                }
            }
            other => return Err(invalid(format!("unknown weight family '{other}'"))),
        };
        WeightSpec::new(family)
    }
}
