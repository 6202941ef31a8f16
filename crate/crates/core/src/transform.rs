//! Analytic functions as coefficient series of `S = (f/z)^delta`, the transform acting on
//! them by moment multiplication, and class-membership functionals on boundary grids.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::psi_coeff;
use crate::numerics::series::PowerSeries;
use crate::params::Params;
use crate::report::{Check, Report, Witness};
use crate::weights::WeightSpec;

/// Below this `|w|` a membership sample counts as zero.
pub const ZERO_TOL: f64 = 1e-12;
/// Default slack for the convexity functional near the boundary.
pub const SHARP_TOL: f64 = 1e-3;
/// Truncation tails smaller than this are treated as exact.
const TAIL_TOL: f64 = 1e-13;
/// Euler transform is only used where `|z/(1-z)|` stays below this; beyond it the
/// forward differences lose more to rounding than the transform gains.
const EULER_W_MAX: f64 = 0.75;
const EULER_RAW: usize = 50;

/// `S = (f/z)^delta` as a truncated power series with `S_0 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticFn {
    s: PowerSeries,
    delta: f64,
    label: String,
}

impl AnalyticFn {
    pub fn new(s: PowerSeries, delta: f64, label: impl Into<String>) -> Result<Self> {
        if s.order() == 0 || (s.coeff(0) - 1.0).norm() > 1e-12 {
            return Err(Error::InvalidParams("S must have constant term 1".into()));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "delta must be positive, got {delta}"
            )));
        }
        Ok(Self {
            s,
            delta,
            label: label.into(),
        })
    }

    /// `f(z) = z`.
    pub fn identity(delta: f64, order: usize) -> Result<Self> {
        Self::new(PowerSeries::one(order.max(1)), delta, "z")
    }

    /// Builds `S` from the series of `f/z` by a fractional power.
    pub fn from_f_over_z(
        f_over_z: &PowerSeries,
        delta: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::new(f_over_z.pow(delta)?, delta, label)
    }

    pub fn s(&self) -> &PowerSeries {
        &self.s
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn order(&self) -> usize {
        self.s.order()
    }

    /// `f/z = S^(1/delta)`, principal branch at the origin.
    pub fn f_over_z(&self) -> Result<PowerSeries> {
        self.s.pow(1.0 / self.delta)
    }

    /// `g_n = S_n (n + delta)/delta`, the coefficients of `G/z = S + z S'/delta`.
    pub fn g_over_z(&self) -> PowerSeries {
        let d = self.delta;
        PowerSeries::from_fn(self.order(), |n| self.s.coeff(n) * ((n as f64 + d) / d))
    }

    /// `G' = sum (n+1) g_n z^n`.
    pub fn g_prime(&self) -> PowerSeries {
        let g = self.g_over_z();
        PowerSeries::from_fn(g.order(), |n| g.coeff(n) * (n + 1) as f64)
    }
}

/// Sample circles for membership checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub radii: Vec<f64>,
    pub n_theta: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radii: vec![0.5, 0.9, 0.99],
            n_theta: 720,
        }
    }
}

impl GridSpec {
    pub fn new(radii: Vec<f64>, n_theta: usize) -> Result<Self> {
        let g = Self { radii, n_theta };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radii.is_empty() {
            return Err(Error::InvalidGrid("no radii".into()));
        }
        if self.n_theta < 64 {
            return Err(Error::InvalidGrid(format!(
                "n_theta must be >= 64, got {}",
                self.n_theta
            )));
        }
        if self.radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::InvalidGrid("radii must lie in (0, 1)".into()));
        }
        if self.radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(
                "radii must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn r_max(&self) -> f64 {
        *self.radii.last().expect("validated grid")
    }

    pub fn circle(&self, r: f64) -> Vec<Complex64> {
        (0..self.n_theta)
            .map(|k| Complex64::from_polar(r, 2.0 * PI * k as f64 / self.n_theta as f64))
            .collect()
    }

    pub fn points(&self) -> Vec<Complex64> {
        self.radii.iter().flat_map(|&r| self.circle(r)).collect()
    }

    /// Series order (a multiple of 256) at which `r_max^N` drops below `1e-17`.
    pub fn required_order(&self) -> usize {
        let n = (1e-17f64.ln() / self.r_max().ln()).ceil() as usize;
        n.div_ceil(256).max(1) * 256
    }
}

/// Evaluates a truncated series, Euler-transforming the tail near `z = -1` when the
/// truncation is visible at `|z|`.
pub fn eval_series(s: &PowerSeries, z: Complex64) -> Complex64 {
    if tail_estimate(s, z.norm()) <= TAIL_TOL {
        return s.eval(z);
    }
    let w = z / (Complex64::new(1.0, 0.0) - z);
    if w.norm() <= EULER_W_MAX {
        s.eval_accelerated(z, EULER_RAW, 1e-16)
    } else {
        s.eval(z)
    }
}

fn tail_estimate(s: &PowerSeries, r: f64) -> f64 {
    let n = s.order();
    if n == 0 || r == 0.0 {
        return 0.0;
    }
    let last = s.coeffs()[n.saturating_sub(4)..]
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    last * r.powi(n as i32) / (1.0 - r).max(f64::EPSILON)
}

/// The extremal function: `S_n = 2(1 - beta) psi_n` for `n >= 1`, whose `H` is
/// `beta + (1 - beta)(1 + z)/(1 - z)`.
pub fn extremal_function(p: &Params, beta: f64, order: usize) -> AnalyticFn {
    let s = PowerSeries::from_fn(order.max(1), |n| {
        let c = if n == 0 {
            1.0
        } else {
            2.0 * (1.0 - beta) * psi_coeff(p, n)
        };
        Complex64::new(c, 0.0)
    });
    AnalyticFn {
        s,
        delta: p.delta(),
        label: format!("extremal(beta={beta})"),
    }
}

/// Inverse of the `psi` convolution: `H_n = S_n / psi_n`.
pub fn apply_h(p: &Params, f: &AnalyticFn) -> Result<PowerSeries> {
    check_delta(p.delta(), f.delta)?;
    Ok(PowerSeries::from_fn(f.order(), |n| {
        f.s.coeff(n) / psi_coeff(p, n)
    }))
}

/// The `psi` convolution taking `H` back to `S`.
pub fn apply_psi(p: &Params, h: &PowerSeries) -> PowerSeries {
    PowerSeries::from_fn(h.order(), |n| h.coeff(n) * psi_coeff(p, n))
}

fn check_delta(a: f64, b: f64) -> Result<()> {
    if (a - b).abs() > 1e-14 * a.abs().max(1.0) {
        return Err(Error::InvalidParams(format!("delta mismatch: {a} vs {b}")));
    }
    Ok(())
}

/// Coefficientwise action on `(f/z)^delta`: `S_n -> tau_n S_n`, truncated at `n_max`.
/// The `delta`-th root is not taken.
pub fn apply_transform(w: &WeightSpec, f: &AnalyticFn, n_max: usize) -> AnalyticFn {
    let order = f.order().min(n_max.max(1));
    let tau = w.moments(order);
    let s = PowerSeries::from_fn(order, |n| f.s.coeff(n) * tau[n]);
    AnalyticFn {
        s,
        delta: f.delta,
        label: format!("V[{}]({})", w, f.label),
    }
}

/// `z G'(z)/G(z)` for `G = z (S + z S'/delta)`.
pub fn star_functional(f: &AnalyticFn, z: Complex64) -> Result<Complex64> {
    let (num, den) = star_series(f);
    star_value(&num, &den, z)
}

fn star_series(f: &AnalyticFn) -> (PowerSeries, PowerSeries) {
    (f.g_prime(), f.g_over_z())
}

fn star_value(num: &PowerSeries, den: &PowerSeries, z: Complex64) -> Result<Complex64> {
    let d = eval_series(den, z);
    if d.norm() < ZERO_TOL {
        return Err(Error::ZeroDenominator { re: z.re, im: z.im });
    }
    Ok(eval_series(num, z) / d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub tol: f64,
    pub zero_tol: f64,
}

/// Outcome of a grid membership test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub class: &'static str,
    pub pass: bool,
    pub min_value: f64,
    pub witness_z: Option<Witness>,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub series_order: usize,
    /// Rotation making every sample positive (W membership only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    /// Angular span of the sampled values (W membership only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<f64>,
    pub notes: Vec<String>,
}

impl MembershipReport {
    pub fn to_report(&self) -> Report {
        let mut r = Report::new();
        let mut c = Check::ge(
            format!("{}_min", self.class),
            self.min_value,
            -self.tolerances.tol,
        );
        c.pass = self.pass;
        if let Some(w) = &self.witness_z {
            c = c.with_witness(w.clone());
        }
        r.push(c);
        if let Some(span) = self.span {
            r.push(Check::le("arg_span", span, PI));
        }
        for n in &self.notes {
            r.note(n.clone());
        }
        r
    }
}

/// Parallel map over points followed by an ordered, sequential arg-min.
fn grid_min<F>(points: &[Complex64], f: F) -> Result<(f64, Complex64)>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let vals: Vec<Result<f64>> = points.par_iter().map(|&z| f(z)).collect();
    let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for (z, v) in points.iter().zip(vals) {
        let v = v?;
        if v < best.0 {
            best = (v, *z);
        }
    }
    Ok(best)
}

fn truncation_notes(s: &PowerSeries, g: &GridSpec) -> Vec<String> {
    let tail = tail_estimate(s, g.r_max());
    if tail > TAIL_TOL {
        vec![format!(
            "series order {} leaves a tail of about {tail:.1e} at r = {}; order {} would be exact",
            s.order(),
            g.r_max(),
            g.required_order()
        )]
    } else {
        Vec::new()
    }
}

/// Is there a `phi` with `Re e^{i phi} (H(z) - beta) > 0` on the outer circle?
pub fn check_w_membership(
    p: &Params,
    beta: f64,
    f: &AnalyticFn,
    g: &GridSpec,
) -> Result<MembershipReport> {
    g.validate()?;
    let h = apply_h(p, f)?;
    let pts = g.circle(g.r_max());
    let vals: Vec<Complex64> = pts.par_iter().map(|&z| eval_series(&h, z) - beta).collect();
    for (z, w) in pts.iter().zip(&vals) {
        if w.norm() < ZERO_TOL {
            return Err(Error::ZeroValue { re: z.re, im: z.im });
        }
    }
    let mut args: Vec<f64> = vals.iter().map(|w| w.arg().rem_euclid(2.0 * PI)).collect();
    args.sort_by(f64::total_cmp);
    // largest empty arc, including the wrap-around gap
    let mut gap = 2.0 * PI - (args[args.len() - 1] - args[0]);
    let mut start = args[0];
    for w in args.windows(2) {
        if w[1] - w[0] > gap {
            gap = w[1] - w[0];
            start = w[1];
        }
    }
    let span = 2.0 * PI - gap;
    let phi = -(start + span / 2.0);
    let rot = Complex64::from_polar(1.0, phi);
    let (min_value, wz) = pts.iter().zip(&vals).map(|(z, w)| ((rot * w).re, *z)).fold(
        (f64::INFINITY, Complex64::new(0.0, 0.0)),
        |a, b| if b.0 < a.0 { b } else { a },
    );
    let phi = phi.rem_euclid(2.0 * PI);
    let phi = if phi > PI { phi - 2.0 * PI } else { phi };
    Ok(MembershipReport {
        class: "w_membership",
        pass: span < PI,
        min_value,
        witness_z: Some(Witness::z(wz)),
        grid: g.clone(),
        tolerances: Tolerances {
            tol: 0.0,
            zero_tol: ZERO_TOL,
        },
        series_order: h.order(),
        phi: Some(phi),
        span: Some(span),
        notes: truncation_notes(&h, g),
    })
}

/// `min Re(z G'/G) - xi` over the grid, passing when `>= -tol`.
pub fn check_c_membership(
    f: &AnalyticFn,
    zeta: f64,
    g: &GridSpec,
    tol: f64,
) -> Result<MembershipReport> {
    g.validate()?;
    let xi = 1.0 - f.delta * (1.0 - zeta);
    let (num, den) = star_series(f);
    let pts = g.points();
    let (min, wz) = grid_min(&pts, |z| Ok(star_value(&num, &den, z)?.re - xi))?;
    let mut notes = truncation_notes(&num, g);
    if f.delta < 1.0 {
        notes.push(format!(
            "delta = {} < 1: functional computed, no class statement attached",
            f.delta
        ));
    }
    Ok(MembershipReport {
        class: "c_membership",
        pass: min >= -tol,
        min_value: min,
        witness_z: Some(Witness::z(wz)),
        grid: g.clone(),
        tolerances: Tolerances {
            tol,
            zero_tol: ZERO_TOL,
        },
        series_order: f.order(),
        phi: None,
        span: None,
        notes,
    })
}

/// `min Re G'` over the grid. Diagnostic only; positivity is sufficient for
/// univalence, not necessary.
pub fn check_univalence_re(f: &AnalyticFn, g: &GridSpec) -> Result<MembershipReport> {
    g.validate()?;
    let gp = f.g_prime();
    let pts = g.points();
    let (min, wz) = grid_min(&pts, |z| Ok(eval_series(&gp, z).re))?;
    Ok(MembershipReport {
        class: "univalence_re",
        pass: min > 0.0,
        min_value: min,
        witness_z: Some(Witness::z(wz)),
        grid: g.clone(),
        tolerances: Tolerances {
            tol: 0.0,
            zero_tol: ZERO_TOL,
        },
        series_order: f.order(),
        phi: None,
        span: None,
        notes: truncation_notes(&gp, g),
    })
}

/// The image of the extremal function under the transform.
pub fn transformed_extremal(p: &Params, w: &WeightSpec, beta: f64, order: usize) -> AnalyticFn {
    let f = extremal_function(p, beta, order);
    apply_transform(w, &f, order)
}

/// `|star_functional(F, z) - xi|` for the transformed extremal.
pub fn sharpness_error(
    p: &Params,
    w: &WeightSpec,
    beta: f64,
    order: usize,
    z: Complex64,
) -> Result<f64> {
    let f = transformed_extremal(p, w, beta, order);
    Ok((star_functional(&f, z)? - p.xi()).norm())
}
