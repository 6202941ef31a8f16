//! The kernels `psi`, `Phi = (z psi)'`, `Upsilon = (z Phi)'`, and the test function
//! `h_xi` with the integrand built from it.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate_batch, QuadratureConfig};
use crate::params::Params;

const MAX_TERMS: usize = 2_000_000;
/// Series evaluation is refused this close to the unit circle.
pub const BOUNDARY_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Form {
    Series,
    DoubleIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEval {
    pub value: Complex64,
    pub form: Form,
    /// Terms summed (series) or the outer quadrature level (integral).
    pub terms_or_levels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    Psi,
    Phi,
    Upsilon,
}

impl Kernel {
    fn power(self) -> i32 {
        match self {
            Kernel::Psi => 0,
            Kernel::Phi => 1,
            Kernel::Upsilon => 2,
        }
    }
}

/// `psi_n = delta^2 / ((delta + n mu)(delta + n nu))`; with `gamma = 0` this is
/// `delta / (delta + n alpha)`.
pub fn psi_coeff(p: &Params, n: usize) -> f64 {
    let d = p.delta();
    let n = n as f64;
    d * d / ((d + n * p.mu()) * (d + n * p.nu()))
}

pub fn kernel_coeff(p: &Params, k: Kernel, n: usize) -> f64 {
    psi_coeff(p, n) * ((n + 1) as f64).powi(k.power())
}

/// Coefficients of `(1 - 1/delta) Phi + (1/delta) Upsilon`, namely
/// `delta (n + 1)(n + delta) / ((delta + n nu)(delta + n mu))`.
pub fn combo_coeff(p: &Params, n: usize) -> f64 {
    psi_coeff(p, n) * (n + 1) as f64 * (n as f64 + p.delta()) / p.delta()
}

fn sum_series(
    coeff: impl Fn(usize) -> f64,
    power: i32,
    z: Complex64,
    tol: f64,
) -> Result<KernelEval> {
    let r = z.norm();
    if r > 1.0 - BOUNDARY_GAP {
        return Err(Error::NonConvergent {
            terms: 0,
            last_term: f64::INFINITY,
        });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut zn = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for n in 0..MAX_TERMS {
        let term = zn * coeff(n);
        sum += term;
        zn *= z;
        last = term.norm();
        // coefficients grow at most like ((n+2)/(n+1))^power per step
        let rho = r * (((n + 2) as f64) / ((n + 1) as f64)).powi(power);
        if rho < 1.0 {
            let tail = last * rho / (1.0 - rho);
            if tail <= tol * sum.norm().max(1.0) {
                return Ok(KernelEval {
                    value: sum,
                    form: Form::Series,
                    terms_or_levels: n + 1,
                });
            }
        }
    }
    Err(Error::NonConvergent {
        terms: MAX_TERMS,
        last_term: last,
    })
}

pub fn kernel_series(p: &Params, k: Kernel, z: Complex64, tol: f64) -> Result<KernelEval> {
    sum_series(|n| kernel_coeff(p, k, n), k.power(), z, tol)
}

pub fn psi(p: &Params, z: Complex64, tol: f64) -> Result<KernelEval> {
    kernel_series(p, Kernel::Psi, z, tol)
}

pub fn phi(p: &Params, z: Complex64, tol: f64) -> Result<KernelEval> {
    kernel_series(p, Kernel::Phi, z, tol)
}

pub fn upsilon(p: &Params, z: Complex64, tol: f64) -> Result<KernelEval> {
    kernel_series(p, Kernel::Upsilon, z, tol)
}

/// `(1 - 1/delta) Phi(w) + (1/delta) Upsilon(w)` by its series.
pub fn phi_upsilon_combo(p: &Params, w: Complex64, tol: f64) -> Result<KernelEval> {
    sum_series(|n| combo_coeff(p, n), 2, w, tol)
}

fn complex_double_integral<F>(f: F, cfg: &QuadratureConfig) -> Result<(Complex64, u32)>
where
    F: Fn(f64, f64) -> Complex64,
{
    let outer = integrate_batch(
        2,
        |u, out| {
            let inner = integrate_batch(
                2,
                |v, o| {
                    let w = f(u, v);
                    o[0] = w.re;
                    o[1] = w.im;
                    Ok(())
                },
                cfg,
            )?;
            out[0] = inner[0].value;
            out[1] = inner[1].value;
            Ok(())
        },
        cfg,
    )?;
    Ok((
        Complex64::new(outer[0].value, outer[1].value),
        outer[0].level,
    ))
}

/// `psi(z) = int int du dv / (1 - u^(nu/delta) v^(mu/delta) z)`. With `gamma = 0` the `v`
/// factor is 1 and the integral collapses to one dimension.
pub fn psi_integral(p: &Params, z: Complex64, cfg: &QuadratureConfig) -> Result<KernelEval> {
    let a = p.nu() / p.delta();
    let b = p.mu() / p.delta();
    let one = Complex64::new(1.0, 0.0);
    let (value, level) =
        complex_double_integral(|u, v| one / (one - z * u.powf(a) * v.powf(b)), cfg)?;
    Ok(KernelEval {
        value,
        form: Form::DoubleIntegral,
        terms_or_levels: level as usize,
    })
}

/// Double-integral form of [`phi_upsilon_combo`], available when `gamma > 0`.
pub fn phi_upsilon_combo_integral(
    p: &Params,
    w: Complex64,
    cfg: &QuadratureConfig,
) -> Result<KernelEval> {
    if p.gamma_is_zero() {
        return Err(Error::InvalidParams(
            "the double-integral form needs gamma > 0".into(),
        ));
    }
    let d = p.delta();
    let (er, es) = (d / p.nu() - 1.0, d / p.mu() - 1.0);
    let one = Complex64::new(1.0, 0.0);
    let (value, level) = complex_double_integral(
        |r, s| {
            let x = w * r * s;
            let om = one - x;
            let core = (1.0 - 1.0 / d) / (om * om) + (one + x) / (d * om * om * om);
            core * r.powf(er) * s.powf(es)
        },
        cfg,
    )?;
    let scale = d * d / (p.mu() * p.nu());
    Ok(KernelEval {
        value: value * scale,
        form: Form::DoubleIntegral,
        terms_or_levels: level as usize,
    })
}

fn kappa(xi: f64, eps: Complex64) -> Complex64 {
    (eps + 2.0 * xi - 1.0) / (2.0 * (1.0 - xi))
}

/// `h_xi(z) = z (1 + kappa z) / (1 - z)^2`, `kappa = (eps + 2 xi - 1) / (2 (1 - xi))`.
pub fn h_xi(xi: f64, eps: Complex64, z: Complex64) -> Complex64 {
    z * h_xi_over_z(xi, eps, z)
}

/// `h_xi(z) / z`, regular at the origin.
pub fn h_xi_over_z(xi: f64, eps: Complex64, z: Complex64) -> Complex64 {
    let om = Complex64::new(1.0, 0.0) - z;
    (kappa(xi, eps) * z + 1.0) / (om * om)
}

/// `h_xi'(z) = (1 + (1 + 2 kappa) z) / (1 - z)^3`.
pub fn h_xi_deriv(xi: f64, eps: Complex64, z: Complex64) -> Complex64 {
    let om = Complex64::new(1.0, 0.0) - z;
    ((kappa(xi, eps) * 2.0 + 1.0) * z + 1.0) / (om * om * om)
}

/// `(1 - xi(1 + t)) / ((1 - xi)(1 + t)^2)`, the value of `h_xi(-t)/(-t)` at `eps = 1`.
pub fn psi0(xi: f64, t: f64) -> f64 {
    (1.0 - xi * (1.0 + t)) / ((1.0 - xi) * (1.0 + t).powi(2))
}

/// `(1 - t - xi(1 + t)) / ((1 - xi)(1 + t)^3)`, the value of `h_xi'(-t)` at `eps = 1`.
pub fn psi1(xi: f64, t: f64) -> f64 {
    (1.0 - t - xi * (1.0 + t)) / ((1.0 - xi) * (1.0 + t).powi(3))
}

/// The integrand `h_{xi,delta,z}(t)` whose weighted integral must be nonnegative.
pub fn h_integrand(p: &Params, z: Complex64, eps: Complex64, t: f64) -> f64 {
    let d = p.delta();
    let xi = p.xi();
    let w = z * t;
    (1.0 - 1.0 / d) * (h_xi_over_z(xi, eps, w).re - psi0(xi, t))
        + (1.0 / d) * (h_xi_deriv(xi, eps, w).re - psi1(xi, t))
}

/// The integrand splits as `c(t) + Re(eps A(t))`; returns `(c, A)`.
pub fn h_integrand_parts(p: &Params, z: Complex64, t: f64) -> (f64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let c = h_integrand(p, z, zero, t);
    let d = p.delta();
    let xi = p.xi();
    let w = z * t;
    let one = Complex64::new(1.0, 0.0);
    let a = (1.0 - 1.0 / d) * (h_xi_over_z(xi, one, w) - h_xi_over_z(xi, zero, w))
        + (1.0 / d) * (h_xi_deriv(xi, one, w) - h_xi_deriv(xi, zero, w));
    (c, a)
}

/// Pointwise minimum of [`h_integrand`] over `|eps| = 1`.
pub fn h_integrand_eps_floor(p: &Params, z: Complex64, t: f64) -> f64 {
    let (c, a) = h_integrand_parts(p, z, t);
    c - a.norm()
}

/// Lower bound for `Re h_xi(w)/w` over all `|eps| = 1`:
/// `(Re[(2(1-xi) + (2 xi - 1) w) / (1-w)^2] - |w| / |1-w|^2) / (2 (1 - xi))`.
pub fn re_h_over_z_eps_min(xi: f64, w: Complex64) -> f64 {
    let om = Complex64::new(1.0, 0.0) - w;
    let main = ((w * (2.0 * xi - 1.0) + 2.0 * (1.0 - xi)) / (om * om)).re;
    (main - w.norm() / om.norm_sqr()) / (2.0 * (1.0 - xi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kernels_at_origin() {
        let p = Params::from_roots(0.5, 2.0, 2.0, 0.8).unwrap();
        for k in [Kernel::Psi, Kernel::Phi, Kernel::Upsilon] {
            assert_eq!(
                kernel_series(&p, k, c(0.0, 0.0), 1e-14).unwrap().value,
                c(1.0, 0.0)
            );
        }
    }

    #[test]
    fn psi_partial_sum_oracle() {
        let p = Params::derive(3.0, 1.0, 1.0, 0.0).unwrap();
        let direct: f64 = (0..200)
            .map(|n| 0.5f64.powi(n) / ((n + 1) as f64).powi(2))
            .sum();
        let v = psi(&p, c(0.5, 0.0), 1e-15).unwrap();
        assert!((v.value.re - direct).abs() < 1e-14);
    }

    #[test]
    fn psi_series_vs_integral() {
        let p = Params::derive(3.0, 1.0, 1.0, 0.0).unwrap();
        let cfg = QuadratureConfig::default();
        let s = psi(&p, c(-0.7, 0.0), 1e-14).unwrap();
        let i = psi_integral(&p, c(-0.7, 0.0), &cfg).unwrap();
        assert!((s.value - i.value).norm() < 1e-8);
        assert_eq!(i.form, Form::DoubleIntegral);
    }

    #[test]
    fn combo_series_vs_integral() {
        let p = Params::from_roots(0.5, 2.0, 2.0, 0.8).unwrap();
        let cfg = QuadratureConfig::default();
        let s = phi_upsilon_combo(&p, c(-0.5, 0.0), 1e-14).unwrap();
        let i = phi_upsilon_combo_integral(&p, c(-0.5, 0.0), &cfg).unwrap();
        assert!(
            (s.value - i.value).norm() < 1e-8,
            "{} vs {}",
            s.value,
            i.value
        );
        let direct = (1.0 - 0.5) * phi(&p, c(-0.5, 0.0), 1e-14).unwrap().value
            + 0.5 * upsilon(&p, c(-0.5, 0.0), 1e-14).unwrap().value;
        assert!((s.value - direct).norm() < 1e-12);
    }

    #[test]
    fn coefficient_shift_identities() {
        let p = Params::from_roots(0.75, 1.5, 1.3, 0.7).unwrap();
        for n in 0..=200 {
            let (s, f, u) = (
                kernel_coeff(&p, Kernel::Psi, n),
                kernel_coeff(&p, Kernel::Phi, n),
                kernel_coeff(&p, Kernel::Upsilon, n),
            );
            assert!((f - (n + 1) as f64 * s).abs() <= 1e-12 * f);
            assert!((u - (n + 1) as f64 * f).abs() <= 1e-12 * u);
        }
    }

    #[test]
    fn refuses_boundary() {
        let p = Params::derive(3.0, 1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            psi(&p, c(-1.0, 0.0), 1e-12),
            Err(Error::NonConvergent { .. })
        ));
    }

    #[test]
    fn h_xi_values() {
        let z = c(0.3, -0.2);
        let koebe = z / ((c(1.0, 0.0) - z) * (c(1.0, 0.0) - z));
        assert!((h_xi(0.0, c(1.0, 0.0), z) - koebe).norm() < 1e-15);
        assert_eq!(h_xi(0.3, c(0.0, 1.0), c(0.0, 0.0)), c(0.0, 0.0));
        assert!((h_xi(0.25, c(-1.0, 0.0), c(0.5, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn h_xi_derivative_matches_difference() {
        let (xi, eps, z) = (0.3, Complex64::from_polar(1.0, 0.7), c(0.2, 0.4));
        let h = 1e-6;
        let fd = (h_xi(xi, eps, z + h) - h_xi(xi, eps, z - h)) / (2.0 * h);
        assert!((fd - h_xi_deriv(xi, eps, z)).norm() < 1e-8);
    }

    #[test]
    fn integrand_vanishes_at_extremal_point() {
        for xi_zeta in [0.0, 0.3, 0.5] {
            let p = Params::derive(1.0, 0.0, 1.5, 1.0 - (1.0 - xi_zeta) / 1.5).unwrap();
            assert!((p.xi() - xi_zeta).abs() < 1e-14);
            for k in 1..20 {
                let t = k as f64 / 20.0;
                assert!(h_integrand(&p, c(-1.0, 0.0), c(1.0, 0.0), t).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn integrand_near_origin() {
        let p = Params::derive(1.0, 0.0, 2.0, 0.5).unwrap();
        let v = h_integrand(&p, Complex64::from_polar(1.0, 1.0), c(0.0, 1.0), 1e-12);
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn eps_split_is_exact() {
        let p = Params::derive(1.0, 0.0, 1.7, 0.8).unwrap();
        let z = Complex64::from_polar(1.0, 2.1);
        let (c0, a) = h_integrand_parts(&p, z, 0.4);
        for k in 0..8 {
            let eps = Complex64::from_polar(1.0, k as f64);
            let direct = h_integrand(&p, z, eps, 0.4);
            assert!((direct - (c0 + (eps * a).re)).abs() < 1e-13);
            assert!(direct >= h_integrand_eps_floor(&p, z, 0.4) - 1e-13);
        }
    }
}
