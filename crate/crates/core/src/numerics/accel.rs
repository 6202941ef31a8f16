//! Euler transform for slowly convergent (or merely Abel-summable) power series.
//!
//! For a tail `sum_{n >= m} c_n z^n` the transform rewrites it as
//! `z^m / (1 - z) * sum_k (Delta^k c)_m w^k` with `w = z / (1 - z)`, where
//! `(Delta c)_n = c_{n+1} - c_n`. At `z = -1` this is the classical Euler sum of an
//! alternating series (`w = -1/2`). Forward differences are built incrementally, so
//! only as many coefficients are touched as the transformed series needs.

use num_complex::Complex64;

/// Outcome of an accelerated summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelSum {
    pub value: Complex64,
    /// Number of coefficients consumed (raw + transformed).
    pub terms: usize,
    /// Magnitude of the last transformed term.
    pub last_term: f64,
    pub converged: bool,
}

/// Sums `sum_{n=0}^{available-1} c_n z^n` with the first `raw` terms added directly and the
/// remainder Euler-transformed. `coeff(n)` is only called for `n < available`.
pub fn euler_power_sum<F>(
    mut coeff: F,
    available: usize,
    z: Complex64,
    raw: usize,
    tol: f64,
) -> AccelSum
where
    F: FnMut(usize) -> Complex64,
{
    let raw = raw.min(available);
    let mut head = Complex64::new(0.0, 0.0);
    let mut zn = Complex64::new(1.0, 0.0);
    for n in 0..raw {
        head += coeff(n) * zn;
        zn *= z;
    }
    if raw == available {
        return AccelSum {
            value: head,
            terms: raw,
            last_term: 0.0,
            converged: true,
        };
    }

    let one = Complex64::new(1.0, 0.0);
    let w = z / (one - z);
    let prefactor = zn / (one - z);

    // diag[j] = Delta^j c_{m + k - j} after consuming c_{m + k}
    let mut diag: Vec<Complex64> = Vec::with_capacity(64);
    let mut tail = Complex64::new(0.0, 0.0);
    let mut wk = one;
    let mut small_run = 0;
    let mut last_term = f64::INFINITY;
    let mut peak = head.norm();
    let mut used = raw;
    let mut converged = false;
    for k in 0..(available - raw) {
        let mut carry = coeff(raw + k);
        used += 1;
        for d in diag.iter_mut() {
            let next = carry - *d;
            *d = carry;
            carry = next;
        }
        diag.push(carry);
        // diag now holds Delta^j c_{m+k-j} for j = 0..=k; the last entry is Delta^k c_m.
        let term = carry * wk;
        tail += term;
        wk *= w;
        last_term = (term * prefactor).norm();
        peak = peak.max(last_term);
        let scale = (head + prefactor * tail).norm().max(peak);
        if last_term <= tol * scale {
            small_run += 1;
            if small_run >= 3 {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    AccelSum {
        value: head + prefactor * tail,
        terms: used,
        last_term,
        converged,
    }
}

/// Euler sum of the real alternating series `sum_n (-1)^n b_n`, `n < available`.
pub fn euler_alternating_sum<F>(mut b: F, available: usize, raw: usize, tol: f64) -> AccelSum
where
    F: FnMut(usize) -> f64,
{
    euler_power_sum(
        |n| Complex64::new(b(n), 0.0),
        available,
        Complex64::new(-1.0, 0.0),
        raw,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn alternating_harmonic_is_ln2() {
        let s = euler_alternating_sum(|n| 1.0 / (n as f64 + 1.0), 400, 10, 1e-15);
        assert!(s.converged);
        assert!((s.value.re - LN_2).abs() < 1e-14, "{}", s.value.re);
    }

    #[test]
    fn grandi_series_abel_value() {
        // 1 - 1 + 1 - ... has Abel/Euler value 1/2.
        let s = euler_alternating_sum(|_| 1.0, 200, 7, 1e-15);
        assert!((s.value.re - 0.5).abs() < 1e-15);
        // 1 - 2 + 3 - 4 + ... = 1/4.
        let s = euler_alternating_sum(|n| n as f64 + 1.0, 200, 8, 1e-15);
        assert!((s.value.re - 0.25).abs() < 1e-13, "{}", s.value.re);
    }

    #[test]
    fn power_sum_inside_disk_matches_closed_form() {
        // sum z^n / (n + 1) = -ln(1 - z) / z
        let z = Complex64::new(-0.9995, 0.0);
        let s = euler_power_sum(
            |n| Complex64::new(1.0 / (n as f64 + 1.0), 0.0),
            300,
            z,
            20,
            1e-16,
        );
        let exact = -(Complex64::new(1.0, 0.0) - z).ln() / z;
        assert!((s.value - exact).norm() < 1e-14);

        let z = Complex64::from_polar(0.99, 2.5);
        let s = euler_power_sum(
            |n| Complex64::new(1.0 / (n as f64 + 1.0), 0.0),
            300,
            z,
            20,
            1e-16,
        );
        let exact = -(Complex64::new(1.0, 0.0) - z).ln() / z;
        assert!((s.value - exact).norm() < 1e-13);
    }

    #[test]
    fn exhausted_coefficients_return_head_only() {
        let s = euler_alternating_sum(|n| n as f64, 5, 10, 1e-12);
        assert_eq!(s.terms, 5);
        assert_eq!(s.value.re, 0.0 - 1.0 + 2.0 - 3.0 + 4.0);
    }
}
