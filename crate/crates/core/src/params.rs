//! The parameter bundle `(alpha, gamma, delta, zeta)` and its derived `(mu, nu, xi)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack for a discriminant that is negative only through rounding (`mu = nu`).
const DISC_SLACK: f64 = 1e-13;

/// Which admissibility ranges hold. Out-of-range bundles are still usable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RangeFlags {
    /// `delta >= 1` and `0 <= xi <= 1/2`, i.e. `1 - 1/delta <= zeta <= 1 - 1/(2 delta)`.
    pub sharp_beta: bool,
    /// `1/2 <= mu <= 1 <= nu` (`1/2 <= alpha <= 1` when `gamma = 0`), needed by the
    /// decreasing-ratio criterion.
    pub decreasing: bool,
    /// `0 < delta <= 1/(1 - zeta)`; differs from `sharp_beta` on the upper zeta side.
    pub delta_zeta: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    alpha: f64,
    gamma: f64,
    delta: f64,
    zeta: f64,
    mu: f64,
    nu: f64,
    xi: f64,
    flags: RangeFlags,
}

fn require(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParams(msg()))
    }
}

fn decreasing_range(gamma: f64, mu: f64, nu: f64) -> bool {
    if gamma == 0.0 {
        (0.5..=1.0).contains(&nu)
    } else {
        (0.5..=1.0).contains(&mu) && nu >= 1.0
    }
}

impl Params {
    /// Derives `mu <= nu` from `mu nu = gamma`, `mu + nu = alpha - gamma`.
    pub fn derive(alpha: f64, gamma: f64, delta: f64, zeta: f64) -> Result<Self> {
        require(
            [alpha, gamma, delta, zeta].iter().all(|x| x.is_finite()),
            || "parameters must be finite".into(),
        )?;
        require(alpha >= 0.0, || format!("alpha must be >= 0, got {alpha}"))?;
        require(gamma >= 0.0, || format!("gamma must be >= 0, got {gamma}"))?;
        require(delta > 0.0, || format!("delta must be > 0, got {delta}"))?;

        let (mu, nu) = if gamma == 0.0 {
            (0.0, alpha)
        } else {
            let sum = alpha - gamma;
            if sum < 0.0 {
                return Err(Error::NegativeRoots { sum });
            }
            let lhs = sum * sum;
            let rhs = 4.0 * gamma;
            let mut disc = lhs - rhs;
            if disc < 0.0 {
                if disc >= -DISC_SLACK * lhs.max(rhs) {
                    disc = 0.0;
                } else {
                    return Err(Error::ComplexRoots {
                        disc_lhs: lhs,
                        disc_rhs: rhs,
                    });
                }
            }
            // larger root first; the product form avoids cancellation in the smaller one
            let nu = 0.5 * (sum + disc.sqrt());
            (gamma / nu, nu)
        };
        let xi = 1.0 - delta * (1.0 - zeta);
        let flags = RangeFlags {
            sharp_beta: delta >= 1.0 && (0.0..=0.5).contains(&xi),
            decreasing: decreasing_range(gamma, mu, nu),
            delta_zeta: if zeta < 1.0 {
                delta <= 1.0 / (1.0 - zeta)
            } else {
                zeta == 1.0
            },
        };
        Ok(Self {
            alpha,
            gamma,
            delta,
            zeta,
            mu,
            nu,
            xi,
            flags,
        })
    }

    /// Bundle with prescribed roots: `gamma = mu nu`, `alpha = mu nu + mu + nu`.
    pub fn from_roots(mu: f64, nu: f64, delta: f64, zeta: f64) -> Result<Self> {
        require(mu >= 0.0 && nu >= 0.0, || {
            format!("roots must be >= 0, got mu {mu}, nu {nu}")
        })?;
        let (mu, nu) = if mu <= nu { (mu, nu) } else { (nu, mu) };
        let mut p = Self::derive(mu * nu + mu + nu, mu * nu, delta, zeta)?;
        // keep the caller's roots exactly rather than the re-solved ones
        p.mu = mu;
        p.nu = nu;
        p.flags.decreasing = decreasing_range(p.gamma, mu, nu);
        Ok(p)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn zeta(&self) -> f64 {
        self.zeta
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn xi(&self) -> f64 {
        self.xi
    }
    pub fn flags(&self) -> RangeFlags {
        self.flags
    }

    pub fn gamma_is_zero(&self) -> bool {
        self.gamma == 0.0
    }

    /// Human-readable notes for every admissibility range that fails.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.flags.sharp_beta {
            out.push(format!(
                "sharp-beta range fails: need delta >= 1 and 0 <= xi <= 1/2 (delta {}, xi {})",
                self.delta, self.xi
            ));
        }
        if !self.flags.decreasing && self.gamma == 0.0 {
            out.push(format!(
                "decreasing-ratio range fails: need 1/2 <= alpha <= 1 (alpha {})",
                self.alpha
            ));
        } else if !self.flags.decreasing {
            out.push(format!(
                "decreasing-ratio range fails: need 1/2 <= mu <= 1 <= nu (mu {}, nu {})",
                self.mu, self.nu
            ));
        }
        if !self.flags.delta_zeta {
            out.push(format!(
                "delta {} exceeds 1/(1 - zeta) for zeta {}",
                self.delta, self.zeta
            ));
        }
        out
    }
}
