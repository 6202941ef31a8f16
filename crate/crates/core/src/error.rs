use thiserror::Error;

/// Errors raised by the numerical kernels and the verification layers built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series failed to converge after {terms} terms (last term magnitude {last_term:e})")]
    NonConvergent { terms: usize, last_term: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("non-finite coefficient at index {index} in {context}")]
    PrecisionLoss { context: &'static str, index: usize },

    #[error(
        "quadrature tolerance not met: value {value}, error estimate {error:e} after level {level}"
    )]
    ToleranceNotMet { value: f64, error: f64, level: u32 },

    #[error("integrand returned a non-finite value at t = {t:e}")]
    NonFiniteIntegrand { t: f64 },

    #[error("complex roots: (alpha - gamma)^2 = {disc_lhs} < 4 gamma = {disc_rhs}")]
    ComplexRoots { disc_lhs: f64, disc_rhs: f64 },

    #[error("negative roots: alpha - gamma = {sum} < 0 with gamma > 0")]
    NegativeRoots { sum: f64 },

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("integrand diverges at t = 0: {0}")]
    DivergentTail(String),

    #[error("beta inversion is singular: integral I = {integral} (need I < 1)")]
    SingularInversion { integral: f64 },

    #[error("value vanishes at z = {re} + {im}i")]
    ZeroValue { re: f64, im: f64 },

    #[error("denominator vanishes at z = {re} + {im}i")]
    ZeroDenominator { re: f64, im: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
