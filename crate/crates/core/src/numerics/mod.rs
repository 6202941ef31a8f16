//! Special functions, hypergeometric series, power-series arithmetic and quadrature.

pub mod accel;
pub mod hypergeometric;
pub mod quadrature;
pub mod series;
pub mod special;

pub use hypergeometric::{pfq, pfq_abel};
pub use quadrature::{integrate, integrate2d, integrate_batch, Quadrature, QuadratureConfig};
pub use series::PowerSeries;
pub use special::{beta, gamma, ln_beta, ln_gamma, pochhammer};
