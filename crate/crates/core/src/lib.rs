pub mod beta_solver;
pub mod error;
pub mod kernels;
pub mod numerics;
pub mod params;
pub mod q_functions;
pub mod report;
pub mod transform;
pub mod verifier;
pub mod weights;

pub use error::{Error, Result};
pub use params::Params;
pub use report::{Check, Report, Witness};
