//! Pricing goods whose per-use value evolves with consumption.
//!
//! The closed forms in [`analytics`] and the grid oracle in [`sim`] are
//! generic over [`Scalar`], so the same code runs on `f32`, `f64` and exact
//! rationals. Simulation and policies work in `f64`.

pub mod analytics;
pub mod distributions;
pub mod error;
pub mod process;
pub mod quad;
pub mod scalar;
pub mod schemes;
pub mod sim;
pub mod strategy;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

/// Walk parameters in double precision.
pub type Params = analytics::WalkParams<f64>;
/// Walk parameters over arbitrary-precision rationals.
pub type ExactParams = analytics::WalkParams<num_rational::BigRational>;
/// Initial-value law in double precision.
pub type Distribution = distributions::ValueDistribution<f64>;
