//! Compilation, noisy simulation and post-selection analysis for the
//! `[[n, n-2, 2]]` error-detecting code.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the compiler and harness use.

pub mod circuit;
pub mod error;
pub mod grover;
pub mod iceberg;
pub mod linalg;
pub mod mcx;
pub mod scalar;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::Real;

pub type StateVector = sim::StateVector<f64>;
pub type Simulator = sim::Simulator<f64>;
pub type Unitary = linalg::CMatrix<f64>;
pub type DetectionModel = stats::DetectionModel<f64>;
