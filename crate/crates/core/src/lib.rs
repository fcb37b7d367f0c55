//! Exact verification of pinching and twisting for symplectic integer matrix
//! monoids, with a floating-point spectral cross-check and a Monte-Carlo
//! estimator for Lyapunov exponents of random products.

pub mod algebra;
pub mod error;
pub mod symplectic;

pub use error::{Error, Result};
pub mod criterion;
pub mod prym;
pub mod quadratic;
pub mod spectral;
pub mod mirror_quintic;
pub mod lyapunov;
pub mod cli;
