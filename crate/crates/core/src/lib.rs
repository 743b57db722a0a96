//! Numerical laboratory for convergence rates of Schrödinger-type
//! propagators along curves.

pub mod bump;
pub mod curves;
pub mod error;
pub mod experiments;
pub mod exponents;
pub mod initial_data;
pub mod maximal;
pub mod propagator;
pub mod quadrature;
pub mod report;
pub mod cli;

pub use error::{Error, Result};
