//! Finite spectral models of fractional Schrödinger operators with complex
//! potentials on flat tori, the round sphere and the line, with numerical
//! checks of eigenvalue enclosures, Birman–Schwinger equivalence, classical
//! one-dimensional bounds and resolvent growth exponents.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod manifolds;
pub mod operators;
pub mod randomization;
pub mod regions;

pub use error::{Error, Result};
