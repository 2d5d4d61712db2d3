//! High-precision Frobenius series solutions of
//!
//! ```text
//! -s² (ψ'' + (1-ν₊-ν₋)/z ψ' + ν₊ν₋/z² ψ) + (1/z) Σₙ vₙ zⁿ ψ = 0
//! ```
//!
//! summed term by term in arbitrary precision, with roundoff diagnostics,
//! Wronskian checks, a-priori cost prediction, analytic continuation and a
//! shooting eigensolver built on top.

pub mod accuracy;
pub mod apriori;
pub mod cli;
pub mod error;
pub mod frobenius;
pub mod labs;
pub mod mpcore;
pub mod spectra;

pub use error::{Error, Rejection, Result};
