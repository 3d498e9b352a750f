//! Numerical laboratory for the Szegő minimum problem: ground-truth
//! `e_n(ρ)` for measures `dρ = e^{-H} dm` with deep zeroes, theoretical
//! decay envelopes, and certifying extremal polynomials.

pub mod bounds;
pub mod error;
pub mod harness;
pub mod polynomials;
pub mod quad;
pub mod real;
pub mod szego;
pub mod weights;

pub use error::{Error, Result};
pub use rug;
