//! Numerical and exact verification of Harish-Chandra spherical integrals
//! over compact forms of semisimple Lie algebras.
//!
//! The crate builds root systems and Chevalley bases from Cartan matrices,
//! enumerates Weyl groups, samples Haar measure on the compact groups, and
//! evaluates nilpotent Gaussian integrals by exact complex Wick pairing, so
//! that both sides of the spherical-integral identity can be compared with
//! full control over constants.

pub mod chevalley;
pub mod error;
pub mod gaussian;
pub mod haar;
pub mod label;
pub mod rootsys;
pub mod spherical;

pub use error::{Error, Result};

/// f64-backed complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Exact rational scalar for root-system tables.
pub type Rat = num_rational::Rational64;
