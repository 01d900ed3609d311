//! Numerical toolkit for three-parameter SU(2) rotation estimation on
//! fixed-N two-mode bosonic states: quantum Fisher information matrices,
//! Cramér-Rao bounds, anticoherence certification, Majorana constellations,
//! and polyhedral state generators.

pub mod anticoherence;
pub mod baselines;
pub mod designer;
pub mod io;
pub mod majorana;
pub mod polyhedra;
pub mod qfim;
pub mod spin;

mod error;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
