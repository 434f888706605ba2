//! Quantum levitation states of an atom above a mirror.
//!
//! Gravity confines the atom from above; quantum reflection on the
//! Casimir–Polder tail confines it from below. The crate computes reflection
//! amplitudes, round-trip factors, resonance energies, complex poles and
//! lifetimes, through both direct integration and the effective-range model.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod airy;
pub mod cavity;
pub mod cli;
pub(crate) mod channel;
pub mod constants;
pub mod effrange;
pub mod error;
pub mod liouville;
pub mod numeric;
pub mod potential;
pub mod scatter;

pub use error::{Error, Result};
pub use num_complex::Complex64;
