//! Exact computations for genus-2 tropical curves whose Jacobians split
//! as a product of two tropical elliptic curves.
//!
//! The pipeline runs from splitting data `(d, k, lp, l)` through the
//! principally polarized quotient, Selling reduction and the
//! fundamental-domain representative to a theta curve or a dumbbell family,
//! and finally to the pair of degree-`d` covers onto the elliptic factors.
//! [`locus`] sweeps the length quadrant and groups it into cones by
//! reduction word.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod exact;
pub mod form;
pub mod locus;
pub mod reconstruct;
pub mod selling;
pub mod splitting;
pub mod tav;

pub use error::{Error, Result, ValidationError};
pub use exact::{Integer, IntMatrix, Matrix, RatMatrix, Rational};
