//! Operator Riccati equations `A1 X − X A0 − X V X + V* = 0` on finite
//! dimensional complex Hilbert spaces, solved through the geometry of
//! invariant graph subspaces of the block operator `B = [[A0, V], [V*, A1]]`.

pub mod cli;
pub mod contractive;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod instances;
pub mod json;
pub mod matrix;
pub mod random;
pub mod riccati;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, Subspace, TolerancePolicy};
pub use num_complex::Complex64;
