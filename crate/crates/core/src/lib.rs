//! Heegaard Floer rank invariants of rational surgeries on knots in homology
//! spheres, computed exactly over GF(2) from finite models of the knot complex.

pub mod cfk;
pub mod error;
pub mod f2linalg;
pub mod rational;
pub mod surgery;
pub mod verify;

pub use error::{Error, Result};
