//! Exact-arithmetic workbench for dg-categories glued along a finite base
//! category, the modules over them, and the classification data (centers,
//! idempotent ideals, traces, linear topologies, torsion splittings) of the
//! resulting projective-generator categories.
//!
//! Everything computes over `Z`, `Q`, or `Z/n` with exact entries; there is
//! no floating point anywhere. All values are immutable after construction.

pub mod category;
pub mod classify;
pub mod dgcat;
pub mod dgmod;
pub mod error;
pub mod gens;
pub mod gr;
pub mod graded;
pub mod json;
pub mod linsys;
pub mod matrix;
pub mod preadd;
pub mod rep;
pub mod report;
pub mod ring;
pub mod rmod;
#[cfg(test)]
pub(crate) mod testutil;

pub use error::Error;
pub use report::{Failure, Report};
pub use ring::{Ring, Scalar};
