//! Cohomology invariants of Oeljeklaus–Toma manifolds from a number field
//! and a subgroup of totally positive units.

pub mod characters;
pub mod cohomology;
pub mod embeddings;
pub mod error;
pub mod exactmath;
pub mod units;

pub use error::{OtcError, Result};
