//! Finite presheaf toposes and the colimits that can be derived in them from
//! finite limits, local cartesian closure and a subobject classifier.

pub mod derived;
pub mod error;
pub mod fincat;
pub mod lcc;
pub mod presheaf;
pub mod sublattice;
pub mod verify;

pub use error::{Result, ToposError};
