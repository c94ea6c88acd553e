//! Exact construction of Abelian differentials on smooth plane curves over Q.

pub mod algebraic;
pub mod curve;
pub mod differentials;
pub mod error;
pub mod exact;

pub use error::{Error, Result};
