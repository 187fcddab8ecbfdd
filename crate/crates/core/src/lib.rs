//! Exact truncated `p`-typical Witt vectors, δ-rings, finite Stone duality over
//! `F_p`, light profinite sets as towers of finite sets, and finite-level
//! checks of the δ-Stone duality and condensed comparison statements.

pub mod algebra;
pub mod condensed;
pub mod duality;
pub mod error;
pub mod profinite;
pub mod stone;
pub mod verify;
pub mod witt;

pub use error::{Error, Result};
