//! Truncated `p`-typical Witt vectors and δ-structures.

pub mod delta;
pub mod iso;
pub mod polys;
pub mod vector;

pub use delta::{check_delta_axioms, delta_from_lift, is_perfect_delta, DeltaAxiomReport, DeltaStructure, TruncatedCarrier};
pub use polys::{verify_ghost_identities, witt_polys, WittPolySet};
pub use vector::{WittRing, WittVector};
