//! p-Boolean algebras, finite Stone duality over `F_p`, and Frobenius (co)invariants and (co)perfection.

pub mod adjunction;
pub mod flatness;
pub mod frobenius;
pub mod maps;
pub mod pboolean;

pub use adjunction::{compare_hom_sets, coinvariants_adjunction, coperfection_adjunction, invariants_adjunction, perfection_adjunction, HomBijection};
pub use flatness::{flatness, FlatnessReport, LocalFactor};
pub use frobenius::{
    char_p_diagnostics, coperfection, frobenius_coinvariants, frobenius_invariants, is_perfect, perfection, quotient_by_ideal,
    CharPDiagnostics, Coperfection, FrobeniusCoinvariants, FrobeniusInvariants, Perfection,
};
pub use maps::{enumerate_algebra_maps, AlgebraMap};
pub use pboolean::{
    characters_exhaustive, double_dual_of_set_map, evaluation_is_iso, evaluation_map, is_p_boolean, primitive_idempotents,
    spec_chars, stone_dual_of_set, Character, FiniteStoneDual, PBooleanAlgebra,
};
