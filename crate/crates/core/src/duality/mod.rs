//! Stone δ-rings at finite level, the duality functors with finite sets, the isomorphism
//! `W_m(F_p^S) ≅ (Z/p^m)^S`, δ-(co)invariants and (co)perfection, and flatness of
//! dual maps and covers.

pub mod carrier;
pub mod flat;
pub mod maps;
pub mod stone_delta;
pub mod witt_cont;

pub use carrier::{
    delta_coinvariants, delta_coinvariants_adjunction, delta_coperfection, delta_invariants, delta_invariants_adjunction,
    delta_perfection, stone_characterization_check, DeltaCoinvariants, DeltaInvariants, StoneCharacterization, WittCarrier,
};
pub use flat::{enumerate_level_families, ff_check, p_complete_ff_check, site_translate, FFWitness, LevelCover, TranslatedCover};
pub use maps::{dual_via_characters, FunctionRingMap};
pub use stone_delta::{dualize_twice, phi_functor, psi_functor, round_trip_is_identity, StoneDeltaRingApprox};
pub use witt_cont::{witt_of_cont_iso, IsoReport, WittContIso};
