use serde::Serialize;

use super::maps::{dual_via_characters, FunctionRingMap};
use crate::algebra::{FiniteFpAlgebra, FiniteRing, FunctionRing, Prime, ResidueRing};
use crate::error::{Error, Result};
use crate::profinite::Tower;
use crate::stone::pboolean::point_of_character;
use crate::stone::{spec_chars, FiniteStoneDual, PBooleanAlgebra};
use crate::witt::delta::{check_delta_axioms, DeltaAxiomReport, DeltaStructure};

/// Largest carrier on which [`StoneDeltaRingApprox::check_invariants`] enumerates every element.
pub const EXHAUSTIVE_CARRIER_LIMIT: u64 = 1 << 12;

/// `Cont(S_n, Z/p^m)` for a level of a tower, with Frobenius lift `φ = id`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StoneDeltaRingApprox {
    pub tower: Tower,
    pub level: usize,
    #[serde(skip)]
    pub carrier: FunctionRing,
}

impl StoneDeltaRingApprox {
    pub fn prime(&self) -> Prime {
        self.carrier.prime()
    }

    pub fn precision(&self) -> u32 {
        self.carrier.precision()
    }

    pub fn points(&self) -> usize {
        self.carrier.domain_size()
    }

    pub fn phi(&self, f: &[u64]) -> Vec<u64> {
        f.to_vec()
    }

    /// `δ(f) = (f - f^p) / p`; needs precision at least 2.
    pub fn delta_structure(&self) -> Result<DeltaStructure<FunctionRing>> {
        DeltaStructure::identity_lift(self.carrier)
    }

    /// `A/p = F_p^{S_n}`, labeled by the points of the level.
    pub fn reduction(&self) -> Result<PBooleanAlgebra> {
        let labels = self.tower.level(self.level).to_vec();
        PBooleanAlgebra::new(FiniteFpAlgebra::diagonal(self.prime(), labels)?)
    }

    /// `δ` is defined on every element (when enumerable) and satisfies the axioms,
    /// and the reduction is p-Boolean.
    pub fn check_invariants(&self) -> Result<Option<DeltaAxiomReport>> {
        self.reduction()?;
        if self.precision() < 2 {
            return Ok(None);
        }
        let delta = self.delta_structure()?;
        let els = self.carrier.elements();
        if self.carrier.order() > EXHAUSTIVE_CARRIER_LIMIT {
            return Err(Error::TooLarge(format!("{} elements", self.carrier.order())));
        }
        for f in &els {
            delta.delta(f)?;
        }
        let pairs = els.iter().flat_map(|a| els.iter().map(move |b| (a.clone(), b.clone())));
        Ok(Some(check_delta_axioms(&delta, pairs)))
    }
}

/// `S ↦ Cont(S_n, Z/p^m)` at level `n`.
pub fn phi_functor(t: &Tower, n: usize, p: Prime, m: u32) -> Result<StoneDeltaRingApprox> {
    t.check_level(n)?;
    Ok(StoneDeltaRingApprox {
        tower: t.clone(),
        level: n,
        carrier: FunctionRing::new(t.level_size(n), ResidueRing::new(p, m)?)?,
    })
}

/// `A ↦ Spec(A/p)`: the characters of the reduction.
pub fn psi_functor(a: &StoneDeltaRingApprox) -> Result<FiniteStoneDual> {
    Ok(spec_chars(&a.reduction()?))
}

/// `ψ(φ(T))` matched against `S_n` through the evaluation bijection: the point each
/// character evaluates at, in character order. `None` if some character is not an evaluation.
pub fn round_trip_points(t: &Tower, n: usize, p: Prime, m: u32) -> Result<Option<Vec<usize>>> {
    let a = phi_functor(t, n, p, m)?;
    let dual = psi_functor(&a)?;
    Ok(dual.points.iter().map(point_of_character).collect())
}

/// The round trip is a bijection onto the level.
pub fn round_trip_is_identity(t: &Tower, n: usize, p: Prime, m: u32) -> Result<bool> {
    Ok(match round_trip_points(t, n, p, m)? {
        Some(mut pts) => {
            pts.sort_unstable();
            pts == (0..t.level_size(n)).collect::<Vec<_>>()
        }
        None => false,
    })
}

/// Apply `φ` to a level map `f: S -> S'` (giving a ring map `Cont(S') -> Cont(S)`), then
/// `ψ`, and read the result back as a set map `S -> S'`.
pub fn dualize_twice(f: &[usize], source_size: usize, target_size: usize, p: Prime, m: u32) -> Result<Vec<usize>> {
    let coeff = ResidueRing::new(p, m)?;
    let lifted = FunctionRingMap::pullback(
        FunctionRing::new(target_size, coeff)?,
        FunctionRing::new(source_size, coeff)?,
        f,
    )?;
    dual_via_characters(&lifted.reduction(), target_size, source_size)
}
