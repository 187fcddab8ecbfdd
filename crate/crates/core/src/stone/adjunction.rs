use std::collections::HashSet;
use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

use super::frobenius::{coperfection, frobenius_coinvariants, frobenius_invariants, is_perfect, perfection};
use super::maps::{enumerate_algebra_maps, AlgebraMap};
use super::pboolean::is_p_boolean;
use crate::algebra::FiniteFpAlgebra;
use crate::error::{Error, Result};

/// Outcome of comparing two hom-sets through a transport map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomBijection {
    pub adjunction: &'static str,
    pub left_size: usize,
    pub right_size: usize,
    pub bijective: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Whether `transport` maps `left` bijectively onto `right`.
pub fn compare_hom_sets<L, T: Eq + Hash + Debug>(
    adjunction: &'static str,
    left: &[L],
    right: &[T],
    transport: impl Fn(&L) -> T,
) -> HomBijection {
    let targets: HashSet<&T> = right.iter().collect();
    let mut seen = HashSet::new();
    let mut witness = None;
    for f in left {
        let g = transport(f);
        if !targets.contains(&g) {
            witness = Some(format!("transport gives {g:?}, which is not in the target hom-set"));
            break;
        }
        if !seen.insert(g) {
            witness = Some("transport identifies two maps".to_string());
            break;
        }
    }
    if witness.is_none() && seen.len() != right.len() {
        witness = Some(format!("{} of {} maps are not hit", right.len() - seen.len(), right.len()));
    }
    HomBijection {
        adjunction,
        left_size: left.len(),
        right_size: right.len(),
        bijective: witness.is_none(),
        witness,
    }
}

/// `Hom(B, A^{Frob=1}) -> Hom(B, A)` by composing with the inclusion, for p-Boolean `B`.
pub fn invariants_adjunction(a: &FiniteFpAlgebra, b: &FiniteFpAlgebra) -> Result<HomBijection> {
    if !is_p_boolean(b) {
        return Err(Error::NotPBoolean);
    }
    let inv = frobenius_invariants(a)?;
    let left = enumerate_algebra_maps(b, &inv.algebra)?;
    let right = enumerate_algebra_maps(b, a)?;
    Ok(compare_hom_sets("invariants", &left, &right, |f| inv.inclusion.after(f)))
}

/// `Hom(A_{Frob=1}, B) -> Hom(A, B)` by precomposing with the projection, for p-Boolean `B`.
pub fn coinvariants_adjunction(a: &FiniteFpAlgebra, b: &FiniteFpAlgebra) -> Result<HomBijection> {
    if !is_p_boolean(b) {
        return Err(Error::NotPBoolean);
    }
    let right = enumerate_algebra_maps(a, b)?;
    Ok(match frobenius_coinvariants(a)?.quotient {
        Some((q, proj)) => {
            let left = enumerate_algebra_maps(&q, b)?;
            compare_hom_sets("coinvariants", &left, &right, |f| f.after(&proj))
        }
        // the zero ring maps to no nonzero ring
        None => compare_hom_sets::<AlgebraMap, _>("coinvariants", &[], &right, |f| f.clone()),
    })
}

/// `Hom(A_perf, B) -> Hom(A, B)` by precomposing with the unit, for perfect `B`.
pub fn coperfection_adjunction(a: &FiniteFpAlgebra, b: &FiniteFpAlgebra) -> Result<HomBijection> {
    if !is_perfect(b) {
        return Err(Error::NotPerfect);
    }
    let cp = coperfection(a)?;
    let left = enumerate_algebra_maps(&cp.algebra, b)?;
    let right = enumerate_algebra_maps(a, b)?;
    Ok(compare_hom_sets("coperfection", &left, &right, |f| f.after(&cp.unit)))
}

/// `Hom(B, A^perf) -> Hom(B, A)` by composing with the counit, for perfect `B`.
pub fn perfection_adjunction(a: &FiniteFpAlgebra, b: &FiniteFpAlgebra) -> Result<HomBijection> {
    if !is_perfect(b) {
        return Err(Error::NotPerfect);
    }
    let pf = perfection(a)?;
    let left = enumerate_algebra_maps(b, &pf.algebra)?;
    let right = enumerate_algebra_maps(b, a)?;
    Ok(compare_hom_sets("perfection", &left, &right, |f| pf.counit.after(f)))
}
