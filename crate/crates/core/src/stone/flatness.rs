use serde::Serialize;

use super::frobenius::frobenius_invariants;
use super::maps::AlgebraMap;
use super::pboolean::primitive_idempotents;
use crate::algebra::linalg::span_basis;
use crate::algebra::{CommRing, FiniteFpAlgebra};
use crate::error::{Error, Result};

/// Flatness data of `B` over one local factor `eA` of `A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalFactor {
    pub idempotent: Vec<u64>,
    pub factor_dim: usize,
    pub residue_degree: usize,
    pub fiber_dim: usize,
    /// Number of generators of `f(e) B` over `eA`; free iff `fiber_dim = rank * factor_dim`.
    pub rank: usize,
    pub free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlatnessReport {
    pub flat: bool,
    pub faithfully_flat: bool,
    pub factors: Vec<LocalFactor>,
}

fn span_dim(a: &FiniteFpAlgebra, vectors: &[Vec<u64>]) -> usize {
    span_basis(a.prime().get(), a.dim(), vectors).len()
}

/// Flatness of a finite algebra map `f: A -> B`.
///
/// `A` splits as a product of local factors `eA` (one per primitive idempotent, all of
/// which lie in `A^{Frob=1}`); the maximal ideal of `eA` is `e` times the nilradical
/// `ker Frob^dim`. A finite module over a local artinian ring is flat iff free, and it is
/// free iff its dimension is the number of minimal generators times `dim eA`.
pub fn flatness(f: &AlgebraMap, a: &FiniteFpAlgebra, b: &FiniteFpAlgebra) -> Result<FlatnessReport> {
    if let Some(why) = f.ring_hom_failure(a, b) {
        return Err(Error::NotRingHom(why));
    }
    let inv = frobenius_invariants(a)?;
    let nil = a.frobenius_matrix().pow(a.dim() as u32).kernel();
    let mut factors = Vec::new();
    for e_inv in primitive_idempotents(&inv.algebra) {
        let e = inv.inclusion.apply(&e_inv);
        let factor: Vec<Vec<u64>> = (0..a.dim()).map(|i| a.mul(&e, &a.basis(i))).collect();
        let maximal: Vec<Vec<u64>> = nil.iter().map(|n| a.mul(&e, n)).collect();
        let factor_dim = span_dim(a, &factor);
        let residue_degree = factor_dim - span_dim(a, &maximal);
        let fe = f.apply(&e);
        let fiber: Vec<Vec<u64>> = (0..b.dim()).map(|j| b.mul(&fe, &b.basis(j))).collect();
        let fiber_dim = span_dim(b, &fiber);
        let maximal_image: Vec<Vec<u64>> = maximal
            .iter()
            .flat_map(|m| {
                let fm = f.apply(m);
                fiber.iter().map(move |x| (fm.clone(), x.clone()))
            })
            .map(|(fm, x)| b.mul(&fm, &x))
            .collect();
        let special_fiber = fiber_dim - span_dim(b, &maximal_image);
        if !special_fiber.is_multiple_of(residue_degree) {
            return Err(Error::Internal("special fiber is not a vector space over the residue field".into()));
        }
        let rank = special_fiber / residue_degree;
        factors.push(LocalFactor {
            idempotent: e,
            factor_dim,
            residue_degree,
            fiber_dim,
            rank,
            free: fiber_dim == rank * factor_dim,
        });
    }
    let flat = factors.iter().all(|l| l.free);
    let faithfully_flat = flat && factors.iter().all(|l| l.rank > 0);
    Ok(FlatnessReport {
        flat,
        faithfully_flat,
        factors,
    })
}
