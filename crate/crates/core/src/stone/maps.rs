use serde::{Deserialize, Serialize};

use crate::algebra::{CommRing, FiniteFpAlgebra, FpMatrix};
use crate::error::{Error, Result};

/// Largest number of candidate linear maps [`enumerate_algebra_maps`] will try.
pub const MAP_ENUMERATION_LIMIT: u64 = 1 << 16;

/// An `F_p`-linear map between finite algebras, stored as a `target.dim x source.dim` matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraMap {
    pub matrix: FpMatrix,
}

impl AlgebraMap {
    pub fn new(matrix: FpMatrix) -> Self {
        AlgebraMap { matrix }
    }

    pub fn identity(a: &FiniteFpAlgebra) -> Self {
        AlgebraMap::new(FpMatrix::identity(a.prime(), a.dim()))
    }

    /// Ring map `F_p^S -> F_p^T` pulling back along `g: T -> S` (`g[t]` is the image of `t`).
    pub fn pullback(p: crate::algebra::Prime, source_size: usize, g: &[usize]) -> Self {
        let mut m = FpMatrix::zeros(p, g.len(), source_size);
        for (t, s) in g.iter().enumerate() {
            m.data[t][*s] = 1;
        }
        AlgebraMap::new(m)
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        self.matrix.apply(x)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &AlgebraMap) -> AlgebraMap {
        AlgebraMap::new(self.matrix.compose(&first.matrix))
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.matrix.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.matrix.rows
    }

    /// Check unitality and multiplicativity on basis pairs (enough by bilinearity).
    pub fn ring_hom_failure(&self, source: &FiniteFpAlgebra, target: &FiniteFpAlgebra) -> Option<String> {
        if self.matrix.cols != source.dim() || self.matrix.rows != target.dim() {
            return Some("matrix shape does not match the algebras".into());
        }
        if self.apply(source.unit()) != target.unit() {
            return Some("unit is not preserved".into());
        }
        for i in 0..source.dim() {
            for j in i..source.dim() {
                let (ei, ej) = (source.basis(i), source.basis(j));
                let lhs = self.apply(&source.mul(&ei, &ej));
                let rhs = target.mul(&self.apply(&ei), &self.apply(&ej));
                if lhs != rhs {
                    return Some(format!("f(x{i} x{j}) != f(x{i}) f(x{j})"));
                }
            }
        }
        None
    }

    pub fn is_ring_hom(&self, source: &FiniteFpAlgebra, target: &FiniteFpAlgebra) -> bool {
        self.ring_hom_failure(source, target).is_none()
    }
}

/// Every unital `F_p`-algebra map `source -> target`, by brute force over all linear maps.
///
/// Maps are returned in the lexicographic order of their matrix entries.
pub fn enumerate_algebra_maps(source: &FiniteFpAlgebra, target: &FiniteFpAlgebra) -> Result<Vec<AlgebraMap>> {
    if source.prime() != target.prime() {
        return Err(Error::ParameterMismatch("algebras over different primes".into()));
    }
    let p = source.prime().get();
    let entries = (source.dim() * target.dim()) as u32;
    let count = p
        .checked_pow(entries)
        .filter(|c| *c <= MAP_ENUMERATION_LIMIT)
        .ok_or_else(|| Error::TooLarge(format!("{p}^{entries} linear maps")))?;
    let mut out = Vec::new();
    for mut idx in 0..count {
        let mut m = FpMatrix::zeros(source.prime(), target.dim(), source.dim());
        for r in (0..target.dim()).rev() {
            for c in (0..source.dim()).rev() {
                m.data[r][c] = idx % p;
                idx /= p;
            }
        }
        let f = AlgebraMap::new(m);
        if f.is_ring_hom(source, target) {
            out.push(f);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fp_algebra::examples::{dual_numbers, f4, function_algebra};
    use crate::algebra::Prime;

    fn p2() -> Prime {
        Prime::new(2).unwrap()
    }

    #[test]
    fn counts() {
        // Hom(F_2^2, F_2^2) = maps of 2-point sets = 4
        let a = function_algebra(p2(), 2);
        assert_eq!(enumerate_algebra_maps(&a, &a).unwrap().len(), 4);
        // no maps from F_4 to F_2
        let f2 = FiniteFpAlgebra::prime_field(p2());
        assert!(enumerate_algebra_maps(&f4(), &f2).unwrap().is_empty());
        // Gal(F_4/F_2) has order 2
        assert_eq!(enumerate_algebra_maps(&f4(), &f4()).unwrap().len(), 2);
        // F_2[x]/(x^2) -> F_2 sends x to 0 only
        assert_eq!(enumerate_algebra_maps(&dual_numbers(p2()), &f2).unwrap().len(), 1);
    }

    #[test]
    fn bound_enforced() {
        let a = function_algebra(p2(), 5);
        assert!(matches!(enumerate_algebra_maps(&a, &a), Err(Error::TooLarge(_))));
    }

    #[test]
    fn pullbacks_are_ring_maps() {
        let s = function_algebra(p2(), 3);
        let t = function_algebra(p2(), 2);
        let f = AlgebraMap::pullback(p2(), 3, &[2, 0]);
        assert!(f.is_ring_hom(&s, &t));
        assert_eq!(f.apply(&[1, 0, 1]), vec![1, 1]);
    }
}
