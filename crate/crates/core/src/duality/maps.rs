use serde::Serialize;

use crate::algebra::{CommRing, FpMatrix, FunctionRing};
use crate::error::{Error, Result};
use crate::stone::{spec_chars, stone_dual_of_set, AlgebraMap};
use crate::stone::pboolean::point_of_character;

/// A ring map `(Z/p^m)^S -> (Z/p^m)^T`, given by the images of the indicator functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionRingMap {
    #[serde(skip)]
    pub source: FunctionRing,
    #[serde(skip)]
    pub target: FunctionRing,
    pub images: Vec<Vec<u64>>,
}

impl FunctionRingMap {
    /// Validates that the images are orthogonal idempotents summing to `1`, which is
    /// exactly the condition for the induced module map to be a unital ring map.
    pub fn new(source: FunctionRing, target: FunctionRing, images: Vec<Vec<u64>>) -> Result<Self> {
        if source.codomain() != target.codomain() {
            return Err(Error::ParameterMismatch("function rings with different coefficients".into()));
        }
        if images.len() != source.domain_size() || images.iter().any(|v| v.len() != target.domain_size()) {
            return Err(Error::NotRingHom("image table has the wrong shape".into()));
        }
        for (s, e) in images.iter().enumerate() {
            if target.mul(e, e) != *e {
                return Err(Error::NotRingHom(format!("image of indicator {s} is not idempotent")));
            }
            for (r, f) in images.iter().enumerate().skip(s + 1) {
                if !target.is_zero(&target.mul(e, f)) {
                    return Err(Error::NotRingHom(format!("images of indicators {s} and {r} are not orthogonal")));
                }
            }
        }
        let sum = images.iter().fold(target.zero(), |acc, e| target.add(&acc, e));
        if sum != target.one() {
            return Err(Error::NotRingHom("images of the indicators do not sum to 1".into()));
        }
        Ok(FunctionRingMap { source, target, images })
    }

    /// Pullback along `g: T -> S` (`g[t]` is the image of `t`).
    pub fn pullback(source: FunctionRing, target: FunctionRing, g: &[usize]) -> Result<Self> {
        if g.len() != target.domain_size() || g.iter().any(|s| *s >= source.domain_size()) {
            return Err(Error::ParameterMismatch("set map does not match the function rings".into()));
        }
        let images = (0..source.domain_size())
            .map(|s| g.iter().map(|x| u64::from(*x == s)).collect())
            .collect();
        FunctionRingMap::new(source, target, images)
    }

    pub fn identity(ring: FunctionRing) -> Self {
        let g: Vec<usize> = (0..ring.domain_size()).collect();
        FunctionRingMap::pullback(ring, ring, &g).expect("identity is a ring map")
    }

    pub fn apply(&self, f: &[u64]) -> Vec<u64> {
        let t = &self.target;
        f.iter()
            .zip(&self.images)
            .fold(t.zero(), |acc, (c, e)| t.add(&acc, &t.scale(e, *c)))
    }

    /// The induced map `F_p^S -> F_p^T`.
    pub fn reduction(&self) -> AlgebraMap {
        let p = self.source.prime();
        let cols: Vec<Vec<u64>> = self.images.iter().map(|e| e.iter().map(|v| v % p.get()).collect()).collect();
        AlgebraMap::new(FpMatrix::from_columns(p, self.target.domain_size(), &cols))
    }

    /// The dual set map `T -> S`: each `t` lies in the support of exactly one image.
    pub fn dual_map(&self) -> Vec<usize> {
        (0..self.target.domain_size())
            .map(|t| self.images.iter().position(|e| e[t] != 0).expect("images partition T"))
            .collect()
    }
}

/// Read a ring map `F_p^S -> F_p^T` back as a set map `T -> S` through characters:
/// each character of `F_p^T` is precomposed with `f` and identified with a point of `S`.
pub fn dual_via_characters(f: &AlgebraMap, s_size: usize, t_size: usize) -> Result<Vec<usize>> {
    let p = crate::algebra::Prime::new(f.matrix.p)?;
    let labels = |n: usize, c: char| (0..n).map(|i| format!("{c}{i}")).collect::<Vec<_>>();
    let fs = stone_dual_of_set(&labels(s_size, 's'), p)?;
    let ft = stone_dual_of_set(&labels(t_size, 't'), p)?;
    if let Some(why) = f.ring_hom_failure(&fs, &ft) {
        return Err(Error::NotRingHom(why));
    }
    let mut out = vec![0; t_size];
    for chi in spec_chars(&ft).points {
        let t = point_of_character(&chi).ok_or_else(|| Error::Internal("character of F_p^T is not an evaluation".into()))?;
        let image = chi.precompose(p, f);
        out[t] = point_of_character(&image).ok_or_else(|| Error::Internal("precomposed character is not an evaluation".into()))?;
    }
    Ok(out)
}
