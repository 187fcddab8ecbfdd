use super::residue::{Prime, ResidueRing};
use super::ring::{CommRing, FiniteRing};
use crate::error::{Error, Result};

/// The ring of functions from a finite set of size `s` into `Z/p^m`, with pointwise operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FunctionRing {
    domain_size: usize,
    codomain: ResidueRing,
}

impl FunctionRing {
    pub fn new(domain_size: usize, codomain: ResidueRing) -> Result<Self> {
        if domain_size == 0 {
            return Err(Error::EmptySet);
        }
        Ok(FunctionRing {
            domain_size,
            codomain,
        })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn codomain(&self) -> ResidueRing {
        self.codomain
    }

    pub fn prime(&self) -> Prime {
        self.codomain.prime()
    }

    pub fn precision(&self) -> u32 {
        self.codomain.precision()
    }

    pub fn is_unit(&self, f: &[u64]) -> bool {
        f.iter().all(|v| self.codomain.is_unit(*v))
    }

    /// Same domain, precision `m - 1`.
    pub fn lowered(&self) -> Result<Self> {
        FunctionRing::new(self.domain_size, self.codomain.lowered()?)
    }

    pub fn with_precision(&self, m: u32) -> Result<Self> {
        FunctionRing::new(self.domain_size, ResidueRing::new(self.prime(), m)?)
    }

    pub fn truncate_to(&self, f: &[u64], m: u32) -> Vec<u64> {
        f.iter().map(|v| self.codomain.truncate_to(*v, m)).collect()
    }

    pub fn div_p(&self, f: &[u64]) -> Result<Vec<u64>> {
        f.iter().map(|v| self.codomain.div_p(*v)).collect()
    }

    /// Pull back along `g: T -> S` (this ring is functions on `S`); `g[t]` is the image of `t`.
    pub fn pullback(&self, f: &[u64], g: &[usize]) -> Vec<u64> {
        g.iter().map(|s| f[*s]).collect()
    }

    pub fn indicator(&self, s: usize) -> Vec<u64> {
        let mut v = vec![0; self.domain_size];
        v[s] = 1 % self.codomain.modulus();
        v
    }
}

impl CommRing for FunctionRing {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.domain_size]
    }

    fn one(&self) -> Vec<u64> {
        vec![self.codomain.one(); self.domain_size]
    }

    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.codomain.add(x, y)).collect()
    }

    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.codomain.neg(x)).collect()
    }

    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.codomain.mul(x, y)).collect()
    }

    fn characteristic(&self) -> Option<u64> {
        Some(self.codomain.modulus())
    }

    fn from_u64(&self, n: u64) -> Vec<u64> {
        vec![n % self.codomain.modulus(); self.domain_size]
    }
}

impl FiniteRing for FunctionRing {
    fn elements(&self) -> Vec<Vec<u64>> {
        let q = self.codomain.modulus();
        let total = q.pow(self.domain_size as u32);
        (0..total)
            .map(|mut idx| {
                (0..self.domain_size)
                    .map(|_| {
                        let v = idx % q;
                        idx /= q;
                        v
                    })
                    .collect()
            })
            .collect()
    }

    fn order(&self) -> u64 {
        self.codomain.modulus().pow(self.domain_size as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_are_pointwise() {
        let r = FunctionRing::new(3, ResidueRing::new(Prime::new(2).unwrap(), 2).unwrap()).unwrap();
        assert!(r.is_unit(&[1, 3, 1]));
        assert!(!r.is_unit(&[1, 2, 1]));
        for f in r.elements() {
            let has_inverse = r.elements().iter().any(|g| r.mul(&f, g) == r.one());
            assert_eq!(has_inverse, r.is_unit(&f));
        }
    }

    #[test]
    fn empty_domain_rejected() {
        let c = ResidueRing::new(Prime::new(3).unwrap(), 1).unwrap();
        assert_eq!(FunctionRing::new(0, c), Err(Error::EmptySet));
    }
}
