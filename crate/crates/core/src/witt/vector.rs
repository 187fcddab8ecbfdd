use std::sync::Arc;

use super::polys::{witt_polys, WittPolySet};
use crate::algebra::{CommRing, FiniteFpAlgebra, FiniteRing, Prime};
use crate::error::{Error, Result};

/// A truncated Witt vector: components `x_0..x_{n-1}` in some base ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WittVector<E>(pub Vec<E>);

impl<E> WittVector<E> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[E] {
        &self.0
    }
}

/// `W_n(R)`: length-`n` `p`-typical Witt vectors over the base ring `R`.
#[derive(Debug, Clone)]
pub struct WittRing<R: CommRing> {
    base: R,
    p: Prime,
    len: usize,
    polys: Arc<WittPolySet>,
}

impl<R: CommRing + PartialEq> PartialEq for WittRing<R> {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.p == other.p && self.len == other.len
    }
}

impl<R: CommRing> WittRing<R> {
    pub fn new(base: R, p: Prime, len: usize) -> Result<Self> {
        let polys = witt_polys(p, len)?;
        Ok(WittRing { base, p, len, polys })
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn polys(&self) -> &WittPolySet {
        &self.polys
    }

    pub fn vector(&self, comps: Vec<R::Elem>) -> Result<WittVector<R::Elem>> {
        if comps.len() != self.len {
            return Err(Error::ParameterMismatch(format!(
                "expected {} Witt components, got {}",
                self.len,
                comps.len()
            )));
        }
        Ok(WittVector(comps))
    }

    fn check(&self, a: &WittVector<R::Elem>) -> Result<()> {
        if a.len() != self.len {
            return Err(Error::ParameterMismatch(format!(
                "Witt vector of length {} used in W_{}",
                a.len(),
                self.len
            )));
        }
        Ok(())
    }

    fn eval_all(
        &self,
        polys: &[crate::algebra::IntPolynomial],
        a: &WittVector<R::Elem>,
        b: &WittVector<R::Elem>,
    ) -> WittVector<R::Elem> {
        let mut vals = a.0.clone();
        vals.extend(b.0.iter().cloned());
        WittVector(polys.iter().map(|q| q.evaluate(&self.base, &vals)).collect())
    }

    pub fn witt_add(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.eval_all(&self.polys.sums, a, b))
    }

    pub fn witt_mul(&self, a: &WittVector<R::Elem>, b: &WittVector<R::Elem>) -> Result<WittVector<R::Elem>> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.eval_all(&self.polys.products, a, b))
    }

    /// Ghost components `w_i = sum_{j<=i} p^j x_j^(p^(i-j))`, computed in the base ring.
    pub fn ghost(&self, a: &WittVector<R::Elem>) -> Vec<R::Elem> {
        let p = self.p.get();
        (0..a.len())
            .map(|i| {
                (0..=i).fold(self.base.zero(), |acc, j| {
                    let pw = self.base.pow(&a.0[j], p.pow((i - j) as u32));
                    let t = self.base.scale(&pw, p.pow(j as u32));
                    self.base.add(&acc, &t)
                })
            })
            .collect()
    }

    /// The Teichmüller lift `[a] = (a, 0, ..., 0)`.
    pub fn teichmuller(&self, a: R::Elem) -> WittVector<R::Elem> {
        let mut v = vec![self.base.zero(); self.len];
        v[0] = a;
        WittVector(v)
    }

    /// Drop the last component: `W_n -> W_{n-1}`.
    pub fn restrict(&self, a: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        WittVector(a.0[..a.len() - 1].to_vec())
    }

    /// Verschiebung `V(x_0, ..., x_{n-2}, _) = (0, x_0, ..., x_{n-2})`.
    pub fn verschiebung(&self, a: &WittVector<R::Elem>) -> WittVector<R::Elem> {
        let mut v = vec![self.base.zero()];
        v.extend(a.0[..a.len() - 1].iter().cloned());
        WittVector(v)
    }

    pub fn lowered(&self) -> Result<Self>
    where
        R: Clone,
    {
        if self.len <= 1 {
            return Err(Error::ZeroPrecision);
        }
        WittRing::new(self.base.clone(), self.p, self.len - 1)
    }
}

impl<R: CommRing> CommRing for WittRing<R> {
    type Elem = WittVector<R::Elem>;

    fn zero(&self) -> Self::Elem {
        WittVector(vec![self.base.zero(); self.len])
    }

    fn one(&self) -> Self::Elem {
        self.teichmuller(self.base.one())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.eval_all(&self.polys.sums, a, b)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.eval_all(&self.polys.differences, &self.zero(), a)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.eval_all(&self.polys.differences, a, b)
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.eval_all(&self.polys.products, a, b)
    }
}

impl<R: FiniteRing> FiniteRing for WittRing<R> {
    fn elements(&self) -> Vec<Self::Elem> {
        let base = self.base.elements();
        let q = base.len();
        let total = q.pow(self.len as u32);
        (0..total)
            .map(|mut idx| {
                WittVector(
                    (0..self.len)
                        .map(|_| {
                            let e = base[idx % q].clone();
                            idx /= q;
                            e
                        })
                        .collect(),
                )
            })
            .collect()
    }

    fn order(&self) -> u64 {
        self.base.order().pow(self.len as u32)
    }
}

impl WittRing<FiniteFpAlgebra> {
    /// Whether the base algebra has bijective Frobenius.
    pub fn base_is_perfect(&self) -> bool {
        self.base.frobenius_matrix().rank() == self.base.dim()
    }

    /// The Frobenius lift over a perfect base: digitwise `p`-th powers.
    pub fn witt_frobenius(&self, a: &WittVector<Vec<u64>>) -> Result<WittVector<Vec<u64>>> {
        if !self.base_is_perfect() {
            return Err(Error::NotPerfect);
        }
        self.check(a)?;
        Ok(self.digitwise_frobenius(a))
    }

    /// Componentwise `p`-th power.
    ///
    /// Over any `F_p`-algebra base this is the Witt vector Frobenius; it is
    /// exposed without the perfectness check for the non-perfect examples
    /// (coperfection, perfectness tests).
    pub fn digitwise_frobenius(&self, a: &WittVector<Vec<u64>>) -> WittVector<Vec<u64>> {
        WittVector(a.0.iter().map(|x| self.base.frobenius(x)).collect())
    }

    /// `y / p` for `y` in `p W_n(R)` over a perfect base, landing in `W_{n-1}(R)`.
    ///
    /// Uses `p = V F`: `p (x_0, x_1, ...) = (0, x_0^p, x_1^p, ...)`.
    pub fn div_p(&self, y: &WittVector<Vec<u64>>) -> Result<WittVector<Vec<u64>>> {
        if !self.base_is_perfect() {
            return Err(Error::NotPerfect);
        }
        if self.len < 2 {
            return Err(Error::ZeroPrecision);
        }
        if !self.base.is_zero(&y.0[0]) {
            return Err(Error::NotDivisible {
                p: self.p.get(),
                what: format!("Witt vector {:?} has nonzero first component", y.0),
            });
        }
        let comps = y.0[1..]
            .iter()
            .map(|c| frobenius_root(&self.base, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittVector(comps))
    }
}

/// The unique `x` with `x^p = y` in a perfect finite `F_p`-algebra.
pub fn frobenius_root(a: &FiniteFpAlgebra, y: &[u64]) -> Result<Vec<u64>> {
    let m = a.frobenius_matrix();
    let cols: Vec<Vec<u64>> = (0..a.dim()).map(|j| m.column(j)).collect();
    crate::algebra::linalg::coordinates(a.prime().get(), &cols, y).ok_or(Error::NotPerfect)
}
