use std::fmt;

use serde::{Deserialize, Serialize};

use super::ring::{CommRing, FiniteRing};
use crate::error::{Error, Result};

/// A prime number `p >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `p^e`, or `None` on overflow past 63 bits.
    pub fn checked_pow(self, e: u32) -> Option<u64> {
        self.0.checked_pow(e).filter(|v| *v < (1u64 << 63))
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        Prime::new(p).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The residue ring `Z/p^m`, `m >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueRing {
    p: Prime,
    m: u32,
    modulus: u64,
}

impl ResidueRing {
    pub fn new(p: Prime, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroPrecision);
        }
        let modulus = p.checked_pow(m).ok_or(Error::ModulusTooLarge { p: p.get(), m })?;
        Ok(ResidueRing { p, m, modulus })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elem(&self, value: i128) -> u64 {
        value.rem_euclid(self.modulus as i128) as u64
    }

    /// The ring one precision lower, `Z/p^(m-1)`.
    pub fn lowered(&self) -> Result<Self> {
        ResidueRing::new(self.p, self.m - 1)
    }

    /// Reduction `Z/p^m -> Z/p^k` for `k <= m`.
    pub fn truncate_to(&self, a: u64, k: u32) -> u64 {
        a % self.p.get().pow(k)
    }

    /// Divide a multiple of `p` by `p`; the quotient lives one precision lower.
    pub fn div_p(&self, a: u64) -> Result<u64> {
        let p = self.p.get();
        if !a.is_multiple_of(p) {
            return Err(Error::NotDivisible {
                p,
                what: format!("{a} mod {}^{}", p, self.m),
            });
        }
        Ok((a / p) % (self.modulus / p))
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p.get())
    }

    /// Teichmüller representative of a residue mod `p`: `a^(p^(m-1))`.
    pub fn teichmuller(&self, a: u64) -> u64 {
        let a = a % self.p.get();
        self.pow(&a, self.p.get().pow(self.m - 1))
    }
}

impl CommRing for ResidueRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.modulus
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.modulus as u128) as u64
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.modulus as u128) as u64
    }

    fn characteristic(&self) -> Option<u64> {
        Some(self.modulus)
    }

    fn from_u64(&self, n: u64) -> u64 {
        n % self.modulus
    }
}

impl FiniteRing for ResidueRing {
    fn elements(&self) -> Vec<u64> {
        (0..self.modulus).collect()
    }

    fn order(&self) -> u64 {
        self.modulus
    }
}

/// An element of `Z/p^m` carrying its own modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ResidueIntRepr", into = "ResidueIntRepr")]
pub struct ResidueInt {
    value: u64,
    ring: ResidueRing,
}

#[derive(Serialize, Deserialize)]
struct ResidueIntRepr {
    p: u64,
    m: u32,
    value: u64,
}

impl TryFrom<ResidueIntRepr> for ResidueInt {
    type Error = Error;

    fn try_from(r: ResidueIntRepr) -> Result<Self> {
        let ring = ResidueRing::new(Prime::new(r.p)?, r.m)?;
        if r.value >= ring.modulus {
            return Err(Error::InvalidAlgebra(format!(
                "value {} not below {}^{}",
                r.value, r.p, r.m
            )));
        }
        Ok(ResidueInt { value: r.value, ring })
    }
}

impl From<ResidueInt> for ResidueIntRepr {
    fn from(r: ResidueInt) -> Self {
        ResidueIntRepr {
            p: r.ring.p.get(),
            m: r.ring.m,
            value: r.value,
        }
    }
}

/// The three operations of [`residue_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl ResidueInt {
    pub fn new(value: i128, p: Prime, m: u32) -> Result<Self> {
        let ring = ResidueRing::new(p, m)?;
        Ok(ResidueInt {
            value: ring.elem(value),
            ring,
        })
    }

    pub fn in_ring(ring: ResidueRing, value: u64) -> Self {
        ResidueInt {
            value: value % ring.modulus,
            ring,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn ring(&self) -> ResidueRing {
        self.ring
    }

    pub fn prime(&self) -> Prime {
        self.ring.p
    }

    pub fn precision(&self) -> u32 {
        self.ring.m
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::ModulusMismatch {
                lhs_p: self.ring.p.get(),
                lhs_m: self.ring.m,
                rhs_p: other.ring.p.get(),
                rhs_m: other.ring.m,
            });
        }
        Ok(())
    }

    /// Equality is only meaningful at equal `(p, m)`; mismatches are errors, not `false`.
    pub fn try_eq(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.value == other.value)
    }

    /// Explicit reduction to a lower precision.
    pub fn truncate(&self, m: u32) -> Result<Self> {
        if m > self.ring.m {
            return Err(Error::ParameterMismatch(format!(
                "cannot truncate precision {} up to {m}",
                self.ring.m
            )));
        }
        let ring = ResidueRing::new(self.ring.p, m)?;
        Ok(ResidueInt::in_ring(ring, self.value))
    }

    /// Exact division by `p`; precision drops from `m` to `m - 1`.
    pub fn exact_div_p(&self) -> Result<Self> {
        let lower = self.ring.lowered()?;
        let q = self.ring.div_p(self.value)?;
        Ok(ResidueInt::in_ring(lower, q))
    }
}

impl fmt::Display for ResidueInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.ring.p, self.ring.m)
    }
}

pub fn residue_arith(a: &ResidueInt, b: &ResidueInt, op: ArithOp) -> Result<ResidueInt> {
    a.check_same(b)?;
    let r = &a.ring;
    let value = match op {
        ArithOp::Add => r.add(&a.value, &b.value),
        ArithOp::Sub => r.sub(&a.value, &b.value),
        ArithOp::Mul => r.mul(&a.value, &b.value),
    };
    Ok(ResidueInt { value, ring: a.ring })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ri(v: i128, p: u64, m: u32) -> ResidueInt {
        ResidueInt::new(v, Prime::new(p).unwrap(), m).unwrap()
    }

    #[test]
    fn primes() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(97).is_ok());
        for n in [0, 1, 4, 9, 91] {
            assert_eq!(Prime::new(n), Err(Error::NotPrime(n)));
        }
    }

    #[test]
    fn arithmetic_examples() {
        let s = residue_arith(&ri(3, 2, 3), &ri(7, 2, 3), ArithOp::Add).unwrap();
        assert_eq!(s.value(), 2);
        let one = residue_arith(&ri(1, 3, 2), &ri(1, 3, 2), ArithOp::Mul).unwrap();
        assert_eq!(one.value(), 1);
        let sq = residue_arith(&ri(5, 2, 3), &ri(5, 2, 3), ArithOp::Mul).unwrap();
        assert_eq!(sq.value(), 25 % 8);
        let d = residue_arith(&ri(3, 2, 3), &ri(7, 2, 3), ArithOp::Sub).unwrap();
        assert_eq!(d.value(), 4);
    }

    #[test]
    fn modulus_mismatch_is_an_error() {
        assert!(matches!(
            residue_arith(&ri(1, 2, 3), &ri(1, 2, 2), ArithOp::Add),
            Err(Error::ModulusMismatch { .. })
        ));
        assert!(ri(1, 2, 3).try_eq(&ri(1, 3, 3)).is_err());
    }

    #[test]
    fn zero_precision_rejected() {
        assert_eq!(
            ResidueRing::new(Prime::new(2).unwrap(), 0),
            Err(Error::ZeroPrecision)
        );
    }

    #[test]
    fn exact_division_drops_precision() {
        let q = ri(6, 2, 3).exact_div_p().unwrap();
        assert_eq!((q.value(), q.precision()), (3, 2));
        assert!(matches!(ri(5, 2, 3).exact_div_p(), Err(Error::NotDivisible { .. })));
        // dividing at precision 1 would produce the zero ring
        assert_eq!(ri(0, 2, 1).exact_div_p(), Err(Error::ZeroPrecision));
    }

    #[test]
    fn ring_axioms_exhaustive_small_moduli() {
        for (p, m) in [(2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 1), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let r = ResidueRing::new(Prime::new(p).unwrap(), m).unwrap();
            assert!(r.modulus() <= 64);
            let els = r.elements();
            let triples = super::super::ring::all_triples(&els);
            assert_eq!(super::super::ring::first_ring_axiom_failure(&r, triples), None);
        }
    }

    #[test]
    fn teichmuller_is_multiplicative_and_lifts() {
        let r = ResidueRing::new(Prime::new(3).unwrap(), 3).unwrap();
        for a in 0..3 {
            let t = r.teichmuller(a);
            assert_eq!(t % 3, a);
            assert_eq!(r.pow(&t, 3), t);
            for b in 0..3 {
                assert_eq!(r.mul(&t, &r.teichmuller(b)), r.teichmuller(a * b % 3));
            }
        }
    }

    #[test]
    fn json_encoding() {
        let x = ri(5, 2, 3);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"p":2,"m":3,"value":5}"#);
        let back: ResidueInt = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<ResidueInt>(r#"{"p":2,"m":3,"value":9}"#).is_err());
        assert!(serde_json::from_str::<ResidueInt>(r#"{"p":4,"m":3,"value":1}"#).is_err());
        assert!(serde_json::from_str::<ResidueInt>(r#"{"p":2,"m":0,"value":0}"#).is_err());
    }
}
