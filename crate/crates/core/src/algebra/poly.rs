use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::residue::Prime;
use super::ring::CommRing;
use crate::error::{Error, Result};

/// A multivariate polynomial with arbitrary-precision integer coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vectors, with zero
/// coefficients never stored, so equal polynomials compare and serialize
/// identically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPolynomial {
    variables: Vec<String>,
    #[serde(with = "terms_serde")]
    terms: BTreeMap<Vec<u32>, BigInt>,
}

mod terms_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Term {
        exp: Vec<u32>,
        coeff: String,
    }

    pub fn serialize<S: Serializer>(
        terms: &BTreeMap<Vec<u32>, BigInt>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Term> = terms
            .iter()
            .map(|(e, c)| Term {
                exp: e.clone(),
                coeff: c.to_string(),
            })
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<Vec<u32>, BigInt>, D::Error> {
        let v = Vec::<Term>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for t in v {
            let c: BigInt = t.coeff.parse().map_err(serde::de::Error::custom)?;
            if !c.is_zero() {
                out.insert(t.exp, c);
            }
        }
        Ok(out)
    }
}

impl IntPolynomial {
    pub fn zero(variables: Vec<String>) -> Self {
        IntPolynomial {
            variables,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(variables: Vec<String>, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(variables);
        let c = c.into();
        if !c.is_zero() {
            let n = p.variables.len();
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    /// The monomial `x_index`.
    pub fn variable(variables: Vec<String>, index: usize) -> Self {
        let mut exp = vec![0; variables.len()];
        exp[index] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exp, BigInt::one());
        IntPolynomial { variables, terms }
    }

    pub fn from_terms(
        variables: Vec<String>,
        terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>,
    ) -> Self {
        let mut p = Self::zero(variables);
        for (e, c) in terms {
            assert_eq!(e.len(), p.variables.len(), "exponent arity");
            p.add_term(e, c);
        }
        p
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_vars(&self, other: &Self) {
        assert_eq!(self.variables, other.variables, "polynomial variable sets differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_vars(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.variables.clone());
        }
        IntPolynomial {
            variables: self.variables.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_vars(other);
        let mut acc: HashMap<Vec<u32>, BigInt> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_default() += c1 * c2;
            }
        }
        IntPolynomial {
            variables: self.variables.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.variables.clone(), 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divide every coefficient by `p`, failing if any coefficient is not a multiple.
    pub fn exact_div_p(&self, p: Prime) -> Result<Self> {
        let p = BigInt::from(p.get());
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let (q, r) = c.div_rem(&p);
            if !r.is_zero() {
                return Err(Error::NotDivisible {
                    p: p.try_into().unwrap_or(0),
                    what: format!("coefficient {c} of monomial {e:?}"),
                });
            }
            terms.insert(e.clone(), q);
        }
        Ok(IntPolynomial {
            variables: self.variables.clone(),
            terms,
        })
    }

    /// Evaluate in a commutative ring; integer coefficients are mapped through
    /// [`CommRing::from_bigint`].
    pub fn evaluate<R: CommRing>(&self, ring: &R, values: &[R::Elem]) -> R::Elem {
        assert_eq!(values.len(), self.variables.len(), "evaluation arity");
        let mut powers: HashMap<(usize, u32), R::Elem> = HashMap::new();
        let mut acc = ring.zero();
        for (e, c) in &self.terms {
            let coeff = ring.from_bigint(c);
            if ring.is_zero(&coeff) {
                continue;
            }
            let mut term = coeff;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = powers
                    .entry((i, k))
                    .or_insert_with(|| ring.pow(&values[i], k as u64));
                term = ring.mul(&term, pw);
            }
            acc = ring.add(&acc, &term);
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(v, k)| {
                    if *k == 1 {
                        self.variables[v].clone()
                    } else {
                        format!("{}^{}", self.variables[v], k)
                    }
                })
                .collect();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vars() -> Vec<String> {
        vec!["X0".into(), "Y0".into()]
    }

    fn x() -> IntPolynomial {
        IntPolynomial::variable(vars(), 0)
    }

    fn y() -> IntPolynomial {
        IntPolynomial::variable(vars(), 1)
    }

    fn two() -> Prime {
        Prime::new(2).unwrap()
    }

    #[test]
    fn division_examples() {
        let xy = x().mul(&y());
        let two_xy = xy.scale(&BigInt::from(2));
        assert_eq!(two_xy.exact_div_p(two()).unwrap(), xy);

        let binom = x().add(&y()).pow(2).sub(&x().pow(2)).sub(&y().pow(2));
        assert_eq!(binom.exact_div_p(two()).unwrap(), xy);

        let e = x().pow(2).add(&y().pow(2)).sub(&x().add(&y()).pow(2));
        assert_eq!(e.exact_div_p(two()).unwrap(), xy.neg());
    }

    #[test]
    fn non_divisible_aborts() {
        let e = x().add(&y()).pow(2);
        assert!(matches!(e.exact_div_p(two()), Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let z = x().sub(&x());
        assert!(z.is_zero());
        assert_eq!(z, IntPolynomial::zero(vars()));
        assert_eq!(x().add(&y()), y().add(&x()));
        assert_eq!(x().add(&y()).to_string(), "Y0 + X0");
    }

    fn arb_poly() -> impl Strategy<Value = IntPolynomial> {
        proptest::collection::vec(((0u32..4, 0u32..4), -50i64..50), 0..6).prop_map(|ts| {
            IntPolynomial::from_terms(
                vars(),
                ts.into_iter().map(|((a, b), c)| (vec![a, b], BigInt::from(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn div_after_scale_is_identity(p in arb_poly(), q in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let prime = Prime::new(q).unwrap();
            let scaled = p.scale(&BigInt::from(q));
            prop_assert_eq!(scaled.exact_div_p(prime).unwrap(), p);
        }

        #[test]
        fn evaluation_is_a_ring_map(a in arb_poly(), b in arb_poly(), u in 0u64..8, v in 0u64..8) {
            let r = super::super::residue::ResidueRing::new(two(), 3).unwrap();
            let vals = [u, v];
            prop_assert_eq!(
                a.mul(&b).evaluate(&r, &vals),
                r.mul(&a.evaluate(&r, &vals), &b.evaluate(&r, &vals))
            );
            prop_assert_eq!(
                a.add(&b).evaluate(&r, &vals),
                r.add(&a.evaluate(&r, &vals), &b.evaluate(&r, &vals))
            );
        }

        #[test]
        fn json_round_trip(a in arb_poly()) {
            let s = serde_json::to_string(&a).unwrap();
            let back: IntPolynomial = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
