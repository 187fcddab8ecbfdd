use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// The ring contract consumed by the Witt, duality and condensed layers.
///
/// A value implementing this trait is a ring *handle*: it carries whatever
/// parameters are needed (modulus, structure constants, domain size) and
/// elements are plain data interpreted relative to it.
pub trait CommRing {
    type Elem: Clone + Eq + Hash + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    /// Positive characteristic, when known; used to reduce integer constants.
    fn characteristic(&self) -> Option<u64> {
        None
    }

    fn from_u64(&self, n: u64) -> Self::Elem {
        let n = match self.characteristic() {
            Some(c) => n % c,
            None => n,
        };
        let mut acc = self.zero();
        let one = self.one();
        for bit in (0..64 - n.leading_zeros()).rev() {
            acc = self.add(&acc, &acc);
            if (n >> bit) & 1 == 1 {
                acc = self.add(&acc, &one);
            }
        }
        acc
    }

    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        if let Some(c) = self.characteristic() {
            let r = n.mod_floor(&BigInt::from(c));
            return self.from_u64(r.to_u64().expect("reduced below characteristic"));
        }
        let mut acc = self.zero();
        let one = self.one();
        let mag = n.abs();
        for bit in (0..mag.bits()).rev() {
            acc = self.add(&acc, &acc);
            if mag.bit(bit) {
                acc = self.add(&acc, &one);
            }
        }
        if n.is_negative() && !n.is_zero() {
            self.neg(&acc)
        } else {
            acc
        }
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn scale(&self, a: &Self::Elem, n: u64) -> Self::Elem {
        self.mul(a, &self.from_u64(n))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// A ring whose elements can be listed.
pub trait FiniteRing: CommRing {
    fn elements(&self) -> Vec<Self::Elem>;

    fn order(&self) -> u64 {
        self.elements().len() as u64
    }
}

/// Every `(a, b)` pair of a finite ring that violates a ring axiom, stopping at the first.
///
/// Checks associativity and commutativity of both operations, distributivity,
/// and the additive/multiplicative identities and additive inverses.
pub fn first_ring_axiom_failure<R: FiniteRing>(
    ring: &R,
    triples: impl IntoIterator<Item = (R::Elem, R::Elem, R::Elem)>,
) -> Option<String> {
    let zero = ring.zero();
    let one = ring.one();
    for (a, b, c) in triples {
        let checks: [(&str, bool); 8] = [
            (
                "add assoc",
                ring.add(&ring.add(&a, &b), &c) == ring.add(&a, &ring.add(&b, &c)),
            ),
            (
                "mul assoc",
                ring.mul(&ring.mul(&a, &b), &c) == ring.mul(&a, &ring.mul(&b, &c)),
            ),
            ("add comm", ring.add(&a, &b) == ring.add(&b, &a)),
            ("mul comm", ring.mul(&a, &b) == ring.mul(&b, &a)),
            (
                "distrib",
                ring.mul(&a, &ring.add(&b, &c)) == ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c)),
            ),
            ("add unit", ring.add(&a, &zero) == a),
            ("mul unit", ring.mul(&a, &one) == a),
            ("add inverse", ring.add(&a, &ring.neg(&a)) == zero),
        ];
        if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
            return Some(format!("{name} fails at a={a:?}, b={b:?}, c={c:?}"));
        }
    }
    None
}

/// All ordered triples drawn from `els`.
pub fn all_triples<E: Clone>(els: &[E]) -> impl Iterator<Item = (E, E, E)> + '_ {
    let n = els.len();
    (0..n * n * n).map(move |i| {
        (
            els[i / (n * n)].clone(),
            els[(i / n) % n].clone(),
            els[i % n].clone(),
        )
    })
}
