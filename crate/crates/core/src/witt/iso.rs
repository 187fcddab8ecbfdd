//! Two independent descriptions of the isomorphism `W_n(F_p) ≅ Z/p^n`.

use super::vector::{WittRing, WittVector};
use crate::algebra::{CommRing, FiniteFpAlgebra, Prime, ResidueRing};
use crate::error::Result;

/// `(a_0, ..., a_{n-1}) -> sum_i p^i [a_i]` with Teichmüller representatives in `Z/p^n`.
pub fn teichmuller_expansion(target: &ResidueRing, a: &WittVector<Vec<u64>>) -> u64 {
    let p = target.prime().get();
    a.components().iter().enumerate().fold(0, |acc, (i, d)| {
        let t = target.teichmuller(d[0]);
        target.add(&acc, &target.scale(&t, p.pow(i as u32)))
    })
}

/// `(a_0, ..., a_{n-1}) -> w_{n-1}(ã) mod p^n` for arbitrary integer lifts `ã` of the digits.
pub fn ghost_evaluation(target: &ResidueRing, a: &WittVector<Vec<u64>>) -> u64 {
    let p = target.prime().get();
    let n = a.len();
    (0..n).fold(0, |acc, j| {
        let pw = target.pow(&a.components()[j][0], p.pow((n - 1 - j) as u32));
        target.add(&acc, &target.scale(&pw, p.pow(j as u32)))
    })
}

/// Outcome of checking a candidate map `W_n(F_p) -> Z/p^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoCheck {
    pub bijective: bool,
    pub additive: bool,
    pub multiplicative: bool,
    pub unital: bool,
    pub routes_agree: bool,
}

impl IsoCheck {
    pub fn passed(&self) -> bool {
        self.bijective && self.additive && self.multiplicative && self.unital && self.routes_agree
    }
}

/// Exhaustively verify that the Teichmüller expansion is a ring isomorphism and matches the ghost route.
pub fn verify_fp_iso(p: Prime, n: usize) -> Result<IsoCheck> {
    let w = WittRing::new(FiniteFpAlgebra::prime_field(p), p, n)?;
    let z = ResidueRing::new(p, n as u32)?;
    let els = crate::algebra::FiniteRing::elements(&w);
    let images: Vec<u64> = els.iter().map(|a| teichmuller_expansion(&z, a)).collect();
    let mut sorted = images.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let bijective = sorted.len() == els.len() && els.len() as u64 == z.modulus();
    let routes_agree = els
        .iter()
        .zip(&images)
        .all(|(a, img)| ghost_evaluation(&z, a) == *img);
    let mut additive = true;
    let mut multiplicative = true;
    for (i, a) in els.iter().enumerate() {
        for (j, b) in els.iter().enumerate() {
            additive &= teichmuller_expansion(&z, &w.add(a, b)) == z.add(&images[i], &images[j]);
            multiplicative &= teichmuller_expansion(&z, &w.mul(a, b)) == z.mul(&images[i], &images[j]);
        }
    }
    let unital = teichmuller_expansion(&z, &w.one()) == z.one();
    Ok(IsoCheck {
        bijective,
        additive,
        multiplicative,
        unital,
        routes_agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        for (q, n) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)] {
            let c = verify_fp_iso(Prime::new(q).unwrap(), n).unwrap();
            assert!(c.passed(), "p={q} n={n}: {c:?}");
        }
    }

    #[test]
    fn w2_f2_digits() {
        let z = ResidueRing::new(Prime::new(2).unwrap(), 2).unwrap();
        // (1, 0) is 1, (0, 1) is 2, (1, 1) is 1 + 2 = 3
        let v = |a: u64, b: u64| WittVector(vec![vec![a], vec![b]]);
        assert_eq!(teichmuller_expansion(&z, &v(1, 0)), 1);
        assert_eq!(teichmuller_expansion(&z, &v(0, 1)), 2);
        assert_eq!(teichmuller_expansion(&z, &v(1, 1)), 3);
    }
}
