use rand::Rng;
use serde::Serialize;

use crate::algebra::fp_algebra::examples::function_algebra;
use crate::algebra::{CommRing, FiniteFpAlgebra, FiniteRing, FunctionRing, Prime, ResidueRing};
use crate::error::Result;
use crate::profinite::Tower;
use crate::witt::{WittRing, WittVector};

/// `W_m(F_p^S) -> (Z/p^m)^S`, sending digits `(f_0, ..., f_{m-1})` to
/// `s ↦ sum_i p^i [f_i(s)]` with Teichmüller representatives.
#[derive(Debug, Clone)]
pub struct WittContIso {
    pub witt: WittRing<FiniteFpAlgebra>,
    pub functions: FunctionRing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub exhaustive: bool,
    pub elements_checked: usize,
    pub pairs_checked: usize,
    pub bijective: bool,
    pub additive: bool,
    pub multiplicative: bool,
    pub unital: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.additive && self.multiplicative && self.unital
    }
}

/// The isomorphism for level `n` of `t`.
pub fn witt_of_cont_iso(t: &Tower, n: usize, p: Prime, m: u32) -> Result<WittContIso> {
    t.check_level(n)?;
    WittContIso::new(t.level_size(n), p, m)
}

impl WittContIso {
    pub fn new(points: usize, p: Prime, m: u32) -> Result<Self> {
        let functions = FunctionRing::new(points, ResidueRing::new(p, m)?)?;
        let witt = WittRing::new(function_algebra(p, points), p, m as usize)?;
        Ok(WittContIso { witt, functions })
    }

    fn points(&self) -> usize {
        self.functions.domain_size()
    }

    pub fn apply(&self, x: &WittVector<Vec<u64>>) -> Vec<u64> {
        let z = self.functions.codomain();
        let p = z.prime().get();
        (0..self.points())
            .map(|s| {
                x.components().iter().enumerate().fold(0, |acc, (i, digit)| {
                    z.add(&acc, &z.scale(&z.teichmuller(digit[s]), p.pow(i as u32)))
                })
            })
            .collect()
    }

    /// Teichmüller digits of each value: peel off `[v mod p]` and divide by `p`.
    pub fn inverse(&self, f: &[u64]) -> WittVector<Vec<u64>> {
        let z = self.functions.codomain();
        let (p, m) = (z.prime(), z.precision());
        let mut digits = vec![vec![0; self.points()]; m as usize];
        for (s, v) in f.iter().enumerate() {
            let mut v = *v;
            for (i, digit) in digits.iter_mut().enumerate() {
                let ring = ResidueRing::new(p, m - i as u32).expect("positive precision");
                let a = v % p.get();
                digit[s] = a;
                if i + 1 < m as usize {
                    v = ring.div_p(ring.sub(&v, &ring.teichmuller(a))).expect("difference is divisible by p");
                }
            }
        }
        WittVector(digits)
    }

    fn check_pairs<'a>(&self, report: &mut IsoReport, pairs: impl Iterator<Item = (&'a WittVector<Vec<u64>>, &'a WittVector<Vec<u64>>)>) {
        let (w, r) = (&self.witt, &self.functions);
        for (x, y) in pairs {
            report.pairs_checked += 1;
            let (fx, fy) = (self.apply(x), self.apply(y));
            if self.apply(&w.add(x, y)) != r.add(&fx, &fy) {
                report.additive = false;
                report.witness.get_or_insert_with(|| format!("sum of {:?} and {:?}", x.0, y.0));
            }
            if self.apply(&w.mul(x, y)) != r.mul(&fx, &fy) {
                report.multiplicative = false;
                report.witness.get_or_insert_with(|| format!("product of {:?} and {:?}", x.0, y.0));
            }
        }
    }

    fn empty_report(&self, exhaustive: bool) -> IsoReport {
        IsoReport {
            exhaustive,
            elements_checked: 0,
            pairs_checked: 0,
            bijective: true,
            additive: true,
            multiplicative: true,
            unital: self.apply(&self.witt.one()) == self.functions.one(),
            witness: None,
        }
    }

    /// Every element and every ordered pair.
    pub fn verify_exhaustive(&self) -> IsoReport {
        let mut report = self.empty_report(true);
        let els = self.witt.elements();
        let mut images: Vec<Vec<u64>> = els.iter().map(|x| self.apply(x)).collect();
        report.elements_checked = els.len();
        images.sort();
        images.dedup();
        if images.len() != els.len() || images.len() as u64 != self.functions.order() {
            report.bijective = false;
            report.witness = Some(format!("{} distinct images of {} elements", images.len(), els.len()));
        }
        let pairs = els.iter().flat_map(|x| els.iter().map(move |y| (x, y)));
        self.check_pairs(&mut report, pairs);
        report
    }

    /// `samples` random pairs; bijectivity through the explicit inverse on both sides
    /// (the two sets have the same size `p^{m |S|}`).
    pub fn verify_sampled<R: Rng>(&self, rng: &mut R, samples: usize) -> IsoReport {
        let mut report = self.empty_report(false);
        let p = self.functions.prime().get();
        let m = self.functions.precision() as usize;
        let random_witt = |rng: &mut R| WittVector((0..m).map(|_| (0..self.points()).map(|_| rng.random_range(0..p)).collect()).collect());
        let xs: Vec<_> = (0..samples).map(|_| random_witt(rng)).collect();
        let ys: Vec<_> = (0..samples).map(|_| random_witt(rng)).collect();
        let modulus = self.functions.codomain().modulus();
        for x in xs.iter().chain(&ys) {
            report.elements_checked += 1;
            if self.inverse(&self.apply(x)) != *x {
                report.bijective = false;
                report.witness.get_or_insert_with(|| format!("inverse fails on {:?}", x.0));
            }
            let f: Vec<u64> = (0..self.points()).map(|_| rng.random_range(0..modulus)).collect();
            if self.apply(&self.inverse(&f)) != f {
                report.bijective = false;
                report.witness.get_or_insert_with(|| format!("inverse fails on function {f:?}"));
            }
        }
        self.check_pairs(&mut report, xs.iter().zip(&ys));
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn point_case_is_w_of_fp() {
        for (q, m) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)] {
            let iso = WittContIso::new(1, p(q), m).unwrap();
            assert!(iso.verify_exhaustive().passed());
        }
    }

    #[test]
    fn two_points_all_pairs() {
        let iso = WittContIso::new(2, p(2), 2).unwrap();
        let r = iso.verify_exhaustive();
        assert!(r.passed());
        assert_eq!(r.pairs_checked, 256);
    }

    #[test]
    fn constant_digits_give_teichmuller_constants() {
        let iso = WittContIso::new(3, p(3), 2).unwrap();
        let z = ResidueRing::new(p(3), 2).unwrap();
        for a in 0..3 {
            let x = iso.witt.teichmuller(vec![a; 3]);
            assert_eq!(iso.apply(&x), vec![z.teichmuller(a); 3]);
        }
    }

    #[test]
    fn sampled_three_points_precision_three() {
        let iso = WittContIso::new(3, p(2), 3).unwrap();
        let r = iso.verify_sampled(&mut ChaCha8Rng::seed_from_u64(0), 200);
        assert!(r.passed(), "{:?}", r.witness);
    }

    #[test]
    fn inverse_round_trip() {
        let iso = WittContIso::new(2, p(3), 3).unwrap();
        for f in iso.functions.elements() {
            assert_eq!(iso.apply(&iso.inverse(&f)), f);
        }
    }
}
