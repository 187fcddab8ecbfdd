//! Towers and quotient presentations shipped as JSON under `fixtures/`.

use serde::Deserialize;

use super::quotient::EquivRelPresentation;
use super::tower::Tower;
use crate::error::{Error, Result};

pub const NTILDE: &str = include_str!("../../fixtures/ntilde.json");
pub const CANTOR: &str = include_str!("../../fixtures/cantor.json");
pub const DYADIC_INTERVAL: &str = include_str!("../../fixtures/dyadic_interval.json");
pub const NTILDE_FROM_CANTOR: &str = include_str!("../../fixtures/ntilde_from_cantor.json");
pub const INCOMPATIBLE_RELATION: &str = include_str!("../../fixtures/incompatible_relation.json");

/// A quotient presentation given by generating pairs of point labels per level.
#[derive(Debug, Clone, Deserialize)]
pub struct PresentationFixture {
    pub name: String,
    pub space: Tower,
    pub generators: Vec<Vec<(String, String)>>,
}

impl PresentationFixture {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Generating pairs as point indices.
    pub fn generator_indices(&self) -> Result<Vec<Vec<(usize, usize)>>> {
        let index = |n: usize, label: &str| {
            self.space
                .level(n)
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::InvalidTower(format!("no point `{label}` at level {n}")))
        };
        if self.generators.len() != self.space.depth() + 1 {
            return Err(Error::InvalidTower("one generator list per level is required".into()));
        }
        self.generators
            .iter()
            .enumerate()
            .map(|(n, g)| g.iter().map(|(a, b)| Ok((index(n, a)?, index(n, b)?))).collect())
            .collect()
    }

    pub fn presentation(&self) -> Result<EquivRelPresentation> {
        EquivRelPresentation::from_generators(self.space.clone(), self.generator_indices()?)
    }
}

pub fn ntilde() -> Tower {
    Tower::from_json(NTILDE).expect("bundled fixture")
}

pub fn cantor() -> Tower {
    Tower::from_json(CANTOR).expect("bundled fixture")
}

/// The interval as a quotient of the Cantor set: at level `n`, `w01^k ~ w10^k` for `k >= 1`
/// and `|w| + 1 + k = n`. Level `n` of the quotient has `2^(n-1) + 1` points.
pub fn dyadic_interval() -> PresentationFixture {
    PresentationFixture::from_json(DYADIC_INTERVAL).expect("bundled fixture")
}

/// `Ñ` as a quotient of the Cantor set: words are identified when their first `1` sits at
/// the same position (all-zero words form one class).
pub fn ntilde_from_cantor() -> PresentationFixture {
    PresentationFixture::from_json(NTILDE_FROM_CANTOR).expect("bundled fixture")
}

/// A relation on the Cantor tower that transitions do not respect.
pub fn incompatible_relation() -> PresentationFixture {
    PresentationFixture::from_json(INCOMPATIBLE_RELATION).expect("bundled fixture")
}

/// The dyadic identifications at every level of a Cantor tower of the given depth.
pub fn dyadic_generators(depth: usize) -> Vec<Vec<(usize, usize)>> {
    (0..=depth)
        .map(|n| {
            let mut g = Vec::new();
            for k in 1..n {
                let prefix_len = n - 1 - k;
                for w in 0..1usize << prefix_len {
                    let ones = (1usize << k) - 1;
                    let left = (w << (k + 1)) | ones;
                    let right = (w << (k + 1)) | (1 << k);
                    g.push((left, right));
                }
            }
            g.sort_unstable();
            g
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profinite::quotient::{quotient_presentation, quotient_tower, quotient_transition};
    use crate::profinite::tower::{canonical_cantor, canonical_ntilde};

    #[test]
    fn towers_match_constructions() {
        assert_eq!(ntilde(), canonical_ntilde(3).unwrap());
        assert_eq!(cantor(), canonical_cantor(3).unwrap());
    }

    #[test]
    fn dyadic_pairs_match_generator() {
        let f = dyadic_interval();
        assert_eq!(f.name, "dyadic-interval");
        assert_eq!(f.generator_indices().unwrap(), dyadic_generators(3));
    }

    #[test]
    fn dyadic_quotient_sizes() {
        let p = dyadic_interval().presentation().unwrap();
        for n in 1..=3 {
            assert_eq!(quotient_presentation(&p, n).unwrap().len(), (1 << (n - 1)) + 1);
        }
        let deep = EquivRelPresentation::from_generators(canonical_cantor(6).unwrap(), dyadic_generators(6)).unwrap();
        for n in 1..=6 {
            assert_eq!(quotient_presentation(&deep, n).unwrap().len(), (1 << (n - 1)) + 1);
        }
    }

    #[test]
    fn dyadic_transitions_are_not_well_defined() {
        // 01 ~ 10 at level 2, but 0 and 1 stay apart at level 1
        let p = dyadic_interval().presentation().unwrap();
        assert!(matches!(quotient_transition(&p, 1), Err(Error::IncompatibleTransition { level: 2, .. })));
    }

    #[test]
    fn ntilde_quotient_of_cantor() {
        let p = ntilde_from_cantor().presentation().unwrap();
        let (q, map) = quotient_tower(&p).unwrap();
        let nt = canonical_ntilde(3).unwrap();
        for n in 0..=3 {
            assert_eq!(q.level_size(n), nt.level_size(n));
        }
        // class order follows the smallest word: 0^n (∞) first, then first-1 at position n, ..., 1
        let perm: Vec<Vec<usize>> = (0..=3).map(|n| (0..=n).map(|c| if c == 0 { n } else { n - c }).collect()).collect();
        let relabeled: Vec<Vec<usize>> = (0..3).map(|n| q.transition(n).iter().map(|c| perm[n][*c]).collect()).collect();
        for n in 0..3 {
            let mut expected = vec![0; n + 2];
            for c in 0..n + 2 {
                expected[perm[n + 1][c]] = relabeled[n][c];
            }
            assert_eq!(expected, nt.transition(n));
        }
        assert_eq!(map.maps[3].len(), 8);
    }

    #[test]
    fn incompatible_fixture() {
        let p = incompatible_relation().presentation().unwrap();
        assert!(quotient_tower(&p).is_err());
    }
}
