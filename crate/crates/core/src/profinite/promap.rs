use rand::Rng;
use serde::{Deserialize, Serialize};

use super::tower::Tower;
use crate::error::{Error, Result};

/// A map of pro-objects `A -> B`: a strictly increasing reindexing `g` and level maps
/// `f_n: A_{g(n)} -> B_n` for `n = 0..=depth(B)`, commuting with transitions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProMap {
    pub source: Tower,
    pub target: Tower,
    pub reindex: Vec<usize>,
    pub maps: Vec<Vec<usize>>,
}

impl ProMap {
    pub fn new(source: Tower, target: Tower, reindex: Vec<usize>, maps: Vec<Vec<usize>>) -> Result<Self> {
        let f = ProMap {
            source,
            target,
            reindex,
            maps,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: ProMap = serde_json::from_str(s)?;
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let (a, b, g) = (&self.source, &self.target, &self.reindex);
        if g.len() != b.depth() + 1 || self.maps.len() != b.depth() + 1 {
            return Err(Error::InvalidProMap(format!(
                "need {} reindexing entries and level maps",
                b.depth() + 1
            )));
        }
        if g.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidProMap("reindexing is not strictly increasing".into()));
        }
        if g[b.depth()] > a.depth() {
            return Err(Error::InvalidProMap(format!(
                "reindexing reaches level {} of a depth-{} source",
                g[b.depth()],
                a.depth()
            )));
        }
        for (n, f) in self.maps.iter().enumerate() {
            if f.len() != a.level_size(g[n]) || f.iter().any(|y| *y >= b.level_size(n)) {
                return Err(Error::InvalidProMap(format!("level map {n} has the wrong shape")));
            }
        }
        if let Some((n, x)) = self.commutation_failure() {
            return Err(Error::InvalidProMap(format!(
                "level maps {n} and {} disagree on source point {x} of level {}",
                n + 1,
                g[n + 1]
            )));
        }
        Ok(())
    }

    /// First `(n, x)` with `t_n(f_{n+1}(x)) != f_n(project(x))`.
    fn commutation_failure(&self) -> Option<(usize, usize)> {
        let (a, b, g) = (&self.source, &self.target, &self.reindex);
        (0..b.depth()).find_map(|n| {
            (0..a.level_size(g[n + 1]))
                .find(|x| b.transition(n)[self.maps[n + 1][*x]] != self.maps[n][a.project(g[n + 1], g[n], *x)])
                .map(|x| (n, x))
        })
    }

    /// Level maps with the identity reindexing.
    pub fn levelwise(source: Tower, target: Tower, maps: Vec<Vec<usize>>) -> Result<Self> {
        let g = (0..=target.depth()).collect();
        ProMap::new(source, target, g, maps)
    }

    pub fn identity(t: &Tower) -> Self {
        let maps = (0..=t.depth()).map(|n| (0..t.level_size(n)).collect()).collect();
        ProMap {
            source: t.clone(),
            target: t.clone(),
            reindex: (0..=t.depth()).collect(),
            maps,
        }
    }

    /// `T -> T.truncate(depth - shift)` with `g(n) = n + shift` and transition composites as
    /// level maps; equal to the identity after reindexing.
    pub fn shift(t: &Tower, shift: usize) -> Result<Self> {
        let d = t
            .depth()
            .checked_sub(shift)
            .ok_or_else(|| Error::InvalidProMap("shift exceeds depth".into()))?;
        let target = t.truncate(d)?;
        let maps = (0..=d).map(|n| t.projection(n + shift, n)).collect();
        ProMap::new(t.clone(), target, (0..=d).map(|n| n + shift).collect(), maps)
    }

    /// The map to the one-point tower of the same depth.
    pub fn to_point(t: &Tower) -> Self {
        let maps = (0..=t.depth()).map(|n| vec![0; t.level_size(n)]).collect();
        ProMap::levelwise(t.clone(), Tower::point(t.depth()), maps).expect("constant map commutes")
    }

    /// Image of `x ∈ A_k` at level `n` of `B`, for any `k >= g(n)`.
    pub fn eval(&self, n: usize, k: usize, x: usize) -> usize {
        self.maps[n][self.source.project(k, self.reindex[n], x)]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ProMap) -> Result<ProMap> {
        if first.target != self.source {
            return Err(Error::InvalidProMap("composing maps with mismatched towers".into()));
        }
        let reindex: Vec<usize> = self.reindex.iter().map(|m| first.reindex[*m]).collect();
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(n, h)| first.maps[self.reindex[n]].iter().map(|y| h[*y]).collect())
            .collect();
        ProMap::new(first.source.clone(), self.target.clone(), reindex, maps)
    }

    /// Equality as maps of pro-objects: agreement after passing to a common reindexing.
    pub fn equivalent(&self, other: &ProMap) -> bool {
        self.source == other.source
            && self.target == other.target
            && (0..=self.target.depth()).all(|n| {
                let k = self.reindex[n].max(other.reindex[n]);
                (0..self.source.level_size(k)).all(|x| self.eval(n, k, x) == other.eval(n, k, x))
            })
    }

    /// The same map out of `source.reindexed(g)`, now with the identity reindexing.
    pub fn to_levelwise(&self) -> ProMap {
        let source = self.source.reindexed(&self.reindex).expect("reindexing was validated");
        ProMap::levelwise(source, self.target.clone(), self.maps.clone()).expect("level maps still commute")
    }

    /// Every levelwise map `source -> target` of equal depths, built level by level so
    /// that each level commutes with the transitions below it.
    pub fn enumerate_levelwise(source: &Tower, target: &Tower) -> Vec<ProMap> {
        if source.depth() != target.depth() {
            return Vec::new();
        }
        let mut partial: Vec<Vec<Vec<usize>>> = super::all_functions(source.level_size(0), target.level_size(0))
            .map(|f| vec![f])
            .collect();
        for n in 0..source.depth() {
            let mut next = Vec::new();
            for maps in partial {
                let options: Vec<Vec<usize>> = (0..source.level_size(n + 1))
                    .map(|x| {
                        let below = maps[n][source.transition(n)[x]];
                        (0..target.level_size(n + 1)).filter(|y| target.transition(n)[*y] == below).collect()
                    })
                    .collect();
                let sizes: Vec<usize> = options.iter().map(Vec::len).collect();
                let count: usize = sizes.iter().product();
                for mut idx in 0..count {
                    let mut level = vec![0; sizes.len()];
                    for x in (0..sizes.len()).rev() {
                        level[x] = options[x][idx % sizes[x]];
                        idx /= sizes[x];
                    }
                    let mut extended = maps.clone();
                    extended.push(level);
                    next.push(extended);
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .map(|maps| ProMap::levelwise(source.clone(), target.clone(), maps).expect("levels commute by construction"))
            .collect()
    }

    /// A random tower `B` and levelwise map `A -> B`: each level of `B` refines the previous
    /// one by `1..=branching` children per point.
    pub fn random_levelwise<R: Rng>(rng: &mut R, source: &Tower, branching: usize) -> ProMap {
        let d = source.depth();
        let mut sizes = vec![rng.random_range(1..=branching)];
        let mut transitions: Vec<Vec<usize>> = Vec::new();
        for n in 0..d {
            let mut t = Vec::new();
            for b in 0..sizes[n] {
                let k = rng.random_range(1..=branching);
                t.extend(std::iter::repeat_n(b, k));
            }
            sizes.push(t.len());
            transitions.push(t);
        }
        let target = Tower::from_sizes(&sizes, transitions).expect("random tower is valid");
        let mut maps: Vec<Vec<usize>> = vec![(0..source.level_size(0)).map(|_| rng.random_range(0..sizes[0])).collect()];
        for n in 0..d {
            let level: Vec<usize> = (0..source.level_size(n + 1))
                .map(|x| {
                    let below = maps[n][source.transition(n)[x]];
                    let options: Vec<usize> =
                        (0..sizes[n + 1]).filter(|y| target.transition(n)[*y] == below).collect();
                    options[rng.random_range(0..options.len())]
                })
                .collect();
            maps.push(level);
        }
        ProMap::levelwise(source.clone(), target, maps).expect("random map commutes by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profinite::tower::{canonical_cantor, canonical_ntilde};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn levelwise_enumeration_matches_filtered_brute_force() {
        let nt = canonical_ntilde(2).unwrap();
        let two = Tower::constant(vec!["a".into(), "b".into()], 2);
        for (a, b) in [(&nt, &two), (&two, &nt), (&nt, &nt)] {
            let listed = ProMap::enumerate_levelwise(a, b);
            let mut brute = 0;
            for f0 in crate::profinite::all_functions(a.level_size(0), b.level_size(0)) {
                for f1 in crate::profinite::all_functions(a.level_size(1), b.level_size(1)) {
                    for f2 in crate::profinite::all_functions(a.level_size(2), b.level_size(2)) {
                        brute += usize::from(ProMap::levelwise(a.clone(), b.clone(), vec![f0.clone(), f1.clone(), f2]).is_ok());
                    }
                }
            }
            assert_eq!(listed.len(), brute);
        }
        assert!(ProMap::enumerate_levelwise(&nt, &nt.truncate(1).unwrap()).is_empty());
    }

    #[test]
    fn cantor_to_ntilde_first_one() {
        // a word goes to the position of its first 1, or ∞
        let c = canonical_cantor(3).unwrap();
        let nt = canonical_ntilde(3).unwrap();
        let maps = (0..=3)
            .map(|n| {
                (0..1usize << n)
                    .map(|w| (0..n).find(|i| w >> (n - 1 - i) & 1 == 1).unwrap_or(n))
                    .collect()
            })
            .collect();
        let f = ProMap::levelwise(c.clone(), nt.clone(), maps).unwrap();
        assert!(f.after(&ProMap::identity(&c)).unwrap().equivalent(&f));
        assert!(ProMap::identity(&nt).after(&f).unwrap().equivalent(&f));
    }

    #[test]
    fn rejects_non_commuting_maps() {
        let c = canonical_cantor(2).unwrap();
        let mut maps: Vec<Vec<usize>> = (0..=2).map(|n| (0..1usize << n).collect()).collect();
        maps[2][0] = 3;
        assert!(ProMap::levelwise(c.clone(), c.clone(), maps).is_err());
        assert!(ProMap::new(c.clone(), c.clone(), vec![0, 0, 1], vec![vec![0], vec![0, 1], vec![0, 1, 2, 3]]).is_err());
    }

    #[test]
    fn shift_is_identity_after_reindexing() {
        let c = canonical_cantor(4).unwrap();
        let s = ProMap::shift(&c, 1).unwrap();
        let t = c.truncate(3).unwrap();
        let trunc = ProMap::levelwise(c.clone(), t, (0..=3).map(|n| (0..1usize << n).collect()).collect()).unwrap();
        assert!(s.equivalent(&trunc));
    }

    #[test]
    fn levelwise_form_agrees() {
        let c = canonical_cantor(4).unwrap();
        let s = ProMap::shift(&c, 2).unwrap();
        let l = s.to_levelwise();
        assert_eq!(l.source.level_size(0), 4);
        assert_eq!(l.maps, s.maps);
    }

    fn chain(seed: u64, depth: usize) -> (ProMap, ProMap, ProMap) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Tower::random(&mut rng, depth, 4);
        let f = ProMap::random_levelwise(&mut rng, &a, 2);
        let g = ProMap::shift(&f.target, 1).unwrap();
        let h = ProMap::random_levelwise(&mut rng, &g.target, 2);
        (f, g, h)
    }

    proptest! {
        #[test]
        fn composition_is_associative(seed in any::<u64>(), depth in 1usize..=4) {
            let (f, g, h) = chain(seed, depth);
            let left = h.after(&g).unwrap().after(&f).unwrap();
            let right = h.after(&g.after(&f).unwrap()).unwrap();
            prop_assert!(left.equivalent(&right));
            prop_assert_eq!(left, right);
        }

        #[test]
        fn identities_are_neutral(seed in any::<u64>(), depth in 1usize..=4) {
            let (f, g, _) = chain(seed, depth);
            let gf = g.after(&f).unwrap();
            prop_assert!(gf.after(&ProMap::identity(&gf.source)).unwrap().equivalent(&gf));
            prop_assert!(ProMap::identity(&gf.target).after(&gf).unwrap().equivalent(&gf));
        }

        #[test]
        fn json_round_trip(seed in any::<u64>()) {
            let (f, _, _) = chain(seed, 3);
            let json = serde_json::to_string(&f).unwrap();
            prop_assert_eq!(ProMap::from_json(&json).unwrap(), f);
        }
    }
}
