use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A light profinite set truncated at depth `N`: finite levels `S_0, ..., S_N`
/// with transitions `t_n: S_{n+1} -> S_n`.
///
/// Points of a level are indices `0..len`; labels are only for display and JSON.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TowerRepr", into = "TowerRepr")]
pub struct Tower {
    levels: Vec<Vec<String>>,
    transitions: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TowerRepr {
    depth: usize,
    levels: Vec<Vec<String>>,
    transitions: Vec<Vec<usize>>,
}

impl TryFrom<TowerRepr> for Tower {
    type Error = Error;

    fn try_from(r: TowerRepr) -> Result<Self> {
        if r.levels.len() != r.depth + 1 {
            return Err(Error::InvalidTower(format!(
                "depth {} needs {} levels, got {}",
                r.depth,
                r.depth + 1,
                r.levels.len()
            )));
        }
        Tower::new(r.levels, r.transitions)
    }
}

impl From<Tower> for TowerRepr {
    fn from(t: Tower) -> Self {
        TowerRepr {
            depth: t.depth(),
            levels: t.levels,
            transitions: t.transitions,
        }
    }
}

impl Tower {
    pub fn new(levels: Vec<Vec<String>>, transitions: Vec<Vec<usize>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidTower("a tower has at least level 0".into()));
        }
        if transitions.len() + 1 != levels.len() {
            return Err(Error::InvalidTower(format!(
                "{} levels need {} transitions, got {}",
                levels.len(),
                levels.len() - 1,
                transitions.len()
            )));
        }
        let empty = levels.iter().filter(|l| l.is_empty()).count();
        if empty != 0 && empty != levels.len() {
            return Err(Error::InvalidTower("only the all-levels-empty tower may have an empty level".into()));
        }
        for (n, t) in transitions.iter().enumerate() {
            if t.len() != levels[n + 1].len() {
                return Err(Error::InvalidTower(format!(
                    "transition {n} has {} entries for a level of size {}",
                    t.len(),
                    levels[n + 1].len()
                )));
            }
            if let Some(bad) = t.iter().find(|x| **x >= levels[n].len()) {
                return Err(Error::InvalidTower(format!("transition {n} targets {bad}, outside level {n}")));
            }
        }
        Ok(Tower { levels, transitions })
    }

    /// A tower with unlabeled levels of the given sizes; labels are the indices.
    pub fn from_sizes(sizes: &[usize], transitions: Vec<Vec<usize>>) -> Result<Self> {
        let levels = sizes.iter().map(|s| (0..*s).map(|i| i.to_string()).collect()).collect();
        Tower::new(levels, transitions)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tower serializes")
    }

    /// The one-point tower of the given depth.
    pub fn point(depth: usize) -> Self {
        Tower {
            levels: vec![vec!["*".into()]; depth + 1],
            transitions: vec![vec![0]; depth],
        }
    }

    /// A finite set as a tower with identity transitions.
    pub fn constant(labels: Vec<String>, depth: usize) -> Self {
        let n = labels.len();
        Tower {
            levels: vec![labels; depth + 1],
            transitions: vec![(0..n).collect(); depth],
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.levels[0].is_empty()
    }

    pub fn level(&self, n: usize) -> &[String] {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[Vec<String>] {
        &self.levels
    }

    pub fn level_size(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    /// `t_n: S_{n+1} -> S_n`.
    pub fn transition(&self, n: usize) -> &[usize] {
        &self.transitions[n]
    }

    pub fn transitions(&self) -> &[Vec<usize>] {
        &self.transitions
    }

    pub fn check_level(&self, n: usize) -> Result<()> {
        if n > self.depth() {
            return Err(Error::LevelOutOfRange {
                level: n,
                depth: self.depth(),
            });
        }
        Ok(())
    }

    /// Image of `x ∈ S_from` in `S_to` under the composite of transitions (`to <= from`).
    pub fn project(&self, from: usize, to: usize, mut x: usize) -> usize {
        debug_assert!(to <= from);
        for n in (to..from).rev() {
            x = self.transitions[n][x];
        }
        x
    }

    /// The composite `S_from -> S_to` as a table.
    pub fn projection(&self, from: usize, to: usize) -> Vec<usize> {
        (0..self.level_size(from)).map(|x| self.project(from, to, x)).collect()
    }

    /// The first `depth + 1` levels.
    pub fn truncate(&self, depth: usize) -> Result<Tower> {
        self.check_level(depth)?;
        Ok(Tower {
            levels: self.levels[..=depth].to_vec(),
            transitions: self.transitions[..depth].to_vec(),
        })
    }

    /// Levels `S_{g(0)}, S_{g(1)}, ...` with composite transitions, for a strictly increasing `g`.
    pub fn reindexed(&self, g: &[usize]) -> Result<Tower> {
        if g.is_empty() || g.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidProMap("reindexing must be nonempty and strictly increasing".into()));
        }
        self.check_level(*g.last().unwrap())?;
        let levels = g.iter().map(|n| self.levels[*n].clone()).collect();
        let transitions = g.windows(2).map(|w| self.projection(w[1], w[0])).collect();
        Tower::new(levels, transitions)
    }

    pub fn is_transition_surjective(&self, n: usize) -> bool {
        let mut hit = vec![false; self.level_size(n)];
        for x in &self.transitions[n] {
            hit[*x] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn has_surjective_transitions(&self) -> bool {
        (0..self.depth()).all(|n| self.is_transition_surjective(n))
    }

    /// A random tower with level sizes in `1..=max_size` and random transitions.
    pub fn random<R: Rng>(rng: &mut R, depth: usize, max_size: usize) -> Tower {
        let sizes: Vec<usize> = (0..=depth).map(|_| rng.random_range(1..=max_size)).collect();
        let transitions = (0..depth)
            .map(|n| (0..sizes[n + 1]).map(|_| rng.random_range(0..sizes[n])).collect())
            .collect();
        Tower::from_sizes(&sizes, transitions).expect("random tower is valid")
    }
}

/// `Ñ = N ∪ {∞}` truncated at depth `N`: level `n` is `{1, ..., n, ∞}` and the transition
/// keeps `i <= n` and sends `n + 1` to `∞`.
///
/// At level `n`, the point `i` has index `i - 1` and `∞` has index `n`.
pub fn canonical_ntilde(depth: usize) -> Result<Tower> {
    if depth == 0 {
        return Err(Error::InvalidTower("depth must be at least 1".into()));
    }
    let levels = (0..=depth)
        .map(|n| {
            let mut l: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
            l.push("inf".into());
            l
        })
        .collect();
    let transitions = (0..depth)
        .map(|n| (0..n + 2).map(|x| if x < n { x } else { n }).collect())
        .collect();
    Tower::new(levels, transitions)
}

/// The Cantor set `{0,1}^N` truncated at depth `N`: level `n` is `{0,1}^n` and the
/// transition forgets the last coordinate.
///
/// A word is indexed by its binary value (first coordinate most significant).
pub fn canonical_cantor(depth: usize) -> Result<Tower> {
    if depth == 0 {
        return Err(Error::InvalidTower("depth must be at least 1".into()));
    }
    let levels = (0..=depth).map(cantor_labels).collect();
    let transitions = (0..depth).map(|n| (0..1usize << (n + 1)).map(|x| x >> 1).collect()).collect();
    Tower::new(levels, transitions)
}

fn cantor_labels(n: usize) -> Vec<String> {
    if n == 0 {
        return vec!["*".into()];
    }
    (0..1usize << n).map(|x| format!("{x:0n$b}")).collect()
}

/// Levelwise product `A × B` (equal depths); the pair `(a, b)` has index `a * |B_n| + b`.
pub fn tower_product(a: &Tower, b: &Tower) -> Result<Tower> {
    if a.depth() != b.depth() {
        return Err(Error::ParameterMismatch(format!("depths {} and {}", a.depth(), b.depth())));
    }
    let levels = (0..=a.depth())
        .map(|n| {
            a.level(n)
                .iter()
                .flat_map(|x| b.level(n).iter().map(move |y| format!("({x},{y})")))
                .collect()
        })
        .collect();
    let transitions = (0..a.depth())
        .map(|n| {
            let (bs, bt) = (b.level_size(n + 1), b.level_size(n));
            (0..a.level_size(n + 1) * bs)
                .map(|i| a.transition(n)[i / bs] * bt + b.transition(n)[i % bs])
                .collect()
        })
        .collect();
    Tower::new(levels, transitions)
}

/// Points of `S_n` that extend to a compatible family `(x_0, ..., x_N)`: the image of `S_N -> S_n`.
pub fn tower_limit_elements(t: &Tower, n: usize) -> Result<Vec<usize>> {
    t.check_level(n)?;
    let mut image: Vec<usize> = t.projection(t.depth(), n);
    image.sort_unstable();
    image.dedup();
    Ok(image)
}

/// A compatible family `(x_0, ..., x_N)` through a given point.
pub type CompatibleFamily = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurjectivityReport {
    pub surjective: bool,
    /// The first level `n` whose transition `S_{n+1} -> S_n` misses a point, and that point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub missed: Option<(usize, usize)>,
    /// `lifts[n][x]` is a compatible family through `x ∈ S_n` (only when surjective).
    pub lifts: Vec<Vec<CompatibleFamily>>,
}

impl SurjectivityReport {
    /// Every recorded family is compatible, passes through its point and covers every level.
    pub fn lifts_valid(&self, t: &Tower) -> bool {
        self.lifts.len() == t.depth() + 1
            && self.lifts.iter().enumerate().all(|(n, fams)| {
                fams.len() == t.level_size(n)
                    && fams.iter().enumerate().all(|(x, fam)| {
                        fam.len() == t.depth() + 1
                            && fam[n] == x
                            && (0..t.depth()).all(|k| t.transition(k)[fam[k + 1]] == fam[k])
                    })
            })
    }
}

/// Whether every transition is onto; if so, lift every point of every level to a
/// compatible family by choosing preimages upward and projecting downward.
pub fn check_sequential_surjectivity(t: &Tower) -> SurjectivityReport {
    for n in 0..t.depth() {
        let mut hit = vec![false; t.level_size(n)];
        for x in t.transition(n) {
            hit[*x] = true;
        }
        if let Some(x) = hit.iter().position(|h| !h) {
            return SurjectivityReport {
                surjective: false,
                missed: Some((n, x)),
                lifts: Vec::new(),
            };
        }
    }
    // first preimage of each point under each transition
    let preimage: Vec<Vec<usize>> = (0..t.depth())
        .map(|n| {
            let mut pre = vec![usize::MAX; t.level_size(n)];
            for (y, x) in t.transition(n).iter().enumerate().rev() {
                pre[*x] = y;
            }
            pre
        })
        .collect();
    let lifts = (0..=t.depth())
        .map(|n| {
            (0..t.level_size(n))
                .map(|x| {
                    let mut fam = vec![0; t.depth() + 1];
                    fam[n] = x;
                    for k in n..t.depth() {
                        fam[k + 1] = preimage[k][fam[k]];
                    }
                    for k in (0..n).rev() {
                        fam[k] = t.transition(k)[fam[k + 1]];
                    }
                    fam
                })
                .collect()
        })
        .collect();
    SurjectivityReport {
        surjective: true,
        missed: None,
        lifts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ntilde_shape_and_transitions() {
        let t = canonical_ntilde(5).unwrap();
        assert_eq!(t.level(0), ["inf"]);
        assert_eq!(t.level(3), ["1", "2", "3", "inf"]);
        // {1..4,∞} -> {1..3,∞} sends 4 to ∞ and keeps 1..3
        assert_eq!(t.transition(3), [0, 1, 2, 3, 3]);
        assert_eq!(t.level(3)[t.transition(3)[3]], "inf");
        assert_eq!(t.level(3)[t.transition(3)[4]], "inf");
    }

    #[test]
    fn cantor_shape() {
        let t = canonical_cantor(4).unwrap();
        let sizes: Vec<usize> = (1..=4).map(|n| t.level_size(n)).collect();
        assert_eq!(sizes, [2, 4, 8, 16]);
        assert_eq!(t.level(3)[5], "101");
        assert_eq!(t.level(2)[t.transition(2)[5]], "10");
    }

    #[test]
    fn limit_elements() {
        let c = Tower::constant(vec!["1".into(), "2".into()], 3);
        assert_eq!(tower_limit_elements(&c, 2).unwrap(), [0, 1]);
        let n = canonical_ntilde(4).unwrap();
        for k in 0..=4 {
            assert_eq!(tower_limit_elements(&n, k).unwrap().len(), n.level_size(k));
        }
        // level 1 has 3 points; t_0 collapses to a point; top level only reaches point 2 of level 1
        let t = Tower::from_sizes(&[1, 3, 2], vec![vec![0, 0, 0], vec![2, 2]]).unwrap();
        assert_eq!(tower_limit_elements(&t, 1).unwrap(), [2]);
        assert_eq!(tower_limit_elements(&t, 0).unwrap(), [0]);
        assert!(tower_limit_elements(&t, 3).is_err());
    }

    #[test]
    fn surjectivity_with_lifts() {
        for d in 1..=6 {
            for t in [canonical_ntilde(d).unwrap(), canonical_cantor(d).unwrap()] {
                let r = check_sequential_surjectivity(&t);
                assert!(r.surjective);
                assert!(r.lifts_valid(&t));
            }
        }
        let t = Tower::from_sizes(&[2, 2, 2], vec![vec![0, 1], vec![0, 0]]).unwrap();
        let r = check_sequential_surjectivity(&t);
        assert!(!r.surjective);
        assert_eq!(r.missed, Some((1, 1)));
    }

    #[test]
    fn product_with_point_and_cantor_square() {
        let c = canonical_cantor(2).unwrap();
        let cp = tower_product(&c, &Tower::point(2)).unwrap();
        assert_eq!(cp.transitions(), c.transitions());
        let sq = tower_product(&c, &c).unwrap();
        assert_eq!(sq.level_size(2), 16);
        // brute force: (a, b) ↦ (t a, t b)
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(sq.transition(1)[a * 4 + b], (a >> 1) * 2 + (b >> 1));
            }
        }
        assert!(tower_product(&c, &Tower::point(3)).is_err());
    }

    #[test]
    fn validation_and_json() {
        assert!(Tower::from_sizes(&[1, 0], vec![vec![]]).is_err());
        assert!(Tower::from_sizes(&[0, 0], vec![vec![]]).is_ok());
        assert!(Tower::from_sizes(&[2, 1], vec![vec![2]]).is_err());
        assert!(Tower::from_json(r#"{"depth":2,"levels":[["a"]],"transitions":[]}"#).is_err());
        let t = canonical_ntilde(2).unwrap();
        let json = t.to_json();
        assert!(json.starts_with(r#"{"depth":2,"levels":[["inf"],["1","inf"]"#));
        assert_eq!(Tower::from_json(&json).unwrap(), t);
    }

    #[test]
    fn reindexing_composes_transitions() {
        let c = canonical_cantor(4).unwrap();
        let r = c.reindexed(&[1, 3, 4]).unwrap();
        assert_eq!(r.level_size(1), 8);
        assert_eq!(r.transition(0), c.projection(3, 1));
        assert!(c.reindexed(&[2, 2]).is_err());
    }

    #[test]
    fn random_towers_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let t = Tower::random(&mut rng, 4, 4);
            assert_eq!(Tower::from_json(&t.to_json()).unwrap(), t);
        }
    }
}
