use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::promap::ProMap;
use super::tower::Tower;
use crate::error::{Error, Result};

/// A tower `S` with a relation `R_n ⊂ S_n × S_n` at every level.
///
/// Built either from a relation tower with two pro-maps `R -> S`, or from explicit
/// generating pairs per level (closed up to an equivalence by union-find).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivRelPresentation {
    pub space: Tower,
    /// `relation[n]`: sorted, duplicate-free pairs of indices of `S_n`.
    pub relation: Vec<Vec<(usize, usize)>>,
}

/// A finite quotient `S_n / R_n` with its canonical surjection.
///
/// Classes are numbered by their smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quotient {
    pub classes: Vec<Vec<usize>>,
    /// `map[x]` is the class of `x`.
    pub map: Vec<usize>,
}

impl Quotient {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

fn sorted(mut pairs: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    pairs.sort_unstable();
    pairs.dedup();
    pairs
}

/// Classes of the equivalence relation generated by `pairs` on `0..size`.
fn union_find_classes(size: usize, pairs: &[(usize, usize)]) -> Quotient {
    let mut uf = UnionFind::<usize>::new(size);
    for (a, b) in pairs {
        uf.union(*a, *b);
    }
    let labels = uf.into_labeling();
    let mut map = vec![usize::MAX; size];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of_root = std::collections::HashMap::new();
    for x in 0..size {
        let c = *class_of_root.entry(labels[x]).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        map[x] = c;
        classes[c].push(x);
    }
    Quotient { classes, map }
}

impl EquivRelPresentation {
    /// The relation given as stated; [`quotient_presentation`] checks it is an equivalence.
    pub fn new(space: Tower, relation: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        if relation.len() != space.depth() + 1 {
            return Err(Error::InvalidTower(format!("need a relation for each of {} levels", space.depth() + 1)));
        }
        for (n, r) in relation.iter().enumerate() {
            if r.iter().any(|(a, b)| *a >= space.level_size(n) || *b >= space.level_size(n)) {
                return Err(Error::InvalidTower(format!("relation at level {n} names a missing point")));
            }
        }
        let relation = relation.into_iter().map(sorted).collect();
        Ok(EquivRelPresentation { space, relation })
    }

    /// The equivalence relation generated by the given pairs at each level.
    pub fn from_generators(space: Tower, generators: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        let raw = EquivRelPresentation::new(space, generators)?;
        let relation = (0..=raw.space.depth())
            .map(|n| {
                let q = union_find_classes(raw.space.level_size(n), &raw.relation[n]);
                q.classes.iter().flat_map(|c| c.iter().flat_map(move |a| c.iter().map(move |b| (*a, *b)))).collect()
            })
            .collect();
        EquivRelPresentation::new(raw.space, relation)
    }

    /// The image of `(r_1, r_2): R -> S × S` at every level; both maps must share a reindexing.
    pub fn from_relation_tower(r1: &ProMap, r2: &ProMap) -> Result<Self> {
        if r1.source != r2.source || r1.target != r2.target || r1.reindex != r2.reindex {
            return Err(Error::InvalidProMap("relation maps must share source, target and reindexing".into()));
        }
        let relation = (0..=r1.target.depth())
            .map(|n| r1.maps[n].iter().zip(&r2.maps[n]).map(|(a, b)| (*a, *b)).collect())
            .collect();
        EquivRelPresentation::new(r1.target.clone(), relation)
    }

    /// The diagonal relation: the quotient is `S` itself.
    pub fn diagonal(space: Tower) -> Self {
        let relation = (0..=space.depth()).map(|n| (0..space.level_size(n)).map(|x| (x, x)).collect()).collect();
        EquivRelPresentation { space, relation }
    }

    /// The full relation: every quotient level is a point.
    pub fn full(space: Tower) -> Self {
        let relation = (0..=space.depth())
            .map(|n| {
                let s = space.level_size(n);
                (0..s).flat_map(|a| (0..s).map(move |b| (a, b))).collect()
            })
            .collect();
        EquivRelPresentation { space, relation }
    }

    pub fn related(&self, n: usize, a: usize, b: usize) -> bool {
        self.relation[n].binary_search(&(a, b)).is_ok()
    }

    /// Reflexivity, symmetry and transitivity at level `n`.
    pub fn check_equivalence(&self, n: usize) -> Result<()> {
        self.space.check_level(n)?;
        let fail = |reason: String| Err(Error::NotAnEquivalence { level: n, reason });
        if let Some(x) = (0..self.space.level_size(n)).find(|x| !self.related(n, *x, *x)) {
            return fail(format!("{x} is not related to itself"));
        }
        for (a, b) in &self.relation[n] {
            if !self.related(n, *b, *a) {
                return fail(format!("{a} ~ {b} but not {b} ~ {a}"));
            }
        }
        for (a, b) in &self.relation[n] {
            let start = self.relation[n].partition_point(|(x, _)| x < b);
            for (_, c) in self.relation[n][start..].iter().take_while(|(x, _)| x == b) {
                if !self.related(n, *a, *c) {
                    return fail(format!("{a} ~ {b} ~ {c} but not {a} ~ {c}"));
                }
            }
        }
        Ok(())
    }

    /// The relation as a tower with its two projections, if transitions carry related pairs
    /// to related pairs.
    pub fn relation_tower(&self) -> Result<(Tower, ProMap, ProMap)> {
        let s = &self.space;
        let levels = self
            .relation
            .iter()
            .enumerate()
            .map(|(n, r)| r.iter().map(|(a, b)| format!("({},{})", s.level(n)[*a], s.level(n)[*b])).collect())
            .collect();
        let mut transitions = Vec::new();
        for n in 0..s.depth() {
            let mut t = Vec::new();
            for (a, b) in &self.relation[n + 1] {
                let down = (s.transition(n)[*a], s.transition(n)[*b]);
                match self.relation[n].binary_search(&down) {
                    Ok(i) => t.push(i),
                    Err(_) => {
                        return Err(Error::IncompatibleTransition {
                            level: n + 1,
                            reason: format!(
                                "{} ~ {} maps to unrelated {} and {}",
                                s.level(n + 1)[*a],
                                s.level(n + 1)[*b],
                                s.level(n)[down.0],
                                s.level(n)[down.1]
                            ),
                        })
                    }
                }
            }
            transitions.push(t);
        }
        let r = Tower::new(levels, transitions)?;
        let proj = |first: bool| {
            let maps = self.relation.iter().map(|l| l.iter().map(|(a, b)| if first { *a } else { *b }).collect()).collect();
            ProMap::levelwise(r.clone(), s.clone(), maps)
        };
        Ok((r.clone(), proj(true)?, proj(false)?))
    }
}

/// `S_n / R_n` with its quotient map, computed by union-find after checking that `R_n`
/// is an equivalence relation.
pub fn quotient_presentation(p: &EquivRelPresentation, n: usize) -> Result<Quotient> {
    p.check_equivalence(n)?;
    Ok(union_find_classes(p.space.level_size(n), &p.relation[n]))
}

/// The map `S_{n+1}/R_{n+1} -> S_n/R_n` induced by the transition, if well defined.
pub fn quotient_transition(p: &EquivRelPresentation, n: usize) -> Result<Vec<usize>> {
    let (lo, hi) = (quotient_presentation(p, n)?, quotient_presentation(p, n + 1)?);
    let t = p.space.transition(n);
    hi.classes
        .iter()
        .map(|class| {
            let target = lo.map[t[class[0]]];
            match class.iter().find(|x| lo.map[t[**x]] != target) {
                None => Ok(target),
                Some(x) => Err(Error::IncompatibleTransition {
                    level: n + 1,
                    reason: format!(
                        "{} and {} are identified but their images {} and {} are not",
                        p.space.level(n + 1)[class[0]],
                        p.space.level(n + 1)[*x],
                        p.space.level(n)[t[class[0]]],
                        p.space.level(n)[t[*x]]
                    ),
                }),
            }
        })
        .collect()
}

/// The quotient levels assembled into a tower, with the quotient pro-map `S -> S/R`.
pub fn quotient_tower(p: &EquivRelPresentation) -> Result<(Tower, ProMap)> {
    let s = &p.space;
    let quotients = (0..=s.depth()).map(|n| quotient_presentation(p, n)).collect::<Result<Vec<_>>>()?;
    let transitions = (0..s.depth()).map(|n| quotient_transition(p, n)).collect::<Result<Vec<_>>>()?;
    let levels = quotients
        .iter()
        .enumerate()
        .map(|(n, q)| q.classes.iter().map(|c| format!("[{}]", s.level(n)[c[0]])).collect())
        .collect();
    let tower = Tower::new(levels, transitions)?;
    let map = ProMap::levelwise(s.clone(), tower.clone(), quotients.into_iter().map(|q| q.map).collect())?;
    Ok((tower, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profinite::tower::canonical_cantor;

    /// Equivalence classes by repeated relational composition until stable.
    fn closure_classes(size: usize, pairs: &[(usize, usize)]) -> usize {
        let mut rel = vec![vec![false; size]; size];
        for x in 0..size {
            rel[x][x] = true;
        }
        for (a, b) in pairs {
            rel[*a][*b] = true;
            rel[*b][*a] = true;
        }
        for k in 0..size {
            for i in 0..size {
                for j in 0..size {
                    if rel[i][k] && rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
        (0..size).filter(|x| (0..*x).all(|y| !rel[*x][y])).count()
    }

    #[test]
    fn diagonal_and_full() {
        let c = canonical_cantor(3).unwrap();
        let d = EquivRelPresentation::diagonal(c.clone());
        assert_eq!(quotient_presentation(&d, 3).unwrap().len(), 8);
        let (q, _) = quotient_tower(&d).unwrap();
        assert_eq!(q.transitions(), c.transitions());
        let f = EquivRelPresentation::full(c);
        assert_eq!(quotient_presentation(&f, 3).unwrap().len(), 1);
        assert!(quotient_tower(&f).is_ok());
    }

    #[test]
    fn non_equivalences_are_rejected() {
        let c = canonical_cantor(1).unwrap();
        let r = EquivRelPresentation::new(c.clone(), vec![vec![(0, 0)], vec![(0, 0), (0, 1), (1, 1)]]).unwrap();
        assert!(matches!(quotient_presentation(&r, 1), Err(Error::NotAnEquivalence { level: 1, .. })));
        let r = EquivRelPresentation::new(c, vec![vec![(0, 0)], vec![(0, 0)]]).unwrap();
        assert!(matches!(quotient_presentation(&r, 1), Err(Error::NotAnEquivalence { .. })));
    }

    #[test]
    fn transitivity_is_checked() {
        let t = Tower::from_sizes(&[3], vec![]).unwrap();
        let rel = vec![vec![(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)]];
        let r = EquivRelPresentation::new(t, rel).unwrap();
        assert!(matches!(r.check_equivalence(0), Err(Error::NotAnEquivalence { .. })));
    }

    #[test]
    fn union_find_matches_closure_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let size = rng.random_range(1..=12);
            let pairs: Vec<(usize, usize)> =
                (0..rng.random_range(0..10)).map(|_| (rng.random_range(0..size), rng.random_range(0..size))).collect();
            let t = Tower::from_sizes(&[size], vec![]).unwrap();
            let p = EquivRelPresentation::from_generators(t, vec![pairs.clone()]).unwrap();
            assert_eq!(quotient_presentation(&p, 0).unwrap().len(), closure_classes(size, &pairs));
        }
    }

    #[test]
    fn relation_tower_round_trip() {
        let c = canonical_cantor(2).unwrap();
        // identify words with the same first letter
        let gens = vec![vec![], vec![], vec![(0, 1), (2, 3)]];
        let p = EquivRelPresentation::from_generators(c, gens).unwrap();
        assert!(p.relation_tower().is_ok());
        let (_, r1, r2) = p.relation_tower().unwrap();
        assert_eq!(EquivRelPresentation::from_relation_tower(&r1, &r2).unwrap(), p);
        let (q, _) = quotient_tower(&p).unwrap();
        assert_eq!(q.level_size(2), 2);
    }

    #[test]
    fn incompatible_relation_has_witness() {
        let c = canonical_cantor(2).unwrap();
        // 00 ~ 11 at level 2 maps to 0 and 1, unrelated at level 1
        let p = EquivRelPresentation::from_generators(c, vec![vec![], vec![], vec![(0, 3)]]).unwrap();
        assert!(matches!(quotient_transition(&p, 1), Err(Error::IncompatibleTransition { level: 2, .. })));
        assert!(p.relation_tower().is_err());
        assert!(quotient_presentation(&p, 2).is_ok());
    }
}
