use serde::Serialize;

use super::all_functions;
use super::promap::ProMap;
use super::tower::Tower;
use crate::error::{Error, Result};

/// `A ×_C B` for pro-maps `f: A -> C` and `g: B -> C`, indexed by the levels of `C`.
///
/// Both maps are first made levelwise (sources reindexed along their reindexings), so
/// the projections land in `f.to_levelwise().source` and `g.to_levelwise().source`.
/// Level `n` lists the pairs `(a, b)` with `f_n(a) = g_n(b)` in lexicographic order.
/// If some level is empty the result is the empty tower.
#[derive(Debug, Clone, Serialize)]
pub struct FiberProduct {
    pub tower: Tower,
    pub pairs: Vec<Vec<(usize, usize)>>,
    pub first: ProMap,
    pub second: ProMap,
    pub left: ProMap,
    pub right: ProMap,
}

pub fn tower_fiber_product(f: &ProMap, g: &ProMap) -> Result<FiberProduct> {
    if f.target != g.target {
        return Err(Error::ParameterMismatch("fiber product over different bases".into()));
    }
    let (f, g) = (f.to_levelwise(), g.to_levelwise());
    let (a, b) = (&f.source, &g.source);
    let depth = f.target.depth();
    let mut pairs: Vec<Vec<(usize, usize)>> = (0..=depth)
        .map(|n| {
            (0..a.level_size(n))
                .flat_map(|x| (0..b.level_size(n)).map(move |y| (x, y)))
                .filter(|(x, y)| f.maps[n][*x] == g.maps[n][*y])
                .collect()
        })
        .collect();
    if pairs.iter().any(|l| l.is_empty()) {
        pairs.iter_mut().for_each(|l| l.clear());
    }
    let levels = pairs
        .iter()
        .enumerate()
        .map(|(n, l)| l.iter().map(|(x, y)| format!("({},{})", a.level(n)[*x], b.level(n)[*y])).collect())
        .collect();
    let transitions = (0..depth)
        .map(|n| {
            pairs[n + 1]
                .iter()
                .map(|(x, y)| {
                    let down = (a.transition(n)[*x], b.transition(n)[*y]);
                    pairs[n].binary_search(&down).expect("transitions preserve the fiber")
                })
                .collect()
        })
        .collect();
    let tower = Tower::new(levels, transitions)?;
    let proj = |pick: fn(&(usize, usize)) -> usize, target: &Tower| {
        let maps = pairs.iter().map(|l| l.iter().map(pick).collect()).collect();
        ProMap::levelwise(tower.clone(), target.clone(), maps)
    };
    let first = proj(|p| p.0, a)?;
    let second = proj(|p| p.1, b)?;
    Ok(FiberProduct {
        tower: tower.clone(),
        pairs,
        first,
        second,
        left: f,
        right: g,
    })
}

/// For every finite set `X` of size `1..=max_cone` and every commuting cone
/// `u: X -> A_n`, `v: X -> B_n` at every level, exactly one `w: X -> P_n` factors it.
/// When the fiber product is empty, only cones at the top level are checked: lower-level
/// cones need not extend to compatible families.
/// Returns the first failing `(level, u, v, factorizations)`.
pub fn universal_property_failure(
    fp: &FiberProduct,
    max_cone: usize,
) -> Option<(usize, Vec<usize>, Vec<usize>, usize)> {
    let (a, b, p) = (&fp.left.source, &fp.right.source, &fp.tower);
    let first_level = if p.level_size(0) == 0 { p.depth() } else { 0 };
    for n in first_level..=p.depth() {
        for x in 1..=max_cone {
            for u in all_functions(x, a.level_size(n)) {
                for v in all_functions(x, b.level_size(n)) {
                    let commutes = (0..x).all(|i| fp.left.maps[n][u[i]] == fp.right.maps[n][v[i]]);
                    if !commutes {
                        continue;
                    }
                    let count = all_functions(x, p.level_size(n))
                        .filter(|w| (0..x).all(|i| fp.first.maps[n][w[i]] == u[i] && fp.second.maps[n][w[i]] == v[i]))
                        .count();
                    if count != 1 {
                        return Some((n, u, v, count));
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profinite::tower::{canonical_cantor, canonical_ntilde, tower_product};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn first_coordinate(depth: usize) -> ProMap {
        // Cantor -> {0,1} (constant tower), reading the first digit; level 0 has no digit yet,
        // so the target is the constant tower reindexed by one
        let c = canonical_cantor(depth + 1).unwrap();
        let two = Tower::constant(vec!["0".into(), "1".into()], depth);
        let maps = (0..=depth).map(|n| (0..1usize << (n + 1)).map(|w| w >> n).collect()).collect();
        ProMap::new(c, two, (1..=depth + 1).collect(), maps).unwrap()
    }

    #[test]
    fn fiber_of_first_coordinates_is_brute_force() {
        let f = first_coordinate(2);
        let fp = tower_fiber_product(&f, &f).unwrap();
        for n in 0..=2 {
            let size = 1usize << (n + 1);
            let brute: Vec<(usize, usize)> = (0..size)
                .flat_map(|x| (0..size).map(move |y| (x, y)))
                .filter(|(x, y)| x >> n == y >> n)
                .collect();
            assert_eq!(fp.pairs[n], brute);
        }
        assert_eq!(fp.tower.level_size(0), 2);
        assert!(universal_property_failure(&fp, 2).is_none());
    }

    #[test]
    fn fiber_over_point_is_product() {
        let n = canonical_ntilde(2).unwrap();
        let fp = tower_fiber_product(&ProMap::to_point(&n), &ProMap::to_point(&n)).unwrap();
        let prod = tower_product(&n, &n).unwrap();
        assert_eq!(fp.tower.transitions(), prod.transitions());
        assert!(universal_property_failure(&fp, 3).is_none());
    }

    #[test]
    fn universal_property_on_random_cospans() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = Tower::random(&mut rng, 2, 3);
            let f = ProMap::random_levelwise(&mut rng, &a, 1);
            // g: a second map into the same target
            let b = Tower::random(&mut rng, 2, 3);
            let g = match levelwise_into(&mut rng, &b, &f.target) {
                Some(g) => g,
                None => continue,
            };
            let fp = tower_fiber_product(&f, &g).unwrap();
            assert!(universal_property_failure(&fp, 3).is_none());
        }
    }

    /// A random levelwise map into `target`, if one exists (tries a few times).
    fn levelwise_into(rng: &mut ChaCha8Rng, source: &Tower, target: &Tower) -> Option<ProMap> {
        use rand::Rng;
        for _ in 0..20 {
            let mut maps: Vec<Vec<usize>> = vec![(0..source.level_size(0)).map(|_| rng.random_range(0..target.level_size(0))).collect()];
            let mut ok = true;
            for n in 0..source.depth() {
                let mut level = Vec::new();
                for x in 0..source.level_size(n + 1) {
                    let below = maps[n][source.transition(n)[x]];
                    let options: Vec<usize> = (0..target.level_size(n + 1)).filter(|y| target.transition(n)[*y] == below).collect();
                    if options.is_empty() {
                        ok = false;
                        break;
                    }
                    level.push(options[rng.random_range(0..options.len())]);
                }
                if !ok {
                    break;
                }
                maps.push(level);
            }
            if ok {
                return ProMap::levelwise(source.clone(), target.clone(), maps).ok();
            }
        }
        None
    }

    #[test]
    fn empty_fiber_product_has_no_top_cones() {
        let n = canonical_ntilde(2).unwrap();
        let f = ProMap::levelwise(n.clone(), n.clone(), vec![vec![0], vec![0, 0], vec![0, 0, 0]]).unwrap();
        let g = ProMap::levelwise(n.clone(), n.clone(), vec![vec![0], vec![1, 1], vec![1, 1, 1]]).unwrap();
        let fp = tower_fiber_product(&f, &g).unwrap();
        assert_eq!(fp.tower.level_size(0), 0);
        assert!(universal_property_failure(&fp, 2).is_none());
        // an empty product over a cospan that does have top-level cones is rejected
        let mut wrong = tower_fiber_product(&f, &f).unwrap();
        wrong.tower = fp.tower.clone();
        wrong.first = fp.first.clone();
        wrong.second = fp.second.clone();
        assert!(universal_property_failure(&wrong, 1).is_some());
    }

    #[test]
    fn broken_projection_is_caught() {
        let n = canonical_ntilde(1).unwrap();
        let mut fp = tower_fiber_product(&ProMap::to_point(&n), &ProMap::to_point(&n)).unwrap();
        // swap the roles of the two projections at level 1: the factorization count changes
        std::mem::swap(&mut fp.first.maps[1], &mut fp.second.maps[1]);
        fp.first.maps[1][1] = 0;
        assert!(universal_property_failure(&fp, 1).is_some());
    }
}
