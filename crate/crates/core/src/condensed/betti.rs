use serde::Serialize;

use super::presheaf::Presheaf;
use super::site::{SiteMap, SiteObject};
use crate::algebra::{CommRing, FiniteRing, FunctionRing, ResidueRing};
use crate::duality::{psi_functor, FunctionRingMap, StoneDeltaRingApprox};
use crate::error::{Error, Result};
use crate::profinite::{all_functions, Tower};
use crate::stone::pboolean::point_of_character;

/// `u(A) = Spec(A/p)` as a site object, together with the point of the level each
/// character evaluates at (in character order).
pub fn psi_site_object(a: &StoneDeltaRingApprox) -> Result<(SiteObject, Vec<usize>)> {
    let dual = psi_functor(a)?;
    let points = dual
        .points
        .iter()
        .map(|chi| point_of_character(chi).ok_or_else(|| Error::Internal("character is not an evaluation".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok((SiteObject::new(format!("spec{}", points.len()), points.len()), points))
}

/// `ψ_*X(A) = X(u(A))`.
pub fn psi_pushforward<X: Presheaf>(x: &X, a: &StoneDeltaRingApprox) -> Result<Vec<X::Section>> {
    x.sections(&psi_site_object(a)?.0)
}

/// `u(F): u(B) -> u(A)` for a ring map `F: A -> B`, in character order.
pub fn psi_dual_map(f: &FunctionRingMap, a: &StoneDeltaRingApprox, b: &StoneDeltaRingApprox) -> Result<SiteMap> {
    if f.source != a.carrier || f.target != b.carrier {
        return Err(Error::ParameterMismatch("map does not run between the given rings".into()));
    }
    let (ua, pa) = psi_site_object(a)?;
    let (ub, pb) = psi_site_object(b)?;
    let dual = f.dual_map();
    let map = pb
        .iter()
        .map(|t| pa.iter().position(|s| *s == dual[*t]).expect("every point has a character"))
        .collect();
    SiteMap::new(ub, ua, map)
}

/// `ψ_*X(F): X(u(A)) -> X(u(B))` as an index table into [`psi_pushforward`] of `B`.
pub fn psi_pushforward_map<X: Presheaf>(
    x: &X,
    f: &FunctionRingMap,
    a: &StoneDeltaRingApprox,
    b: &StoneDeltaRingApprox,
) -> Result<Vec<usize>> {
    let g = psi_dual_map(f, a, b)?;
    let target = psi_pushforward(x, b)?;
    psi_pushforward(x, a)?
        .iter()
        .map(|s| {
            let r = x.restrict(&g, s)?;
            target
                .iter()
                .position(|t| *t == r)
                .ok_or_else(|| Error::InvalidPresheaf("restriction leaves the value set".into()))
        })
        .collect()
}

/// Both sides of `Hom(u(A), K_n) ≅ Hom_δ(Cont(K_n, Z/p^m), A)` and the comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BettiCheck {
    pub points_of_k: usize,
    pub points_of_dual: usize,
    /// `|Hom(u(A), K_n)|`.
    pub continuous_maps: usize,
    /// Number of unital multiplicative maps `Cont(K_n, Z/p^m) -> A` commuting with `φ`.
    pub delta_maps: usize,
    pub bijective: bool,
    pub witness: Option<String>,
}

impl BettiCheck {
    pub fn passed(&self) -> bool {
        self.bijective
    }
}

fn cont_of_level(k: &Tower, level: usize, a: &StoneDeltaRingApprox) -> Result<FunctionRing> {
    k.check_level(level)?;
    FunctionRing::new(k.level_size(level), ResidueRing::new(a.prime(), a.precision())?)
}

/// Images of the indicators under the map `f ↦ f ∘ κ` (read on the points of `A`'s level).
fn canonical_map(kappa: &[usize], points: &[usize], k_size: usize, a: &StoneDeltaRingApprox) -> Vec<Vec<u64>> {
    let mut at_point = vec![0; a.points()];
    for (c, s) in points.iter().enumerate() {
        at_point[*s] = kappa[c];
    }
    (0..k_size)
        .map(|j| at_point.iter().map(|v| u64::from(*v == j)).collect())
        .collect()
}

/// Every additive map `Cont(K_n, Z/p^m) -> A`, given on indicators, that is unital,
/// multiplicative on pairs of indicators and commutes with `φ`.
fn delta_maps(source: &FunctionRing, a: &StoneDeltaRingApprox) -> Vec<Vec<Vec<u64>>> {
    let ring = &a.carrier;
    let k = source.domain_size();
    let idempotents: Vec<Vec<u64>> = ring.elements().into_iter().filter(|e| ring.mul(e, e) == *e).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut next = vec![0usize; k + 1];
    loop {
        if chosen.len() == k {
            let images: Vec<Vec<u64>> = chosen.iter().map(|i| idempotents[*i].clone()).collect();
            let sum = images.iter().fold(ring.zero(), |acc, e| ring.add(&acc, e));
            let phi_ok = images.iter().all(|e| a.phi(e) == *e);
            if sum == ring.one() && phi_ok {
                out.push(images);
            }
            chosen.pop();
            continue;
        }
        let d = chosen.len();
        if next[d] >= idempotents.len() {
            if d == 0 {
                break;
            }
            chosen.pop();
            continue;
        }
        let cand = next[d];
        next[d] += 1;
        let e = &idempotents[cand];
        if chosen.iter().all(|i| ring.is_zero(&ring.mul(&idempotents[*i], e))) {
            chosen.push(cand);
            next[d + 1] = 0;
        }
    }
    out
}

pub fn betti_delta_check(k: &Tower, level: usize, a: &StoneDeltaRingApprox) -> Result<BettiCheck> {
    let source = cont_of_level(k, level, a)?;
    let k_size = source.domain_size();
    let (ua, points) = psi_site_object(a)?;
    let lhs: Vec<Vec<usize>> = all_functions(ua.size, k_size).collect();
    let mut rhs = delta_maps(&source, a);
    rhs.sort();
    let mut image: Vec<Vec<Vec<u64>>> = lhs.iter().map(|kappa| canonical_map(kappa, &points, k_size, a)).collect();
    let mut witness = None;
    for (kappa, h) in lhs.iter().zip(&image) {
        if rhs.binary_search(h).is_err() {
            witness = Some(format!("the map induced by {kappa:?} is not a δ-map"));
            break;
        }
    }
    image.sort();
    image.dedup();
    if witness.is_none() && image.len() != lhs.len() {
        witness = Some("two continuous maps induce the same δ-map".into());
    }
    if witness.is_none() && image.len() != rhs.len() {
        let missed = rhs.iter().find(|h| image.binary_search(h).is_err()).expect("sizes differ");
        witness = Some(format!("δ-map with indicator images {missed:?} does not come from a continuous map"));
    }
    Ok(BettiCheck {
        points_of_k: k_size,
        points_of_dual: ua.size,
        continuous_maps: lhs.len(),
        delta_maps: rhs.len(),
        bijective: witness.is_none(),
        witness,
    })
}

/// For `F: A -> B`, checks `Φ_B(κ ∘ u(F)) = F ∘ Φ_A(κ)` for every `κ: u(A) -> K_n`.
/// Returns the first `κ` where the square fails.
pub fn betti_naturality(
    k: &Tower,
    level: usize,
    f: &FunctionRingMap,
    a: &StoneDeltaRingApprox,
    b: &StoneDeltaRingApprox,
) -> Result<Option<Vec<usize>>> {
    let k_size = cont_of_level(k, level, a)?.domain_size();
    let (ua, pa) = psi_site_object(a)?;
    let (_, pb) = psi_site_object(b)?;
    let uf = psi_dual_map(f, a, b)?;
    for kappa in all_functions(ua.size, k_size) {
        let pulled: Vec<usize> = uf.map.iter().map(|c| kappa[*c]).collect();
        let left = canonical_map(&pulled, &pb, k_size, b);
        let right: Vec<Vec<u64>> = canonical_map(&kappa, &pa, k_size, a).iter().map(|e| f.apply(e)).collect();
        if left != right {
            return Ok(Some(kappa));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Prime;
    use crate::condensed::presheaf::Representable;
    use crate::duality::phi_functor;
    use crate::profinite::{canonical_cantor, canonical_ntilde};

    fn p2() -> Prime {
        Prime::new(2).unwrap()
    }

    fn corpus(m: u32) -> Vec<StoneDeltaRingApprox> {
        let nt = canonical_ntilde(2).unwrap();
        let c = canonical_cantor(1).unwrap();
        vec![
            phi_functor(&Tower::point(1), 1, p2(), m).unwrap(),
            phi_functor(&nt, 1, p2(), m).unwrap(),
            phi_functor(&nt, 2, p2(), m).unwrap(),
            phi_functor(&c, 1, p2(), m).unwrap(),
        ]
    }

    fn ks() -> Vec<(Tower, usize)> {
        vec![
            (Tower::point(1), 1),
            (Tower::constant(vec!["a".into(), "b".into()], 1), 1),
            (canonical_ntilde(2).unwrap(), 2),
            (canonical_cantor(1).unwrap(), 1),
        ]
    }

    #[test]
    fn point_and_two_point_examples() {
        for m in 1..=2 {
            let zp = phi_functor(&Tower::point(1), 0, p2(), m).unwrap();
            let two = Tower::constant(vec!["a".into(), "b".into()], 1);
            let r = betti_delta_check(&two, 1, &zp).unwrap();
            assert!(r.passed());
            assert_eq!((r.continuous_maps, r.delta_maps), (2, 2));
            for a in corpus(m) {
                let r = betti_delta_check(&Tower::point(1), 0, &a).unwrap();
                assert!(r.passed());
                assert_eq!(r.delta_maps, 1);
            }
        }
    }

    #[test]
    fn pushforward_of_point_ring_is_value_at_point() {
        let zp = phi_functor(&Tower::point(1), 0, p2(), 2).unwrap();
        let x = Representable::new(SiteObject::new("K", 3));
        assert_eq!(psi_pushforward(&x, &zp).unwrap(), x.sections(&SiteObject::new("pt", 1)).unwrap());
    }

    #[test]
    fn corpus_bijections_and_pushforward_agree() {
        for m in 1..=2 {
            for a in corpus(m) {
                for (k, n) in ks() {
                    let r = betti_delta_check(&k, n, &a).unwrap();
                    assert!(r.passed(), "{r:?}");
                    let x = Representable::new(SiteObject::new("K", k.level_size(n)));
                    assert_eq!(psi_pushforward(&x, &a).unwrap().len(), r.delta_maps);
                }
            }
        }
    }

    fn corpus_maps(a: &StoneDeltaRingApprox, b: &StoneDeltaRingApprox) -> Vec<FunctionRingMap> {
        all_functions(b.points(), a.points())
            .map(|g| FunctionRingMap::pullback(a.carrier, b.carrier, &g).unwrap())
            .collect()
    }

    #[test]
    fn naturality_over_corpus_maps() {
        let corpus = corpus(2);
        for a in &corpus {
            for b in &corpus {
                for f in corpus_maps(a, b) {
                    for (k, n) in ks() {
                        assert_eq!(betti_naturality(&k, n, &f, a, b).unwrap(), None);
                    }
                }
            }
        }
    }

    #[test]
    fn pushforward_is_functorial() {
        let corpus = corpus(1);
        let x = Representable::new(SiteObject::new("K", 2));
        for a in &corpus {
            let id = psi_pushforward_map(&x, &FunctionRingMap::identity(a.carrier), a, a).unwrap();
            assert_eq!(id, (0..id.len()).collect::<Vec<_>>());
            for b in &corpus {
                for c in &corpus {
                    for f in corpus_maps(a, b) {
                        for g in corpus_maps(b, c) {
                            let gf_images = (0..a.points()).map(|s| g.apply(&f.images[s])).collect();
                            let gf = FunctionRingMap::new(a.carrier, c.carrier, gf_images).unwrap();
                            let direct = psi_pushforward_map(&x, &gf, a, c).unwrap();
                            let mf = psi_pushforward_map(&x, &f, a, b).unwrap();
                            let mg = psi_pushforward_map(&x, &g, b, c).unwrap();
                            let composite: Vec<usize> = mf.iter().map(|i| mg[*i]).collect();
                            assert_eq!(direct, composite);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn wrong_rings_are_rejected() {
        let c = corpus(1);
        let f = FunctionRingMap::identity(c[1].carrier);
        assert!(psi_dual_map(&f, &c[0], &c[1]).is_err());
    }
}
