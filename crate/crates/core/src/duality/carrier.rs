use std::collections::HashSet;

use serde::Serialize;

use crate::algebra::hom::{enumerate_ring_homs, ElementIndex, FiniteHom};
use crate::algebra::{FiniteFpAlgebra, FiniteRing, Prime};
use crate::error::{Error, Result};
use crate::stone::{
    compare_hom_sets, coperfection, flatness, frobenius_coinvariants, frobenius_invariants, is_p_boolean, perfection,
    AlgebraMap, HomBijection,
};
use crate::witt::{DeltaStructure, WittRing, WittVector};

type Elem = WittVector<Vec<u64>>;

/// `W_m(R)` for a finite `F_p`-algebra `R`, with the Frobenius lift acting digitwise.
///
/// `Z/p^m` is `W_m(F_p)`, and `(Z/p^m)^S` is `W_m(F_p^S)`.
#[derive(Debug, Clone)]
pub struct WittCarrier {
    pub ring: WittRing<FiniteFpAlgebra>,
}

impl PartialEq for WittCarrier {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
    }
}

impl WittCarrier {
    pub fn new(base: FiniteFpAlgebra, precision: usize) -> Result<Self> {
        let p = base.prime();
        Ok(WittCarrier {
            ring: WittRing::new(base, p, precision)?,
        })
    }

    pub fn base(&self) -> &FiniteFpAlgebra {
        self.ring.base()
    }

    pub fn prime(&self) -> Prime {
        self.ring.prime()
    }

    pub fn precision(&self) -> usize {
        self.ring.len()
    }

    pub fn order(&self) -> u64 {
        self.ring.order()
    }

    pub fn phi(&self, x: &Elem) -> Elem {
        self.ring.digitwise_frobenius(x)
    }

    /// The δ-structure of the lift; needs a perfect base and precision at least 2.
    pub fn delta_structure(&self) -> Result<DeltaStructure<WittRing<FiniteFpAlgebra>>> {
        if !self.ring.base_is_perfect() {
            return Err(Error::NotPerfect);
        }
        let ring = self.ring.clone();
        DeltaStructure::new(self.ring.clone(), move |x| ring.digitwise_frobenius(x))
    }

    /// `φ(x) = x` for every element, by enumeration.
    pub fn phi_is_identity(&self) -> bool {
        self.ring.elements().iter().all(|x| self.phi(x) == *x)
    }

    /// Carriers isomorphic to `(Z/p^m)^S`: the base is p-Boolean.
    pub fn is_stone(&self) -> bool {
        is_p_boolean(self.base())
    }

    /// `W_m(f)`, applied digitwise.
    pub fn map_digits(f: &AlgebraMap, x: &Elem) -> Elem {
        WittVector(x.0.iter().map(|d| f.apply(d)).collect())
    }

    /// Unital ring maps `self -> other` commuting with the lifts.
    pub fn delta_maps(&self, other: &WittCarrier) -> Result<Vec<FiniteHom<Elem>>> {
        let homs = enumerate_ring_homs(&self.ring, &other.ring)?;
        let els = self.ring.elements();
        let idx = ElementIndex::new(&self.ring);
        Ok(homs
            .into_iter()
            .filter(|h| els.iter().enumerate().all(|(i, x)| h.images[idx.get(&self.phi(x))] == other.phi(&h.images[i])))
            .collect())
    }
}

/// `ker(φ - 1) = W_m(R^{Frob=1})` with its inclusion, applied digitwise.
#[derive(Debug, Clone)]
pub struct DeltaInvariants {
    pub carrier: WittCarrier,
    pub inclusion: AlgebraMap,
}

/// `coker(φ - 1)` re-truncated at precision `m`, i.e. `W_m(R_{Frob=1})`, with the
/// projection applied digitwise; `None` for the zero ring.
#[derive(Debug, Clone)]
pub struct DeltaCoinvariants {
    pub quotient: Option<(WittCarrier, AlgebraMap)>,
}

pub fn delta_invariants(c: &WittCarrier) -> Result<DeltaInvariants> {
    let inv = frobenius_invariants(c.base())?;
    Ok(DeltaInvariants {
        carrier: WittCarrier::new(inv.algebra.into_inner(), c.precision())?,
        inclusion: inv.inclusion,
    })
}

pub fn delta_coinvariants(c: &WittCarrier) -> Result<DeltaCoinvariants> {
    Ok(DeltaCoinvariants {
        quotient: match frobenius_coinvariants(c.base())?.quotient {
            Some((q, proj)) => Some((WittCarrier::new(q.into_inner(), c.precision())?, proj)),
            None => None,
        },
    })
}

/// The colimit along `φ`: `W_m` of the coperfection, with `W_m` of its unit.
pub fn delta_coperfection(c: &WittCarrier) -> Result<(WittCarrier, AlgebraMap)> {
    let cp = coperfection(c.base())?;
    Ok((WittCarrier::new(cp.algebra, c.precision())?, cp.unit))
}

/// The limit along `φ`: `W_m` of the perfection, with `W_m` of its counit.
pub fn delta_perfection(c: &WittCarrier) -> Result<(WittCarrier, AlgebraMap)> {
    let pf = perfection(c.base())?;
    Ok((WittCarrier::new(pf.algebra, c.precision())?, pf.counit))
}

/// Elements of `c` fixed by `φ`, by enumeration.
pub fn fixed_points(c: &WittCarrier) -> Vec<Elem> {
    c.ring.elements().into_iter().filter(|x| c.phi(x) == *x).collect()
}

/// Size of `c / (φ(x) - x : x ∈ c)`, by closing the generators under addition and
/// multiplication by ring elements.
pub fn coequalizer_size(c: &WittCarrier) -> u64 {
    use crate::algebra::CommRing;
    let r = &c.ring;
    let els = r.elements();
    let mut ideal: HashSet<Elem> = [r.zero()].into();
    let mut frontier: Vec<Elem> = els.iter().map(|x| r.sub(&c.phi(x), x)).collect();
    while let Some(g) = frontier.pop() {
        let multiples: Vec<Elem> = els.iter().map(|x| r.mul(x, &g)).collect();
        for m in multiples {
            let sums: Vec<Elem> = ideal.iter().map(|i| r.add(i, &m)).collect();
            for s in sums {
                if ideal.insert(s.clone()) {
                    frontier.push(s);
                }
            }
        }
    }
    c.order() / ideal.len() as u64
}

/// `Hom(B, A^{φ=1}) -> Hom(B, A)` by composing with the inclusion, for Stone `B`.
pub fn delta_invariants_adjunction(a: &WittCarrier, b: &WittCarrier) -> Result<HomBijection> {
    if !b.is_stone() {
        return Err(Error::NotPBoolean);
    }
    let inv = delta_invariants(a)?;
    let left = b.delta_maps(&inv.carrier)?;
    let right = b.delta_maps(a)?;
    Ok(compare_hom_sets("delta-invariants", &left, &right, |f| FiniteHom {
        images: f.images.iter().map(|y| WittCarrier::map_digits(&inv.inclusion, y)).collect(),
    }))
}

/// `Hom(A_{φ=1}, B) -> Hom(A, B)` by precomposing with the projection, for Stone `B`.
pub fn delta_coinvariants_adjunction(a: &WittCarrier, b: &WittCarrier) -> Result<HomBijection> {
    if !b.is_stone() {
        return Err(Error::NotPBoolean);
    }
    let right = a.delta_maps(b)?;
    Ok(match delta_coinvariants(a)?.quotient {
        Some((q, proj)) => {
            let left = q.delta_maps(b)?;
            let idx = ElementIndex::new(&q.ring);
            let els = a.ring.elements();
            compare_hom_sets("delta-coinvariants", &left, &right, |f| FiniteHom {
                images: els.iter().map(|x| f.images[idx.get(&WittCarrier::map_digits(&proj, x))].clone()).collect(),
            })
        }
        None => compare_hom_sets::<FiniteHom<Elem>, _>("delta-coinvariants", &[], &right, |f| f.clone()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StoneCharacterization {
    pub phi_is_identity: bool,
    /// `A -> A_{φ=1}` is p-completely faithfully flat: the carriers are p-torsion-free
    /// (perfect bases) and the mod-`p` map `R -> R_{Frob=1}` is faithfully flat.
    pub coinvariant_map_ff: bool,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

pub fn stone_characterization_check(c: &WittCarrier) -> Result<StoneCharacterization> {
    let phi_is_identity = c.phi_is_identity();
    let torsion_free = c.ring.base_is_perfect();
    let (coinvariant_map_ff, witness) = match delta_coinvariants(c)?.quotient {
        None => (false, Some("the coinvariant ring is zero".to_string())),
        Some((q, proj)) => {
            let report = flatness(&proj, c.base(), q.base())?;
            let ff = torsion_free && report.faithfully_flat;
            let why = (!ff).then(|| match report.factors.iter().find(|l| l.rank == 0 || !l.free) {
                Some(l) => format!("local factor at idempotent {:?} has rank {}", l.idempotent, l.rank),
                None => "base is not perfect".to_string(),
            });
            (ff, why)
        }
    };
    Ok(StoneCharacterization {
        phi_is_identity,
        coinvariant_map_ff,
        agree: phi_is_identity == coinvariant_map_ff,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fp_algebra::examples::*;
    use crate::stone::is_perfect;
    use crate::witt::{check_delta_axioms, is_perfect_delta};

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn carrier(base: FiniteFpAlgebra, m: usize) -> WittCarrier {
        WittCarrier::new(base, m).unwrap()
    }

    #[test]
    fn invariants_of_w2_f4_are_z4() {
        let c = carrier(f4(), 2);
        let inv = delta_invariants(&c).unwrap();
        assert_eq!(inv.carrier.order(), 4);
        assert_eq!(fixed_points(&c).len(), 4);
        assert!(inv.carrier.phi_is_identity());
        let stone = carrier(function_algebra(p(2), 2), 2);
        assert_eq!(delta_invariants(&stone).unwrap().carrier.order(), stone.order());
    }

    #[test]
    fn invariants_match_fixed_points() {
        for base in [f4(), function_algebra(p(2), 2), f4().product(&function_algebra(p(2), 1)).unwrap()] {
            for m in 1..=2 {
                let c = carrier(base.clone(), m);
                let inv = delta_invariants(&c).unwrap();
                let fixed = fixed_points(&c);
                assert_eq!(fixed.len() as u64, inv.carrier.order());
                let image: HashSet<Elem> = inv
                    .carrier
                    .ring
                    .elements()
                    .iter()
                    .map(|x| WittCarrier::map_digits(&inv.inclusion, x))
                    .collect();
                assert_eq!(image, fixed.into_iter().collect());
            }
        }
    }

    #[test]
    fn reduction_of_invariants_is_frobenius_invariants() {
        for base in [f4(), dual_numbers(p(2)), function_algebra(p(3), 2)] {
            let c = carrier(base.clone(), 2);
            let reduced: HashSet<Vec<u64>> = fixed_points(&c).into_iter().map(|x| x.0[0].clone()).collect();
            let frob_fixed: HashSet<Vec<u64>> = base.elements().into_iter().filter(|x| base.frobenius(x) == *x).collect();
            assert_eq!(reduced, frob_fixed);
        }
    }

    #[test]
    fn coinvariants_match_ideal_closure() {
        for base in [f4(), function_algebra(p(2), 2), f4().product(&function_algebra(p(2), 1)).unwrap(), FiniteFpAlgebra::prime_field(p(3))] {
            for m in 1..=2 {
                let c = carrier(base.clone(), m);
                let size = delta_coinvariants(&c).unwrap().quotient.map_or(1, |(q, _)| q.order());
                assert_eq!(size, coequalizer_size(&c));
            }
        }
    }

    #[test]
    fn coperfection_examples() {
        let c = carrier(dual_numbers(p(2)), 2);
        assert!(!is_perfect_delta(&c.ring, |x| c.phi(x)));
        let (cp, unit) = delta_coperfection(&c).unwrap();
        assert_eq!(cp.order(), 4);
        assert!(is_perfect_delta(&cp.ring, |x| cp.phi(x)));
        // the eventual image of φ on W_2(F_2[x]/x^2) has the same size
        let mut image: HashSet<Elem> = c.ring.elements().into_iter().collect();
        for _ in 0..4 {
            image = image.iter().map(|x| c.phi(x)).collect();
        }
        assert_eq!(image.len() as u64, cp.order());
        assert!(unit.is_ring_hom(c.base(), cp.base()));
        let f = carrier(f4(), 2);
        assert_eq!(delta_coperfection(&f).unwrap().0.order(), 16);
        let (pf, _) = delta_perfection(&c).unwrap();
        assert!(is_perfect(pf.base()));
    }

    #[test]
    fn delta_of_witt_carriers_satisfies_axioms() {
        let c = carrier(f4(), 2);
        let d = c.delta_structure().unwrap();
        let els = c.ring.elements();
        let pairs = els.iter().flat_map(|a| els.iter().map(move |b| (a.clone(), b.clone())));
        assert!(check_delta_axioms(&d, pairs).passed);
        assert!(carrier(dual_numbers(p(2)), 2).delta_structure().is_err());
    }

    #[test]
    fn delta_adjunctions_on_small_carriers() {
        let stone: Vec<WittCarrier> = vec![
            carrier(FiniteFpAlgebra::prime_field(p(2)), 2),
            carrier(function_algebra(p(2), 2), 2),
        ];
        let sources = [f4(), FiniteFpAlgebra::prime_field(p(2)), function_algebra(p(2), 2)];
        for a in sources {
            let a = carrier(a, 2);
            for b in &stone {
                let inv = delta_invariants_adjunction(&a, b).unwrap();
                assert!(inv.bijective, "{inv:?}");
                let co = delta_coinvariants_adjunction(&a, b).unwrap();
                assert!(co.bijective, "{co:?}");
            }
        }
    }

    #[test]
    fn characterization() {
        let r = stone_characterization_check(&carrier(function_algebra(p(2), 2), 2)).unwrap();
        assert!(r.phi_is_identity && r.coinvariant_map_ff);
        let r = stone_characterization_check(&carrier(f4(), 2)).unwrap();
        assert!(!r.phi_is_identity && !r.coinvariant_map_ff);
        let mixed = f4().product(&function_algebra(p(2), 1)).unwrap();
        let r = stone_characterization_check(&carrier(mixed, 2)).unwrap();
        assert!(r.agree && !r.phi_is_identity);
    }
}
