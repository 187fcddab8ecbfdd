use serde::Serialize;

use super::maps::{dual_via_characters, FunctionRingMap};
use crate::algebra::fp_algebra::examples::function_algebra;
use crate::algebra::{FunctionRing, Prime, ResidueRing};
use crate::error::{Error, Result};
use crate::stone::{flatness, AlgebraMap};

/// Flatness data of a map `F_p^S -> F_p^T` (or of the mod-`p` reduction of a map of
/// Stone δ-rings).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FFWitness {
    pub map: AlgebraMap,
    /// The dual set map `T -> S`.
    pub dual: Vec<usize>,
    pub mod_p_faithfully_flat: bool,
    pub p_torsion_free_structurally: bool,
    /// Oracles that must agree with `mod_p_faithfully_flat`.
    pub injective: bool,
    pub flatness_test: bool,
    /// A point of `S` outside the image of the dual map, and the indicator it kills.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub missed_point: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub killed_function: Option<Vec<u64>>,
}

impl FFWitness {
    pub fn faithfully_flat(&self) -> bool {
        self.p_torsion_free_structurally && self.mod_p_faithfully_flat
    }

    pub fn criteria_agree(&self) -> bool {
        self.mod_p_faithfully_flat == self.injective && self.injective == self.flatness_test
    }
}

/// Faithful flatness of `f: F_p^S -> F_p^T` as surjectivity of the dual map, with the
/// injectivity and general flatness criteria recorded alongside.
pub fn ff_check(f: &AlgebraMap, s_size: usize, t_size: usize) -> Result<FFWitness> {
    let p = Prime::new(f.matrix.p)?;
    let (fs, ft) = (function_algebra(p, s_size), function_algebra(p, t_size));
    if let Some(why) = f.ring_hom_failure(&fs, &ft) {
        return Err(Error::NotRingHom(why));
    }
    let dual = dual_via_characters(f, s_size, t_size)?;
    let missed_point = (0..s_size).find(|s| !dual.contains(s));
    let killed_function = missed_point.map(|s| {
        let mut e = vec![0; s_size];
        e[s] = 1;
        e
    });
    Ok(FFWitness {
        map: f.clone(),
        mod_p_faithfully_flat: missed_point.is_none(),
        p_torsion_free_structurally: true,
        injective: f.is_injective(),
        flatness_test: flatness(f, &fs, &ft)?.faithfully_flat,
        dual,
        missed_point,
        killed_function,
    })
}

/// p-complete faithful flatness of a map of Stone δ-rings: function rings into `Z/p^m` are
/// free over `Z/p^m`, so the derived mod-`p` fiber is the ordinary one and only the
/// reduction needs checking.
pub fn p_complete_ff_check(f: &FunctionRingMap) -> Result<FFWitness> {
    if f.source.precision() != f.target.precision() {
        return Err(Error::ParameterMismatch("source and target precisions differ".into()));
    }
    ff_check(&f.reduction(), f.source.domain_size(), f.target.domain_size())
}

/// A finite family of maps `T_i -> T` of finite sets (one level of site objects).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelCover {
    pub base_size: usize,
    /// `members[i][x]` is the image in `T` of `x ∈ T_i`.
    pub members: Vec<Vec<usize>>,
}

impl LevelCover {
    pub fn jointly_surjective(&self) -> bool {
        (0..self.base_size).all(|t| self.members.iter().any(|m| m.contains(&t)))
    }

    /// The induced map `⊔ T_i -> T`.
    pub fn coproduct_map(&self) -> Vec<usize> {
        self.members.concat()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TranslatedCover {
    pub maps: Vec<FunctionRingMap>,
    /// `Cont(T) -> prod_i Cont(T_i)`.
    pub product: FunctionRingMap,
    pub product_ff: FFWitness,
    /// The members recovered from the ring maps through characters.
    pub round_trip: Vec<Vec<usize>>,
}

impl TranslatedCover {
    pub fn round_trip_ok(&self, cover: &LevelCover) -> bool {
        self.round_trip == cover.members
    }
}

/// Send a family of set maps to the family of pullback maps of Stone δ-rings at precision `m`,
/// the product map, and back.
pub fn site_translate(cover: &LevelCover, p: Prime, m: u32) -> Result<TranslatedCover> {
    let coeff = ResidueRing::new(p, m)?;
    let base = FunctionRing::new(cover.base_size, coeff)?;
    let maps = cover
        .members
        .iter()
        .map(|g| FunctionRingMap::pullback(base, FunctionRing::new(g.len(), coeff)?, g))
        .collect::<Result<Vec<_>>>()?;
    let joint = cover.coproduct_map();
    let product = FunctionRingMap::pullback(base, FunctionRing::new(joint.len(), coeff)?, &joint)?;
    let product_ff = p_complete_ff_check(&product)?;
    let round_trip = maps
        .iter()
        .map(|f| dual_via_characters(&f.reduction(), f.source.domain_size(), f.target.domain_size()))
        .collect::<Result<Vec<_>>>()?;
    Ok(TranslatedCover {
        maps,
        product,
        product_ff,
        round_trip,
    })
}

/// Every family of `1..=max_members` maps `T_i -> T` with `|T|, |T_i| <= max_size`, members
/// listed in a canonical nondecreasing order (families are taken up to reordering).
pub fn enumerate_level_families(max_size: usize, max_members: usize) -> Vec<LevelCover> {
    let mut out = Vec::new();
    for base in 1..=max_size {
        let maps: Vec<Vec<usize>> = (1..=max_size).flat_map(|s| crate::profinite::all_functions(s, base)).collect();
        let mut stack: Vec<Vec<usize>> = (0..maps.len()).map(|i| vec![i]).collect();
        while let Some(family) = stack.pop() {
            out.push(LevelCover {
                base_size: base,
                members: family.iter().map(|i| maps[*i].clone()).collect(),
            });
            if family.len() < max_members {
                let last = *family.last().expect("nonempty");
                for j in last..maps.len() {
                    let mut next = family.clone();
                    next.push(j);
                    stack.push(next);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profinite::all_functions;

    fn p2() -> Prime {
        Prime::new(2).unwrap()
    }

    #[test]
    fn examples() {
        // S = {1,2}, T = {1,2,3}, dual surjective
        let f = AlgebraMap::pullback(p2(), 2, &[0, 1, 1]);
        let w = ff_check(&f, 2, 3).unwrap();
        assert!(w.faithfully_flat() && w.criteria_agree());
        let f = AlgebraMap::pullback(p2(), 2, &[0, 0, 0]);
        let w = ff_check(&f, 2, 3).unwrap();
        assert!(!w.faithfully_flat() && !w.injective);
        assert_eq!(w.missed_point, Some(1));
        assert_eq!(f.apply(w.killed_function.as_ref().unwrap()), vec![0, 0, 0]);
        let id = AlgebraMap::pullback(p2(), 3, &[0, 1, 2]);
        assert!(ff_check(&id, 3, 3).unwrap().faithfully_flat());
        let bad = AlgebraMap::pullback(p2(), 2, &[0, 1]);
        assert!(ff_check(&bad, 3, 2).is_err());
    }

    #[test]
    fn criteria_agree_on_all_small_maps() {
        for s in 1..=3 {
            for t in 1..=3 {
                for g in all_functions(t, s) {
                    let w = ff_check(&AlgebraMap::pullback(p2(), s, &g), s, t).unwrap();
                    assert!(w.criteria_agree());
                    assert_eq!(w.dual, g);
                }
            }
        }
    }

    #[test]
    fn witt_lifts() {
        let coeff = ResidueRing::new(p2(), 3).unwrap();
        let (s, t) = (FunctionRing::new(2, coeff).unwrap(), FunctionRing::new(3, coeff).unwrap());
        let good = FunctionRingMap::pullback(s, t, &[1, 0, 1]).unwrap();
        assert!(p_complete_ff_check(&good).unwrap().faithfully_flat());
        let bad = FunctionRingMap::pullback(s, t, &[1, 1, 1]).unwrap();
        let w = p_complete_ff_check(&bad).unwrap();
        assert!(!w.faithfully_flat());
        assert_eq!(w.missed_point, ff_check(&bad.reduction(), 2, 3).unwrap().missed_point);
        assert!(p_complete_ff_check(&FunctionRingMap::identity(t)).unwrap().faithfully_flat());
    }

    #[test]
    fn cover_examples() {
        let single = LevelCover { base_size: 3, members: vec![vec![0, 1, 2]] };
        let tr = site_translate(&single, p2(), 2).unwrap();
        assert!(tr.round_trip_ok(&single) && tr.product_ff.faithfully_flat());
        // {1,2} and {2,3} inside {1,2,3}
        let two = LevelCover { base_size: 3, members: vec![vec![0, 1], vec![1, 2]] };
        let tr = site_translate(&two, p2(), 2).unwrap();
        assert!(tr.maps.iter().all(|f| f.reduction().is_surjective()));
        assert!(tr.product_ff.faithfully_flat());
        let gap = LevelCover { base_size: 3, members: vec![vec![0, 1], vec![1, 0]] };
        let tr = site_translate(&gap, p2(), 2).unwrap();
        assert!(!tr.product_ff.faithfully_flat());
        assert_eq!(tr.product_ff.missed_point, Some(2));
    }

    #[test]
    fn family_enumeration() {
        let fams = enumerate_level_families(2, 2);
        // base 1: maps from sizes 1,2 -> 2 maps; families of size <= 2 up to order: 2 + 3
        // base 2: 2 + 4 = 6 maps; 6 + 21
        assert_eq!(fams.len(), 5 + 27);
    }
}
