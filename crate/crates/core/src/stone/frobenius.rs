use serde::Serialize;

use super::maps::AlgebraMap;
use super::pboolean::PBooleanAlgebra;
use crate::algebra::linalg::{complement_basis, coordinates, quotient_coordinates};
use crate::algebra::{CommRing, FiniteFpAlgebra, FpMatrix};
use crate::error::{Error, Result};

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn is_perfect(a: &FiniteFpAlgebra) -> bool {
    a.frobenius_matrix().rank() == a.dim()
}

/// `A^{Frob=1} = ker(Frob - 1)` with its inclusion into `A`.
#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusInvariants {
    pub algebra: PBooleanAlgebra,
    pub inclusion: AlgebraMap,
}

/// `A_{Frob=1}`, the largest p-Boolean quotient, with the projection from `A`.
///
/// `None` when the quotient is the zero ring (e.g. for `F_4`), which has no
/// `FiniteFpAlgebra` representation.
#[derive(Debug, Clone, Serialize)]
pub struct FrobeniusCoinvariants {
    pub quotient: Option<(PBooleanAlgebra, AlgebraMap)>,
}

pub fn frobenius_invariants(a: &FiniteFpAlgebra) -> Result<FrobeniusInvariants> {
    let m = a.frobenius_matrix().sub(&FpMatrix::identity(a.prime(), a.dim()));
    // kernel basis in rref coordinates, so the inclusion matrix has an identity block
    let basis = crate::algebra::linalg::span_basis(a.prime().get(), a.dim(), &m.kernel());
    let sub = a.subalgebra(&basis, labels("inv", basis.len()))?;
    let inclusion = AlgebraMap::new(FpMatrix::from_columns(a.prime(), a.dim(), &basis));
    Ok(FrobeniusInvariants {
        algebra: PBooleanAlgebra::new(sub)?,
        inclusion,
    })
}

/// The coequalizer of `Frob` and `id` in rings, computed on the coperfection:
/// `A_perf / (b^p - b)`, composed with the unit `A -> A_perf`.
pub fn frobenius_coinvariants(a: &FiniteFpAlgebra) -> Result<FrobeniusCoinvariants> {
    let cp = coperfection(a)?;
    let e = &cp.algebra;
    let m = e.frobenius_matrix().sub(&FpMatrix::identity(e.prime(), e.dim()));
    let gens: Vec<Vec<u64>> = (0..e.dim()).map(|j| m.column(j)).collect();
    let quotient = quotient_by_ideal(e, &gens)?;
    Ok(FrobeniusCoinvariants {
        quotient: match quotient {
            Some((q, proj)) => Some((PBooleanAlgebra::new(q)?, proj.after(&cp.unit))),
            None => None,
        },
    })
}

/// `A / (g_1, ..., g_k)`, or `None` when the ideal is everything.
pub fn quotient_by_ideal(a: &FiniteFpAlgebra, gens: &[Vec<u64>]) -> Result<Option<(FiniteFpAlgebra, AlgebraMap)>> {
    let p = a.prime().get();
    let ideal = a.ideal_span(gens);
    if ideal.len() == a.dim() {
        return Ok(None);
    }
    let comp = complement_basis(p, a.dim(), &ideal);
    let k = comp.len();
    let mut sc = vec![vec![vec![0; k]; k]; k];
    for i in 0..k {
        for j in 0..k {
            sc[i][j] = quotient_coordinates(p, &ideal, &comp, &a.mul(&comp[i], &comp[j]));
        }
    }
    let unit = quotient_coordinates(p, &ideal, &comp, a.unit());
    let q = FiniteFpAlgebra::new(a.prime(), labels("q", k), sc, unit)?;
    let cols: Vec<Vec<u64>> = (0..a.dim())
        .map(|i| quotient_coordinates(p, &ideal, &comp, &a.basis(i)))
        .collect();
    Ok(Some((q, AlgebraMap::new(FpMatrix::from_columns(a.prime(), k, &cols)))))
}

/// The eventual image `E = Frob^dim(A)` as a subalgebra, with its basis in `A`.
fn eventual_image(a: &FiniteFpAlgebra) -> Result<(FiniteFpAlgebra, Vec<Vec<u64>>)> {
    let f = a.frobenius_matrix().pow(a.dim() as u32);
    let basis = f.image();
    let sub = a.subalgebra(&basis, labels("perf", basis.len()))?;
    Ok((sub, basis))
}

/// Colimit along Frobenius, modeled on the eventual image `E`, with the unit `A -> E`,
/// `a -> (Frob|_E)^{-k} Frob^k(a)` for `k = dim A`.
#[derive(Debug, Clone, Serialize)]
pub struct Coperfection {
    pub algebra: FiniteFpAlgebra,
    pub unit: AlgebraMap,
}

/// Limit along Frobenius, modeled on the eventual image `E`, with the counit `E -> A`
/// (projection of a compatible sequence to its zeroth term).
#[derive(Debug, Clone, Serialize)]
pub struct Perfection {
    pub algebra: FiniteFpAlgebra,
    pub counit: AlgebraMap,
}

pub fn coperfection(a: &FiniteFpAlgebra) -> Result<Coperfection> {
    let p = a.prime();
    let (e, basis) = eventual_image(a)?;
    let frob_e_inv = e
        .frobenius_matrix()
        .inverse()
        .ok_or_else(|| Error::Internal("Frobenius not bijective on the eventual image".into()))?;
    let k = a.dim() as u32;
    let fk = a.frobenius_matrix().pow(k);
    let back = frob_e_inv.pow(k);
    let cols: Vec<Vec<u64>> = (0..a.dim())
        .map(|i| {
            let img = fk.apply(&a.basis(i));
            let c = coordinates(p.get(), &basis, &img).expect("Frob^k lands in the eventual image");
            back.apply(&c)
        })
        .collect();
    Ok(Coperfection {
        algebra: e.clone(),
        unit: AlgebraMap::new(FpMatrix::from_columns(p, e.dim(), &cols)),
    })
}

pub fn perfection(a: &FiniteFpAlgebra) -> Result<Perfection> {
    let (e, basis) = eventual_image(a)?;
    Ok(Perfection {
        algebra: e,
        counit: AlgebraMap::new(FpMatrix::from_columns(a.prime(), a.dim(), &basis)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CharPDiagnostics {
    pub reduced: bool,
    pub frob_injective: bool,
    pub semiperfect: bool,
}

impl CharPDiagnostics {
    /// Reduced iff Frobenius is injective.
    pub fn consistent(&self) -> bool {
        self.reduced == self.frob_injective
    }
}

/// Nonzero nilpotent element, if any: exhaustive up to exponent `dim` when enumerable,
/// otherwise read off `ker Frob^dim`.
pub fn find_nilpotent(a: &FiniteFpAlgebra) -> Option<Vec<u64>> {
    if a.is_exhaustively_enumerable() {
        return a.all_elements().find(|x| {
            !a.is_zero(x) && (1..=a.dim() as u64).any(|k| a.is_zero(&a.pow(x, k)))
        });
    }
    a.frobenius_matrix().pow(a.dim() as u32).kernel().into_iter().next()
}

pub fn char_p_diagnostics(a: &FiniteFpAlgebra) -> CharPDiagnostics {
    let rank = a.frobenius_matrix().rank();
    CharPDiagnostics {
        reduced: find_nilpotent(a).is_none(),
        frob_injective: rank == a.dim(),
        semiperfect: rank == a.dim(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fp_algebra::examples::*;
    use crate::algebra::{FiniteRing, Prime};
    use crate::stone::pboolean::is_p_boolean;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn invariants_examples() {
        let fs = function_algebra(p(2), 3);
        assert_eq!(frobenius_invariants(&fs).unwrap().algebra.dim(), 3);
        assert_eq!(frobenius_invariants(&f4()).unwrap().algebra.dim(), 1);
        let inv = frobenius_invariants(&dual_numbers(p(2))).unwrap();
        assert_eq!(inv.algebra.dim(), 1);
        assert_eq!(inv.inclusion.apply(&[1]), vec![1, 0]);
    }

    #[test]
    fn invariants_are_the_fixed_points() {
        for a in [f4(), dual_numbers(p(3)), f4().product(&dual_numbers(p(2))).unwrap()] {
            let inv = frobenius_invariants(&a).unwrap();
            let fixed = a.elements().into_iter().filter(|x| a.frobenius(x) == *x).count();
            assert_eq!(fixed as u64, inv.algebra.cardinality());
            assert!(inv.inclusion.is_ring_hom(&inv.algebra, &a));
        }
    }

    #[test]
    fn coinvariants_examples() {
        let fs = function_algebra(p(3), 2);
        let (q, _) = frobenius_coinvariants(&fs).unwrap().quotient.unwrap();
        assert_eq!(q.dim(), 2);
        // F_4 / (w^2 - w) = F_4 / (1) = 0
        assert!(frobenius_coinvariants(&f4()).unwrap().quotient.is_none());
        let (q, proj) = frobenius_coinvariants(&dual_numbers(p(2))).unwrap().quotient.unwrap();
        assert_eq!(q.dim(), 1);
        assert!(proj.is_ring_hom(&dual_numbers(p(2)), &q));
    }

    #[test]
    fn coinvariants_agree_with_direct_coequalizer() {
        // direct route: A / ideal generated by (Frob - 1)(A), no coperfection step
        for a in [
            f4(),
            dual_numbers(p(2)),
            f4().product(&function_algebra(p(2), 2)).unwrap(),
            FiniteFpAlgebra::monogenic(p(2), &[0, 1, 1]).unwrap(),
            dual_numbers(p(3)).product(&FiniteFpAlgebra::prime_field(p(3))).unwrap(),
        ] {
            let m = a.frobenius_matrix().sub(&FpMatrix::identity(a.prime(), a.dim()));
            let gens: Vec<Vec<u64>> = (0..a.dim()).map(|j| m.column(j)).collect();
            let direct = quotient_by_ideal(&a, &gens).unwrap().map(|(q, _)| q.dim());
            let via = frobenius_coinvariants(&a).unwrap().quotient.map(|(q, _)| q.dim());
            assert_eq!(direct, via);
        }
    }

    #[test]
    fn coperfection_examples() {
        let cp = coperfection(&f4()).unwrap();
        assert_eq!(cp.algebra.dim(), 2);
        let cp = coperfection(&dual_numbers(p(2))).unwrap();
        assert_eq!(cp.algebra.dim(), 1);
        assert!(is_perfect(&cp.algebra));
        assert!(cp.unit.is_ring_hom(&dual_numbers(p(2)), &cp.algebra));
    }

    #[test]
    fn coperfection_is_idempotent_and_perfect() {
        let a = FiniteFpAlgebra::monogenic(p(2), &[0, 0, 1]).unwrap(); // x^3 + x^2 = x^2 (x + 1)
        let cp = coperfection(&a).unwrap();
        assert!(is_perfect(&cp.algebra));
        assert!(cp.unit.is_ring_hom(&a, &cp.algebra));
        let cp2 = coperfection(&cp.algebra).unwrap();
        assert_eq!(cp2.algebra.dim(), cp.algebra.dim());
        assert!(cp2.unit.is_injective() && cp2.unit.is_surjective());
        let pf = perfection(&a).unwrap();
        assert!(is_perfect(&pf.algebra));
        assert!(pf.counit.is_ring_hom(&pf.algebra, &a));
    }

    #[test]
    fn perfection_matches_compatible_sequences() {
        // zeroth terms of length-(dim+1) Frobenius-compatible chains form the eventual image
        for a in [dual_numbers(p(2)), FiniteFpAlgebra::monogenic(p(2), &[0, 0, 1]).unwrap(), f4()] {
            let els = a.elements();
            let mut reachable: Vec<Vec<u64>> = els.clone();
            for _ in 0..=a.dim() {
                reachable = els
                    .iter()
                    .filter(|x| reachable.iter().any(|y| a.frobenius(y) == **x))
                    .cloned()
                    .collect();
            }
            let pf = perfection(&a).unwrap();
            assert_eq!(reachable.len() as u64, pf.algebra.cardinality());
            for x in pf.algebra.elements() {
                assert!(reachable.contains(&pf.counit.apply(&x)));
            }
        }
    }

    #[test]
    fn diagnostics() {
        let d = char_p_diagnostics(&dual_numbers(p(2)));
        assert_eq!((d.reduced, d.frob_injective, d.semiperfect), (false, false, false));
        let d = char_p_diagnostics(&f4());
        assert_eq!((d.reduced, d.frob_injective, d.semiperfect), (true, true, true));
        let d = char_p_diagnostics(&function_algebra(p(2), 2));
        assert_eq!((d.reduced, d.frob_injective, d.semiperfect), (true, true, true));
        for a in [f4().product(&dual_numbers(p(2))).unwrap(), dual_numbers(p(3))] {
            assert!(char_p_diagnostics(&a).consistent());
        }
    }

    #[test]
    fn outputs_are_p_boolean() {
        for a in [f4(), dual_numbers(p(2)), f4().product(&function_algebra(p(2), 1)).unwrap()] {
            assert!(is_p_boolean(&frobenius_invariants(&a).unwrap().algebra));
            if let Some((q, _)) = frobenius_coinvariants(&a).unwrap().quotient {
                assert!(is_p_boolean(&q));
            }
        }
    }
}
