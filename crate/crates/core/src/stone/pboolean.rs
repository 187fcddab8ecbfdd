use std::ops::Deref;

use serde::Serialize;

use super::maps::AlgebraMap;
use crate::algebra::{CommRing, FiniteFpAlgebra, FpMatrix, Prime};
use crate::error::{Error, Result};

/// `a^p = a` for every element; by linearity of Frobenius this is `frobenius_matrix(A) = I`.
pub fn is_p_boolean(a: &FiniteFpAlgebra) -> bool {
    a.frobenius_matrix().is_identity()
}

/// A finite `F_p`-algebra in which every element satisfies `a^p = a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PBooleanAlgebra(FiniteFpAlgebra);

impl PBooleanAlgebra {
    pub fn new(a: FiniteFpAlgebra) -> Result<Self> {
        if !is_p_boolean(&a) {
            return Err(Error::NotPBoolean);
        }
        Ok(PBooleanAlgebra(a))
    }

    pub fn algebra(&self) -> &FiniteFpAlgebra {
        &self.0
    }

    pub fn into_inner(self) -> FiniteFpAlgebra {
        self.0
    }
}

impl Deref for PBooleanAlgebra {
    type Target = FiniteFpAlgebra;

    fn deref(&self) -> &FiniteFpAlgebra {
        &self.0
    }
}

/// An `F_p`-algebra map `A -> F_p`, given by its values on the basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Character(pub Vec<u64>);

impl Character {
    pub fn eval(&self, p: Prime, x: &[u64]) -> u64 {
        self.0.iter().zip(x).fold(0, |acc, (c, v)| (acc + c * v) % p.get())
    }

    pub fn as_map(&self, p: Prime) -> AlgebraMap {
        AlgebraMap::new(FpMatrix {
            p: p.get(),
            rows: 1,
            cols: self.0.len(),
            data: vec![self.0.clone()],
        })
    }

    /// `χ ∘ f` for an algebra map `f: B -> A`.
    pub fn precompose(&self, p: Prime, f: &AlgebraMap) -> Character {
        let cols = f.matrix.cols;
        Character(
            (0..cols)
                .map(|j| self.eval(p, &f.matrix.column(j)))
                .collect(),
        )
    }
}

/// The finite Stone dual of a p-Boolean algebra: its characters, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteStoneDual {
    pub p: Prime,
    pub points: Vec<Character>,
}

impl FiniteStoneDual {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, chi: &Character) -> Option<usize> {
        self.points.binary_search(chi).ok()
    }
}

fn is_character(a: &FiniteFpAlgebra, v: &[u64]) -> bool {
    let p = a.prime();
    let chi = Character(v.to_vec());
    if chi.eval(p, a.unit()) != 1 {
        return false;
    }
    let d = a.dim();
    (0..d).all(|i| {
        (i..d).all(|j| chi.eval(p, &a.mul(&a.basis(i), &a.basis(j))) == v[i] * v[j] % p.get())
    })
}

/// Characters by exhaustive search over all `p^dim` linear functionals.
pub fn characters_exhaustive(a: &FiniteFpAlgebra) -> Result<Vec<Character>> {
    if !a.is_exhaustively_enumerable() {
        return Err(Error::TooLarge(format!("{} functionals", a.cardinality())));
    }
    let mut out: Vec<Character> = a
        .all_elements()
        .filter(|v| is_character(a, v))
        .map(Character)
        .collect();
    out.sort();
    Ok(out)
}

/// Complete orthogonal family of primitive idempotents of a p-Boolean algebra.
///
/// Starting from `{1}`, each idempotent `e` is split along every basis element `b`
/// into the pieces `e (1 - (b - λ)^(p-1))`, `λ ∈ F_p`. Since `b^p = b` these are
/// orthogonal idempotents summing to `e`; after all basis elements every piece
/// `e` satisfies `b e ∈ F_p e` for all `b`, so `eA` is one-dimensional.
pub fn primitive_idempotents(a: &PBooleanAlgebra) -> Vec<Vec<u64>> {
    let p = a.prime().get();
    let one = a.one();
    let mut idems = vec![one.clone()];
    for i in 0..a.dim() {
        let b = a.basis(i);
        let mut next = Vec::new();
        for e in &idems {
            for lambda in 0..p {
                let shifted = a.sub(&b, &a.from_u64(lambda));
                let piece = a.mul(e, &a.sub(&one, &a.pow(&shifted, p - 1)));
                if !a.is_zero(&piece) {
                    next.push(piece);
                }
            }
        }
        idems = next;
    }
    idems.sort();
    idems
}

fn character_of_idempotent(a: &FiniteFpAlgebra, e: &[u64]) -> Character {
    let pivot = e.iter().position(|c| *c != 0).expect("idempotent is nonzero");
    let inv = {
        let p = a.prime().get();
        (1..p).find(|k| k * e[pivot] % p == 1).expect("F_p is a field")
    };
    let e = e.to_vec();
    Character(
        (0..a.dim())
            .map(|i| a.mul(&a.basis(i), &e)[pivot] * inv % a.prime().get())
            .collect(),
    )
}

/// The Stone dual `Spec(A)`: all characters of a p-Boolean algebra, via primitive idempotents.
pub fn spec_chars(a: &PBooleanAlgebra) -> FiniteStoneDual {
    let mut points: Vec<Character> = primitive_idempotents(a)
        .iter()
        .map(|e| character_of_idempotent(a, e))
        .collect();
    points.sort();
    FiniteStoneDual { p: a.prime(), points }
}

/// `F_p^S` for a nonempty finite set `S` given by its labels.
pub fn stone_dual_of_set(labels: &[String], p: Prime) -> Result<PBooleanAlgebra> {
    if labels.is_empty() {
        return Err(Error::EmptySet);
    }
    PBooleanAlgebra::new(FiniteFpAlgebra::diagonal(p, labels.to_vec())?)
}

/// The evaluation map `A -> F_p^{Spec A}`, one row per character.
pub fn evaluation_map(a: &PBooleanAlgebra, dual: &FiniteStoneDual) -> AlgebraMap {
    AlgebraMap::new(FpMatrix {
        p: a.prime().get(),
        rows: dual.len(),
        cols: a.dim(),
        data: dual.points.iter().map(|c| c.0.clone()).collect(),
    })
}

/// Whether the evaluation map is a ring isomorphism onto the function algebra on the characters.
pub fn evaluation_is_iso(a: &PBooleanAlgebra) -> bool {
    let dual = spec_chars(a);
    if dual.len() != a.dim() {
        return false;
    }
    let labels: Vec<String> = (0..dual.len()).map(|i| format!("chi{i}")).collect();
    let Ok(target) = FiniteFpAlgebra::diagonal(a.prime(), labels) else {
        return false;
    };
    let ev = evaluation_map(a, &dual);
    ev.is_ring_hom(a, &target) && ev.is_injective() && ev.is_surjective()
}

/// For `F_p^S`, the index `s` such that `chi` is evaluation at `s`.
pub fn point_of_character(chi: &Character) -> Option<usize> {
    let ones: Vec<usize> = chi.0.iter().enumerate().filter(|(_, v)| **v == 1).map(|(i, _)| i).collect();
    let rest_zero = chi.0.iter().all(|v| *v <= 1);
    (ones.len() == 1 && rest_zero).then(|| ones[0])
}

/// Dualize a set map `f: T -> S` to `f^*: F_p^S -> F_p^T`, then dualize again and read
/// the result back through the evaluation bijections. Returns the recovered map `T -> S`.
pub fn double_dual_of_set_map(p: Prime, source_size: usize, target_size: usize, f: &[usize]) -> Result<Vec<usize>> {
    let fs = stone_dual_of_set(&(0..target_size).map(|i| format!("s{i}")).collect::<Vec<_>>(), p)?;
    let ft = stone_dual_of_set(&(0..source_size).map(|i| format!("t{i}")).collect::<Vec<_>>(), p)?;
    let pullback = AlgebraMap::pullback(p, target_size, f);
    if !pullback.is_ring_hom(&fs, &ft) {
        return Err(Error::Internal("pullback is not a ring map".into()));
    }
    let dual_t = spec_chars(&ft);
    let dual_s = spec_chars(&fs);
    dual_t
        .points
        .iter()
        .map(|chi| {
            let image = chi.precompose(p, &pullback);
            dual_s
                .index_of(&image)
                .and_then(|k| point_of_character(&dual_s.points[k]))
                .ok_or_else(|| Error::Internal("dual map left the character set".into()))
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| {
            // dual_t.points are sorted; reorder by the point each character evaluates at
            let mut out = vec![0; source_size];
            for (chi, s) in dual_t.points.iter().zip(v) {
                out[point_of_character(chi).expect("indicator character")] = s;
            }
            out
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::fp_algebra::examples::*;
    use crate::algebra::FiniteRing;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn p_boolean_examples() {
        assert!(is_p_boolean(&function_algebra(p(3), 3)));
        assert!(!is_p_boolean(&f4()));
        assert!(!is_p_boolean(&dual_numbers(p(2))));
        assert!(is_p_boolean(&f2_squared_idempotent_basis()));
    }

    #[test]
    fn p_boolean_matches_elementwise_definition() {
        for a in [f4(), dual_numbers(p(3)), f2_squared_idempotent_basis(), function_algebra(p(3), 2)] {
            let elementwise = a.elements().iter().all(|x| a.pow(x, a.prime().get()) == *x);
            assert_eq!(is_p_boolean(&a), elementwise);
        }
    }

    #[test]
    fn spec_examples() {
        let a = PBooleanAlgebra::new(function_algebra(p(5), 3)).unwrap();
        let d = spec_chars(&a);
        assert_eq!(d.points, vec![Character(vec![0, 0, 1]), Character(vec![0, 1, 0]), Character(vec![1, 0, 0])]);

        let f = PBooleanAlgebra::new(FiniteFpAlgebra::prime_field(p(3))).unwrap();
        assert_eq!(spec_chars(&f).points, vec![Character(vec![1])]);

        // basis {1, e}: χ(1) = 1 and χ(e) ∈ {0, 1}
        let b = PBooleanAlgebra::new(f2_squared_idempotent_basis()).unwrap();
        assert_eq!(spec_chars(&b).points, vec![Character(vec![1, 0]), Character(vec![1, 1])]);
    }

    #[test]
    fn not_p_boolean_rejected() {
        assert_eq!(PBooleanAlgebra::new(f4()), Err(Error::NotPBoolean));
    }

    #[test]
    fn idempotent_route_matches_exhaustive_search() {
        for q in [2, 3] {
            for n in 1..=4 {
                let a = PBooleanAlgebra::new(function_algebra(p(q), n)).unwrap();
                assert_eq!(spec_chars(&a).points, characters_exhaustive(&a).unwrap());
            }
        }
        let b = PBooleanAlgebra::new(f2_squared_idempotent_basis()).unwrap();
        assert_eq!(spec_chars(&b).points, characters_exhaustive(&b).unwrap());
    }

    #[test]
    fn duality_round_trip_on_sets() {
        for q in [2, 3] {
            for n in 1..=5 {
                let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
                let a = stone_dual_of_set(&labels, p(q)).unwrap();
                let d = spec_chars(&a);
                assert_eq!(d.len(), n);
                let mut pts: Vec<usize> = d.points.iter().map(|c| point_of_character(c).unwrap()).collect();
                pts.sort();
                assert_eq!(pts, (0..n).collect::<Vec<_>>());
            }
        }
        assert_eq!(stone_dual_of_set(&[], p(2)), Err(Error::EmptySet));
    }

    #[test]
    fn double_dual_recovers_maps() {
        for s in 1..=3usize {
            for t in 1..=3usize {
                for idx in 0..s.pow(t as u32) {
                    let f: Vec<usize> = (0..t).map(|i| idx / s.pow(i as u32) % s).collect();
                    assert_eq!(double_dual_of_set_map(p(2), t, s, &f).unwrap(), f);
                }
            }
        }
    }
}
