use std::collections::HashMap;

use super::ring::FiniteRing;
use crate::error::{Error, Result};

/// Largest number of generator assignments [`enumerate_ring_homs`] will try.
pub const HOM_ENUMERATION_LIMIT: u64 = 1 << 20;

/// A map between finite rings, as the images of `source.elements()` in order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteHom<E> {
    pub images: Vec<E>,
}

/// Index of every element of a finite ring.
pub struct ElementIndex<R: FiniteRing> {
    pub elements: Vec<R::Elem>,
    index: HashMap<R::Elem, usize>,
}

impl<R: FiniteRing> ElementIndex<R> {
    pub fn new(ring: &R) -> Self {
        let elements = ring.elements();
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        ElementIndex { elements, index }
    }

    pub fn get(&self, e: &R::Elem) -> usize {
        self.index[e]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn additive_order<R: FiniteRing>(ring: &R, x: &R::Elem) -> usize {
    let mut acc = x.clone();
    let mut k = 1;
    while !ring.is_zero(&acc) {
        acc = ring.add(&acc, x);
        k += 1;
    }
    k
}

/// A greedy generating set of the additive group, in element order.
pub fn additive_generators<R: FiniteRing>(ring: &R) -> Vec<R::Elem> {
    let els = ring.elements();
    let mut gens: Vec<R::Elem> = Vec::new();
    let mut span: std::collections::HashSet<R::Elem> = [ring.zero()].into();
    for e in &els {
        if span.contains(e) {
            continue;
        }
        gens.push(e.clone());
        // close the span under adding the new generator
        let mut frontier: Vec<R::Elem> = span.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            let y = ring.add(&x, e);
            if span.insert(y.clone()) {
                frontier.push(y);
            }
        }
        if span.len() == els.len() {
            break;
        }
    }
    gens
}

/// Extend generator images additively; `None` if the assignment is not a group map.
fn extend<A: FiniteRing, B: FiniteRing>(
    a: &A,
    b: &B,
    idx: &ElementIndex<A>,
    gens: &[(usize, A::Elem)],
    images: &[B::Elem],
) -> Option<Vec<B::Elem>> {
    let mut out: Vec<Option<B::Elem>> = vec![None; idx.len()];
    let zero = idx.get(&a.zero());
    out[zero] = Some(b.zero());
    let mut stack = vec![zero];
    while let Some(i) = stack.pop() {
        let y = out[i].clone().expect("visited");
        for ((_, g), img) in gens.iter().zip(images) {
            let j = idx.get(&a.add(&idx.elements[i], g));
            let z = b.add(&y, img);
            match &out[j] {
                None => {
                    out[j] = Some(z);
                    stack.push(j);
                }
                Some(w) if *w != z => return None,
                Some(_) => {}
            }
        }
    }
    out.into_iter().collect()
}

/// Every unital ring map `a -> b`, by assigning images to additive generators, extending
/// additively, and filtering by multiplicativity on generator pairs and unitality.
pub fn enumerate_ring_homs<A: FiniteRing, B: FiniteRing>(a: &A, b: &B) -> Result<Vec<FiniteHom<B::Elem>>> {
    let idx = ElementIndex::new(a);
    let gens: Vec<(usize, A::Elem)> = additive_generators(a).into_iter().map(|g| (additive_order(a, &g), g)).collect();
    let targets = b.elements();
    let candidates: Vec<Vec<B::Elem>> = gens
        .iter()
        .map(|(ord, _)| targets.iter().filter(|y| ord % additive_order(b, y) == 0).cloned().collect())
        .collect();
    let total = candidates
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .filter(|t| *t <= HOM_ENUMERATION_LIMIT)
        .ok_or_else(|| Error::TooLarge("ring map candidates".into()))?;
    let one = idx.get(&a.one());
    let mut out = Vec::new();
    for mut k in 0..total {
        let images: Vec<B::Elem> = candidates
            .iter()
            .map(|c| {
                let y = c[(k % c.len() as u64) as usize].clone();
                k /= c.len() as u64;
                y
            })
            .collect();
        let Some(full) = extend(a, b, &idx, &gens, &images) else {
            continue;
        };
        if full[one] != b.one() {
            continue;
        }
        let multiplicative = gens.iter().all(|(_, g)| {
            gens.iter().all(|(_, h)| {
                full[idx.get(&a.mul(g, h))] == b.mul(&full[idx.get(g)], &full[idx.get(h)])
            })
        });
        if multiplicative {
            out.push(FiniteHom { images: full });
        }
    }
    Ok(out)
}
