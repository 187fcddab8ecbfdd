use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use super::site::{site_fiber_product, Cover, SiteMap, SiteObject};
use crate::error::{Error, Result};
use crate::profinite::all_functions;

/// A set-valued contravariant functor on finite sets, evaluated on demand.
pub trait Presheaf {
    type Section: Clone + Eq + Hash + Debug;

    /// `X(T)`, in a fixed order.
    fn sections(&self, obj: &SiteObject) -> Result<Vec<Self::Section>>;

    /// `X(g)(s)` for `g: A -> B` and `s ∈ X(B)`.
    fn restrict(&self, g: &SiteMap, s: &Self::Section) -> Result<Self::Section>;
}

/// `Hom(-, K)` for a finite set `K`; sections are function tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representable {
    pub object: SiteObject,
}

impl Representable {
    pub fn new(object: SiteObject) -> Self {
        Representable { object }
    }
}

impl Presheaf for Representable {
    type Section = Vec<usize>;

    fn sections(&self, obj: &SiteObject) -> Result<Vec<Vec<usize>>> {
        Ok(all_functions(obj.size, self.object.size).collect())
    }

    fn restrict(&self, g: &SiteMap, s: &Vec<usize>) -> Result<Vec<usize>> {
        if s.len() != g.target.size {
            return Err(Error::InvalidPresheaf("section does not live on the target".into()));
        }
        Ok(g.map.iter().map(|x| s[*x]).collect())
    }
}

/// The same set on every object with identity restrictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantPresheaf {
    pub values: usize,
}

impl Presheaf for ConstantPresheaf {
    type Section = usize;

    fn sections(&self, _obj: &SiteObject) -> Result<Vec<usize>> {
        Ok((0..self.values).collect())
    }

    fn restrict(&self, _g: &SiteMap, s: &usize) -> Result<usize> {
        Ok(*s)
    }
}

/// One restriction map `X(target) -> X(source)` of a tabulated presheaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Restriction {
    pub map: SiteMap,
    /// `table[i]` is the index in `X(source)` of the restriction of section `i` of `X(target)`.
    pub table: Vec<usize>,
}

/// A presheaf given by explicit value sets on named objects and explicit restriction tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafApprox {
    pub values: BTreeMap<String, Vec<String>>,
    pub restrictions: Vec<Restriction>,
}

impl PresheafApprox {
    pub fn from_json(s: &str) -> Result<Self> {
        let x: PresheafApprox = serde_json::from_str(s)?;
        for r in &x.restrictions {
            let source = x.value(&r.map.source)?;
            let target = x.value(&r.map.target)?;
            if r.table.len() != target.len() || r.table.iter().any(|i| *i >= source.len()) {
                return Err(Error::InvalidPresheaf(format!(
                    "restriction along {} -> {} has the wrong shape",
                    r.map.source.name, r.map.target.name
                )));
            }
        }
        Ok(x)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presheaf tables serialize")
    }

    pub fn value(&self, obj: &SiteObject) -> Result<&[String]> {
        self.values
            .get(&obj.name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::MissingObject(obj.name.clone()))
    }

    /// Records `X` on `objects` and along `maps` (identities of every object are added).
    pub fn tabulate<X: Presheaf>(x: &X, objects: &[SiteObject], maps: &[SiteMap]) -> Result<Self> {
        let mut sections = BTreeMap::new();
        let mut values = BTreeMap::new();
        for o in objects {
            let s = x.sections(o)?;
            values.insert(o.name.clone(), s.iter().map(|v| format!("{v:?}")).collect());
            sections.insert(o.name.clone(), s);
        }
        let mut all_maps: Vec<SiteMap> = objects.iter().map(SiteMap::identity).collect();
        all_maps.extend(maps.iter().cloned());
        let mut restrictions = Vec::new();
        for g in all_maps {
            if restrictions.iter().any(|r: &Restriction| r.map == g) {
                continue;
            }
            let target = sections
                .get(&g.target.name)
                .ok_or_else(|| Error::MissingObject(g.target.name.clone()))?;
            let source = sections
                .get(&g.source.name)
                .ok_or_else(|| Error::MissingObject(g.source.name.clone()))?;
            let table = target
                .iter()
                .map(|s| {
                    let r = x.restrict(&g, s)?;
                    source
                        .iter()
                        .position(|t| *t == r)
                        .ok_or_else(|| Error::InvalidPresheaf("restriction leaves the value set".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            restrictions.push(Restriction { map: g, table });
        }
        Ok(PresheafApprox { values, restrictions })
    }

    /// Everything a sheaf check on `cover` touches: the objects of the cover, the pairwise
    /// fiber products and all maps between them.
    pub fn tabulate_for_cover<X: Presheaf>(x: &X, cover: &Cover) -> Result<Self> {
        let mut objects = vec![cover.target.clone()];
        let mut maps = cover.members.clone();
        for (i, a) in cover.members.iter().enumerate() {
            objects.push(a.source.clone());
            for b in &cover.members[i..] {
                let pb = site_fiber_product(a, b)?;
                objects.push(pb.object.clone());
                maps.push(pb.first);
                maps.push(pb.second);
            }
        }
        objects.sort();
        objects.dedup();
        Self::tabulate(x, &objects, &maps)
    }

    /// The first violation of `X(id) = id` or `X(g ∘ f) = X(f) ∘ X(g)` among recorded maps.
    pub fn functoriality_failure(&self) -> Option<String> {
        for r in &self.restrictions {
            let is_id = r.map.source == r.map.target && r.map.map.iter().enumerate().all(|(i, y)| i == *y);
            if is_id && r.table.iter().enumerate().any(|(i, j)| i != *j) {
                return Some(format!("restriction along the identity of {} moves a section", r.map.source.name));
            }
        }
        for f in &self.restrictions {
            for g in &self.restrictions {
                let Ok(gf) = g.map.after(&f.map) else { continue };
                let Some(c) = self.restrictions.iter().find(|r| r.map == gf) else { continue };
                let composite: Vec<usize> = g.table.iter().map(|j| f.table[*j]).collect();
                if composite != c.table {
                    return Some(format!(
                        "restriction along {:?} ∘ {:?} differs from the composite of restrictions",
                        g.map.map, f.map.map
                    ));
                }
            }
        }
        None
    }
}

impl Presheaf for PresheafApprox {
    type Section = usize;

    fn sections(&self, obj: &SiteObject) -> Result<Vec<usize>> {
        Ok((0..self.value(obj)?.len()).collect())
    }

    fn restrict(&self, g: &SiteMap, s: &usize) -> Result<usize> {
        let r = self
            .restrictions
            .iter()
            .find(|r| r.map == *g)
            .ok_or_else(|| Error::MissingObject(format!("restriction along {:?}", g.map)))?;
        r.table
            .get(*s)
            .copied()
            .ok_or_else(|| Error::InvalidPresheaf("section index out of range".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(name: &str, size: usize) -> SiteObject {
        SiteObject::new(name, size)
    }

    #[test]
    fn representable_restriction_is_precomposition() {
        let k = Representable::new(obj("K", 3));
        let g = SiteMap::new(obj("A", 2), obj("B", 3), vec![2, 0]).unwrap();
        assert_eq!(k.restrict(&g, &vec![1, 2, 0]).unwrap(), [0, 1]);
        assert_eq!(k.sections(&obj("A", 2)).unwrap().len(), 9);
        assert_eq!(k.sections(&obj("E", 0)).unwrap().len(), 1);
    }

    #[test]
    fn tabulated_representable_is_functorial() {
        let (a, b, c) = (obj("A", 2), obj("B", 2), obj("C", 1));
        let f = SiteMap::new(a.clone(), b.clone(), vec![1, 0]).unwrap();
        let g = SiteMap::new(b.clone(), c.clone(), vec![0, 0]).unwrap();
        let gf = g.after(&f).unwrap();
        let x = Representable::new(obj("K", 2));
        let table = PresheafApprox::tabulate(&x, &[a, b, c], &[f, g, gf]).unwrap();
        assert_eq!(table.functoriality_failure(), None);
        let round = PresheafApprox::from_json(&table.to_json()).unwrap();
        assert_eq!(round, table);

        let mut broken = table.clone();
        let r = broken.restrictions.iter_mut().find(|r| r.map.source.name == "A" && r.map.target.name == "B").unwrap();
        r.table.swap(0, 1);
        assert!(broken.functoriality_failure().is_some());
    }

    #[test]
    fn missing_data_is_reported() {
        let table = PresheafApprox::tabulate(&ConstantPresheaf { values: 2 }, &[obj("A", 1)], &[]).unwrap();
        assert!(matches!(table.sections(&obj("B", 1)), Err(Error::MissingObject(_))));
        let g = SiteMap::new(obj("A", 1), obj("A", 1), vec![0]).unwrap();
        assert_eq!(table.restrict(&g, &1).unwrap(), 1);
        let bad = r#"{"values":{"A":["x"]},"restrictions":[{"map":{"source":{"name":"A","size":1},"target":{"name":"A","size":1},"map":[0]},"table":[3]}]}"#;
        assert!(PresheafApprox::from_json(bad).is_err());
    }
}
