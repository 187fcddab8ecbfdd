use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profinite::{all_functions, canonical_ntilde, Tower};

/// A finite set standing for one level of a tower in the site.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SiteObject {
    pub name: String,
    pub size: usize,
}

impl SiteObject {
    pub fn new(name: impl Into<String>, size: usize) -> Self {
        SiteObject { name: name.into(), size }
    }

    /// Level `n` of a tower.
    pub fn from_tower(name: impl Into<String>, t: &Tower, n: usize) -> Result<Self> {
        t.check_level(n)?;
        Ok(SiteObject::new(name, t.level_size(n)))
    }
}

/// A morphism of site objects: a function `source -> target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SiteMap {
    pub source: SiteObject,
    pub target: SiteObject,
    pub map: Vec<usize>,
}

impl SiteMap {
    pub fn new(source: SiteObject, target: SiteObject, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.size || map.iter().any(|y| *y >= target.size) {
            return Err(Error::InvalidSite(format!("map {} -> {} has the wrong shape", source.name, target.name)));
        }
        Ok(SiteMap { source, target, map })
    }

    pub fn identity(obj: &SiteObject) -> Self {
        SiteMap {
            source: obj.clone(),
            target: obj.clone(),
            map: (0..obj.size).collect(),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SiteMap) -> Result<SiteMap> {
        if first.target != self.source {
            return Err(Error::InvalidSite("composing maps with mismatched objects".into()));
        }
        Ok(SiteMap {
            source: first.source.clone(),
            target: self.target.clone(),
            map: first.map.iter().map(|x| self.map[*x]).collect(),
        })
    }
}

/// A finite family of maps into one object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub target: SiteObject,
    pub members: Vec<SiteMap>,
}

impl Cover {
    pub fn new(target: SiteObject, members: Vec<SiteMap>) -> Result<Self> {
        if members.iter().any(|m| m.target != target) {
            return Err(Error::InvalidSite("cover member with a different target".into()));
        }
        Ok(Cover { target, members })
    }

    pub fn jointly_surjective(&self) -> bool {
        (0..self.target.size).all(|t| self.members.iter().any(|m| m.map.contains(&t)))
    }
}

/// `A ×_T B` for two maps into `T`, with its projections; pairs in lexicographic order.
#[derive(Debug, Clone)]
pub struct SitePullback {
    pub object: SiteObject,
    pub first: SiteMap,
    pub second: SiteMap,
}

pub fn site_fiber_product(f: &SiteMap, g: &SiteMap) -> Result<SitePullback> {
    if f.target != g.target {
        return Err(Error::InvalidSite("fiber product over different objects".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..f.source.size)
        .flat_map(|a| (0..g.source.size).map(move |b| (a, b)))
        .filter(|(a, b)| f.map[*a] == g.map[*b])
        .collect();
    let object = SiteObject::new(
        format!("{}{:?}*[{}]{}{:?}", f.source.name, f.map, f.target.name, g.source.name, g.map),
        pairs.len(),
    );
    Ok(SitePullback {
        first: SiteMap::new(object.clone(), f.source.clone(), pairs.iter().map(|p| p.0).collect())?,
        second: SiteMap::new(object.clone(), g.source.clone(), pairs.iter().map(|p| p.1).collect())?,
        object,
    })
}

/// Finite sets drawn from tower levels at a fixed working level. Morphisms are all functions;
/// fiber products are adjoined on demand by [`site_fiber_product`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSite {
    pub level: usize,
    pub objects: Vec<SiteObject>,
    #[serde(default)]
    pub covers: Vec<Cover>,
}

impl FiniteSite {
    /// The point, a two-point set and `Ñ` at level 2 (`{1, 2, ∞}`).
    pub fn standard() -> Self {
        let level = 2;
        let nt = canonical_ntilde(level).expect("depth is positive");
        FiniteSite {
            level,
            objects: vec![
                SiteObject::from_tower("pt", &Tower::point(level), level).expect("level exists"),
                SiteObject::from_tower("two", &Tower::constant(vec!["a".into(), "b".into()], level), level)
                    .expect("level exists"),
                SiteObject::from_tower("ntilde", &nt, level).expect("level exists"),
            ],
            covers: Vec::new(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let site: FiniteSite = serde_json::from_str(s)?;
        for c in &site.covers {
            Cover::new(c.target.clone(), c.members.clone())?;
            for m in &c.members {
                SiteMap::new(m.source.clone(), m.target.clone(), m.map.clone())?;
            }
        }
        Ok(site)
    }

    pub fn object(&self, name: &str) -> Result<&SiteObject> {
        self.objects
            .iter()
            .find(|o| o.name == name)
            .ok_or_else(|| Error::MissingObject(name.to_string()))
    }

    pub fn maps(&self, source: &SiteObject, target: &SiteObject) -> Vec<SiteMap> {
        all_functions(source.size, target.size)
            .map(|map| SiteMap {
                source: source.clone(),
                target: target.clone(),
                map,
            })
            .collect()
    }

    /// Every jointly surjective family of `1..=max_members` maps from site objects into
    /// `target`, up to reordering of members.
    pub fn covers_of(&self, target: &SiteObject, max_members: usize) -> Vec<Cover> {
        let maps: Vec<SiteMap> = self.objects.iter().flat_map(|o| self.maps(o, target)).collect();
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..maps.len()).rev().map(|i| vec![i]).collect();
        while let Some(family) = stack.pop() {
            let cover = Cover {
                target: target.clone(),
                members: family.iter().map(|i| maps[*i].clone()).collect(),
            };
            if cover.jointly_surjective() {
                out.push(cover);
            }
            if family.len() < max_members {
                let last = *family.last().expect("nonempty");
                for j in (last..maps.len()).rev() {
                    let mut next = family.clone();
                    next.push(j);
                    stack.push(next);
                }
            }
        }
        out
    }

    /// Covers of every object, families of at most `max_members` maps.
    pub fn all_covers(&self, max_members: usize) -> Vec<Cover> {
        self.objects.iter().flat_map(|o| self.covers_of(o, max_members)).collect()
    }
}
