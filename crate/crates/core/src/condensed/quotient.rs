use petgraph::unionfind::UnionFind;
use serde::Serialize;

use super::presheaf::Presheaf;
use super::site::{FiniteSite, SiteMap, SiteObject};
use crate::error::{Error, Result};
use crate::profinite::{all_functions, quotient_presentation, EquivRelPresentation, ProMap, Quotient};

/// The condensed set presented by `S/R`, evaluated at one working level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientCondensedSet {
    pub presentation: EquivRelPresentation,
    pub level: usize,
    quotient: Quotient,
}

impl QuotientCondensedSet {
    pub fn new(presentation: EquivRelPresentation, level: usize) -> Result<Self> {
        let quotient = quotient_presentation(&presentation, level)?;
        Ok(QuotientCondensedSet {
            presentation,
            level,
            quotient,
        })
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// `S_n` as a site object.
    pub fn cover_object(&self) -> SiteObject {
        SiteObject::new("S", self.presentation.space.level_size(self.level))
    }

    /// The quotient map `S_n -> S_n/R_n` as a section over `S_n`.
    pub fn quotient_section(&self) -> Vec<usize> {
        self.quotient.map.clone()
    }
}

impl Presheaf for QuotientCondensedSet {
    type Section = Vec<usize>;

    fn sections(&self, obj: &SiteObject) -> Result<Vec<Vec<usize>>> {
        Ok(all_functions(obj.size, self.quotient.len()).collect())
    }

    fn restrict(&self, g: &SiteMap, s: &Vec<usize>) -> Result<Vec<usize>> {
        if s.len() != g.target.size {
            return Err(Error::InvalidPresheaf("section does not live on the target".into()));
        }
        Ok(g.map.iter().map(|x| s[*x]).collect())
    }
}

/// What can be condensified: a finite discrete set, or a quotient presentation.
#[derive(Debug, Clone)]
pub enum Condensable {
    Discrete(usize),
    Quotient(QuotientCondensedSet),
}

/// The value of the condensification at a site object of the given working level.
pub fn condensify(k: &Condensable, level: usize, obj: &SiteObject) -> Result<Vec<Vec<usize>>> {
    match k {
        Condensable::Discrete(size) => Ok(all_functions(obj.size, *size).collect()),
        Condensable::Quotient(q) => {
            if q.level != level {
                return Err(Error::ParameterMismatch(format!(
                    "quotient taken at level {} but the site works at level {level}",
                    q.level
                )));
            }
            q.sections(obj)
        }
    }
}

impl Condensable {
    /// Number of points of the finite set being condensified.
    pub fn size(&self) -> usize {
        match self {
            Condensable::Discrete(k) => *k,
            Condensable::Quotient(q) => q.quotient().len(),
        }
    }
}

impl Presheaf for Condensable {
    type Section = Vec<usize>;

    fn sections(&self, obj: &SiteObject) -> Result<Vec<Vec<usize>>> {
        Ok(all_functions(obj.size, self.size()).collect())
    }

    fn restrict(&self, g: &SiteMap, s: &Vec<usize>) -> Result<Vec<usize>> {
        if s.len() != g.target.size {
            return Err(Error::InvalidPresheaf("section does not live on the target".into()));
        }
        Ok(g.map.iter().map(|x| s[*x]).collect())
    }
}

/// Compares `Hom(T, S_n)` modulo the image of `Hom(T, R_n) ⇉ Hom(T, S_n)` with `Hom(T, S_n/R_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoequalizerCheck {
    pub object: String,
    pub maps_to_space: usize,
    pub maps_to_relation: usize,
    pub classes: usize,
    pub maps_to_quotient: usize,
    pub passed: bool,
    pub witness: Option<String>,
}

fn encode(f: &[usize], base: usize) -> usize {
    f.iter().fold(0, |acc, x| acc * base + x)
}

pub fn coequalizer_check(q: &QuotientCondensedSet, obj: &SiteObject) -> Result<CoequalizerCheck> {
    let n = q.level;
    let s = q.presentation.space.level_size(n);
    let rel = &q.presentation.relation[n];
    let homs: Vec<Vec<usize>> = all_functions(obj.size, s).collect();
    let mut uf: UnionFind<usize> = UnionFind::new(homs.len());
    let mut relation_maps = 0;
    for h in all_functions(obj.size, rel.len()) {
        relation_maps += 1;
        let a: Vec<usize> = h.iter().map(|i| rel[*i].0).collect();
        let b: Vec<usize> = h.iter().map(|i| rel[*i].1).collect();
        uf.union(encode(&a, s), encode(&b, s));
    }
    let qmap = &q.quotient().map;
    let targets = q.sections(obj)?;
    let mut image_of_class: Vec<Option<usize>> = vec![None; homs.len()];
    let mut hit: Vec<Option<usize>> = vec![None; targets.len()];
    let mut classes = 0;
    let mut witness = None;
    for (i, h) in homs.iter().enumerate() {
        let composite: Vec<usize> = h.iter().map(|x| qmap[*x]).collect();
        let c = encode(&composite, q.quotient().len());
        let root = uf.find(i);
        match image_of_class[root] {
            None => {
                classes += 1;
                image_of_class[root] = Some(c);
                if let Some(other) = hit[c] {
                    witness.get_or_insert(format!(
                        "maps {:?} and {:?} agree in the quotient but are not identified",
                        homs[other], h
                    ));
                }
                hit[c] = Some(i);
            }
            Some(prev) if prev != c => {
                witness.get_or_insert(format!("identified maps {:?} and {:?} differ in the quotient", homs[root], h));
            }
            Some(_) => {}
        }
    }
    if witness.is_none() {
        if let Some(missed) = hit.iter().position(Option::is_none) {
            witness = Some(format!("no map to the space lifts {:?}", targets[missed]));
        }
    }
    Ok(CoequalizerCheck {
        object: obj.name.clone(),
        maps_to_space: homs.len(),
        maps_to_relation: relation_maps,
        classes,
        maps_to_quotient: targets.len(),
        passed: witness.is_none(),
        witness,
    })
}

/// A generator `x ∈ X(T)` for which `Hom(-, T) -> X` is onto at every site object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QcReport {
    pub quasi_compact: bool,
    pub generator: Option<(String, String)>,
    pub witness: Option<String>,
}

/// Whether `Hom(-, T) -> X`, `g ↦ X(g)(s)`, is onto at every site object.
pub fn is_generator<X: Presheaf>(x: &X, site: &FiniteSite, t: &SiteObject, s: &X::Section) -> Result<bool> {
    for u in &site.objects {
        let vals = x.sections(u)?;
        let mut seen = vec![false; vals.len()];
        for g in site.maps(u, t) {
            let r = x.restrict(&g, s)?;
            let i = vals
                .iter()
                .position(|v| *v == r)
                .ok_or_else(|| Error::InvalidPresheaf("restriction leaves the value set".into()))?;
            seen[i] = true;
        }
        if seen.contains(&false) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn qc_check<X: Presheaf>(x: &X, site: &FiniteSite) -> Result<QcReport> {
    for t in &site.objects {
        for s in x.sections(t)? {
            if is_generator(x, site, t, &s)? {
                return Ok(QcReport {
                    quasi_compact: true,
                    generator: Some((t.name.clone(), format!("{s:?}"))),
                    witness: None,
                });
            }
        }
    }
    let values = site.objects.iter().map(|o| x.sections(o)).collect::<Result<Vec<_>>>()?;
    let witness = site
        .objects
        .iter()
        .zip(&values)
        .find_map(|(u, vals)| {
            let most = site.objects.iter().map(|t| t.size.pow(u.size as u32)).max().unwrap_or(0);
            (vals.len() > most).then(|| format!("X({}) has {} sections but every Hom({}, T) has at most {most}", u.name, vals.len(), u.name))
        })
        .unwrap_or_else(|| "no section of any site object generates".into());
    Ok(QcReport {
        quasi_compact: false,
        generator: None,
        witness: Some(witness),
    })
}

/// `{(a, b) : f(a) ~ g(b)}` at every level and whether transitions preserve it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QsReport {
    pub closed: bool,
    pub levels: Vec<Vec<(usize, usize)>>,
    /// `(level, a, b)`: a related pair whose image one level down is unrelated.
    pub witness: Option<(usize, usize, usize)>,
}

/// Both maps are made levelwise first; pairs index the reindexed sources.
pub fn qs_check_presented(k: &EquivRelPresentation, f: &ProMap, g: &ProMap) -> Result<QsReport> {
    if f.target != k.space || g.target != k.space {
        return Err(Error::ParameterMismatch("maps must land in the presented space".into()));
    }
    let (f, g) = (f.to_levelwise(), g.to_levelwise());
    let depth = k.space.depth();
    let mut levels = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let q = quotient_presentation(k, n)?;
        let pairs = (0..f.source.level_size(n))
            .flat_map(|a| (0..g.source.level_size(n)).map(move |b| (a, b)))
            .filter(|(a, b)| q.map[f.maps[n][*a]] == q.map[g.maps[n][*b]])
            .collect::<Vec<_>>();
        levels.push(pairs);
    }
    let mut witness = None;
    'outer: for n in 1..=depth {
        for (a, b) in &levels[n] {
            let down = (f.source.transition(n - 1)[*a], g.source.transition(n - 1)[*b]);
            if levels[n - 1].binary_search(&down).is_err() {
                witness = Some((n, *a, *b));
                break 'outer;
            }
        }
    }
    Ok(QsReport {
        closed: witness.is_none(),
        levels,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condensed::presheaf::{ConstantPresheaf, Representable};
    use crate::condensed::sheaf::sheaf_check_site;
    use crate::profinite::fixtures::{cantor, dyadic_interval, incompatible_relation, ntilde_from_cantor};
    use crate::profinite::{canonical_cantor, tower_fiber_product};

    fn dyadic(level: usize) -> QuotientCondensedSet {
        QuotientCondensedSet::new(dyadic_interval().presentation().unwrap(), level).unwrap()
    }

    #[test]
    fn point_and_diagonal() {
        let t = SiteObject::new("T", 3);
        assert_eq!(condensify(&Condensable::Discrete(1), 2, &t).unwrap().len(), 1);
        let s = canonical_cantor(2).unwrap();
        let diag = QuotientCondensedSet::new(EquivRelPresentation::diagonal(s), 2).unwrap();
        let rep = Representable::new(SiteObject::new("S", 4));
        assert_eq!(condensify(&Condensable::Quotient(diag.clone()), 2, &t).unwrap(), rep.sections(&t).unwrap());
        assert!(condensify(&Condensable::Quotient(diag), 1, &t).is_err());
    }

    #[test]
    fn dyadic_values_are_composites() {
        let q = dyadic(3);
        let obj = SiteObject::new("cantor3", cantor().level_size(3));
        let classes = q.quotient().len();
        assert_eq!(classes, 5);
        let values = condensify(&Condensable::Quotient(q.clone()), 3, &obj).unwrap();
        let mut from_values = vec![false; classes.pow(obj.size as u32)];
        for v in &values {
            from_values[encode(v, classes)] = true;
        }
        let mut composites = vec![false; from_values.len()];
        for h in all_functions(obj.size, 8) {
            let c: Vec<usize> = h.iter().map(|x| q.quotient().map[*x]).collect();
            composites[encode(&c, classes)] = true;
        }
        assert_eq!(values.len(), from_values.len());
        assert_eq!(from_values, composites);
    }

    #[test]
    fn condensified_quotients_are_sheaves() {
        let site = FiniteSite::standard();
        let (covers, failure) = sheaf_check_site(&dyadic(2), &site, 2).unwrap();
        assert!(covers > 0);
        assert!(failure.is_none());
    }

    #[test]
    fn dyadic_coequalizer_levels() {
        for level in 0..=3 {
            let q = dyadic(level);
            for obj in FiniteSite::standard().objects {
                let c = coequalizer_check(&q, &obj).unwrap();
                assert!(c.passed, "{c:?}");
                assert_eq!(c.classes, c.maps_to_quotient);
            }
        }
    }

    #[test]
    fn coequalizer_detects_missing_identifications() {
        let mut q = dyadic(2);
        // compute against a coarser quotient than the relation generates
        q.quotient = Quotient {
            classes: vec![vec![0, 1, 2, 3]],
            map: vec![0; 4],
        };
        let c = coequalizer_check(&q, &SiteObject::new("pt", 1)).unwrap();
        assert!(!c.passed && c.witness.is_some());
    }

    #[test]
    fn qc_examples() {
        let mut site = FiniteSite::standard();
        let rep = Representable::new(site.object("ntilde").unwrap().clone());
        let r = qc_check(&rep, &site).unwrap();
        assert!(r.quasi_compact);
        assert_eq!(r.generator.unwrap().0, "ntilde");

        let q = dyadic(2);
        site.objects.push(q.cover_object());
        assert!(qc_check(&q, &site).unwrap().quasi_compact);
        assert!(is_generator(&q, &site, &q.cover_object(), &q.quotient_section()).unwrap());
        // a section that misses a class generates nothing
        assert!(!is_generator(&q, &site, &q.cover_object(), &vec![0, 0, 1, 1]).unwrap());

        let site = FiniteSite::standard();
        let big = ConstantPresheaf { values: 4 };
        let r = qc_check(&big, &site).unwrap();
        assert!(!r.quasi_compact);
        assert!(r.witness.unwrap().contains("X(pt) has 4 sections"));
    }

    #[test]
    fn qs_with_diagonal_is_fiber_product() {
        let s = canonical_cantor(3).unwrap();
        let f = ProMap::shift(&s, 0).unwrap();
        let g = ProMap::identity(&s);
        let r = qs_check_presented(&EquivRelPresentation::diagonal(s), &f, &g).unwrap();
        let fp = tower_fiber_product(&f, &g).unwrap();
        assert!(r.closed);
        assert_eq!(r.levels, fp.pairs);
    }

    #[test]
    fn qs_against_brute_force_pairs() {
        let s = cantor();
        let id = ProMap::identity(&s);
        for fixture in [ntilde_from_cantor(), dyadic_interval()] {
            let pres = fixture.presentation().unwrap();
            let r = qs_check_presented(&pres, &id, &id).unwrap();
            for n in 0..=s.depth() {
                let brute: Vec<(usize, usize)> = (0..s.level_size(n))
                    .flat_map(|a| (0..s.level_size(n)).map(move |b| (a, b)))
                    .filter(|(a, b)| pres.related(n, *a, *b))
                    .collect();
                assert_eq!(r.levels[n], brute);
            }
            let compatible = pres.relation_tower().is_ok();
            assert_eq!(r.closed, compatible, "{}", fixture.name);
        }
    }

    #[test]
    fn qs_incompatible_fixture_has_witness() {
        let fixture = incompatible_relation();
        let pres = fixture.presentation().unwrap();
        let id = ProMap::identity(&pres.space);
        let r = qs_check_presented(&pres, &id, &id).unwrap();
        assert!(!r.closed);
        let (n, a, b) = r.witness.unwrap();
        assert!(pres.related(n, a, b));
        let t = pres.space.transition(n - 1);
        assert!(!pres.related(n - 1, t[a], t[b]));
    }
}
