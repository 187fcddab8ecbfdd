use std::collections::HashMap;

use serde::Serialize;

use super::presheaf::Presheaf;
use super::site::{site_fiber_product, Cover, FiniteSite, SiteMap};
use crate::error::Result;

/// Outcome of testing `X(T) -> Π X(T_i) ⇉ Π X(T_i ×_T T_j)` for an equalizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SheafCheck {
    pub passed: bool,
    pub sections: usize,
    pub matching_families: usize,
    pub witness: Option<String>,
}

struct Overlap {
    i: usize,
    j: usize,
    left: SiteMap,
    right: SiteMap,
}

pub fn sheaf_check<X: Presheaf>(x: &X, cover: &Cover) -> Result<SheafCheck> {
    let k = cover.members.len();
    let mut overlaps = Vec::new();
    for i in 0..k {
        for j in i..k {
            let pb = site_fiber_product(&cover.members[i], &cover.members[j])?;
            overlaps.push(Overlap {
                i,
                j,
                left: pb.first,
                right: pb.second,
            });
        }
    }

    let member_sections = cover
        .members
        .iter()
        .map(|m| x.sections(&m.source))
        .collect::<Result<Vec<_>>>()?;
    // overlap_values[o][side][s]: restriction of section s of the member on that side
    let mut overlap_values = Vec::with_capacity(overlaps.len());
    for o in &overlaps {
        let left = member_sections[o.i]
            .iter()
            .map(|s| x.restrict(&o.left, s))
            .collect::<Result<Vec<_>>>()?;
        let right = member_sections[o.j]
            .iter()
            .map(|s| x.restrict(&o.right, s))
            .collect::<Result<Vec<_>>>()?;
        overlap_values.push([left, right]);
    }

    let global = x.sections(&cover.target)?;
    let mut image: HashMap<Vec<usize>, usize> = HashMap::new();
    for (gi, s) in global.iter().enumerate() {
        let family = cover
            .members
            .iter()
            .zip(&member_sections)
            .map(|(m, secs)| {
                let r = x.restrict(m, s)?;
                Ok(secs.iter().position(|t| *t == r).expect("restriction lands in the value set"))
            })
            .collect::<Result<Vec<usize>>>()?;
        if let Some(prev) = image.insert(family.clone(), gi) {
            return Ok(SheafCheck {
                passed: false,
                sections: global.len(),
                matching_families: 0,
                witness: Some(format!(
                    "sections {:?} and {:?} of {} have the same restrictions {:?}",
                    global[prev], s, cover.target.name, family
                )),
            });
        }
    }

    if k == 0 {
        let passed = global.len() == 1;
        return Ok(SheafCheck {
            passed,
            sections: global.len(),
            matching_families: 1,
            witness: (!passed).then(|| format!("{} has {} sections over the empty family", cover.target.name, global.len())),
        });
    }

    // backtracking over families, pruning on every overlap whose members are both chosen
    let mut count = 0usize;
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut next = vec![0usize; k + 1];
    loop {
        let depth = chosen.len();
        if depth == k {
            count += 1;
            if !image.contains_key(&chosen) {
                let family: Vec<_> = chosen.iter().enumerate().map(|(i, c)| &member_sections[i][*c]).collect();
                return Ok(SheafCheck {
                    passed: false,
                    sections: global.len(),
                    matching_families: count,
                    witness: Some(format!("matching family {family:?} does not glue to a section of {}", cover.target.name)),
                });
            }
            chosen.pop();
            continue;
        }
        let candidate = next[depth];
        if candidate >= member_sections[depth].len() {
            if depth == 0 {
                break;
            }
            chosen.pop();
            continue;
        }
        next[depth] += 1;
        let agrees = overlaps.iter().zip(&overlap_values).all(|(o, [l, r])| {
            if o.j != depth {
                return true;
            }
            let left = if o.i == depth { candidate } else { chosen[o.i] };
            l[left] == r[candidate]
        });
        if agrees {
            chosen.push(candidate);
            next[depth + 1] = 0;
        }
    }

    let passed = count == image.len();
    Ok(SheafCheck {
        passed,
        sections: global.len(),
        matching_families: count,
        witness: None,
    })
}

/// Runs [`sheaf_check`] on the site's listed covers, or on every cover with at most
/// `max_members` members when none are listed; returns the number of covers checked and
/// the first failure.
pub fn sheaf_check_site<X: Presheaf>(
    x: &X,
    site: &FiniteSite,
    max_members: usize,
) -> Result<(usize, Option<(Cover, SheafCheck)>)> {
    let covers = if site.covers.is_empty() {
        site.all_covers(max_members)
    } else {
        site.covers.clone()
    };
    for c in &covers {
        let r = sheaf_check(x, c)?;
        if !r.passed {
            return Ok((covers.len(), Some((c.clone(), r))));
        }
    }
    Ok((covers.len(), None))
}
