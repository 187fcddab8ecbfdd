use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{CheckRecord, Mutation, Outcome, Recorder, RunConfig};
use crate::algebra::fp_algebra::examples::{dual_numbers, f2_squared_idempotent_basis, f4, function_algebra};
use crate::algebra::ring::{all_triples, first_ring_axiom_failure};
use crate::algebra::{CommRing, FiniteFpAlgebra, FpMatrix, FiniteRing, FunctionRing, Prime, ResidueRing};
use crate::condensed::{
    betti_delta_check, betti_naturality, coequalizer_check, is_generator, qc_check, sheaf_check, sheaf_check_site,
    Condensable, Cover, FiniteSite, Presheaf, PresheafApprox, QuotientCondensedSet, Representable, SiteMap, SiteObject,
};
use crate::duality::{
    delta_coinvariants_adjunction, delta_invariants_adjunction, dualize_twice, enumerate_level_families,
    ff_check, p_complete_ff_check, phi_functor, round_trip_is_identity, site_translate, stone_characterization_check,
    FunctionRingMap, LevelCover, StoneDeltaRingApprox, WittCarrier, WittContIso,
};
use crate::error::{Error, Result};
use crate::profinite::fixtures::{dyadic_interval, ntilde_from_cantor};
use crate::profinite::{
    all_functions, canonical_cantor, canonical_ntilde, check_sequential_surjectivity, quotient_presentation,
    quotient_tower, tower_fiber_product, tower_product, universal_property_failure, ProMap, Tower,
};
use crate::stone::pboolean::{characters_exhaustive, point_of_character, FiniteStoneDual, PBooleanAlgebra};
use crate::stone::{
    coinvariants_adjunction, coperfection_adjunction, double_dual_of_set_map, evaluation_is_iso, invariants_adjunction,
    is_p_boolean, is_perfect, perfection_adjunction, spec_chars, stone_dual_of_set, AlgebraMap, HomBijection,
};
use crate::witt::delta::all_pairs;
use crate::witt::iso::verify_fp_iso;
use crate::witt::{check_delta_axioms, verify_ghost_identities, witt_polys, DeltaAxiomReport, DeltaStructure, WittRing};

pub(super) fn run_criterion(criterion: u8, cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut rec = Recorder::new(cfg);
    match criterion {
        1 => witt_kernel(&mut rec),
        2 => delta_axioms(&mut rec),
        3 => finite_stone(&mut rec),
        4 => delta_stone(&mut rec),
        5 => witt_cont(&mut rec, true, true),
        6 => flatness(&mut rec),
        7 => site_comparison(&mut rec),
        8 => characterization(&mut rec),
        9 => adjunctions(&mut rec),
        10 => profinite(&mut rec, true),
        11 => condensed(&mut rec),
        12 => determinism(&mut rec),
        _ => unreachable!("criteria are validated"),
    }
    rec.finish()
}

fn prime(p: u64) -> Prime {
    Prime::new(p).expect("literal primes")
}

fn axiom_outcome(report: &DeltaAxiomReport) -> Outcome {
    let witness = report.failures.first().map(|f| format!("{}: {}", f.axiom, f.witness));
    Outcome::new(report.passed, witness)
}

fn bijection_outcome(h: &HomBijection) -> Outcome {
    Outcome::new(
        h.bijective,
        (!h.bijective).then(|| format!("{} hom-sets {} vs {}: {:?}", h.adjunction, h.left_size, h.right_size, h.witness)),
    )
}

fn witt_kernel(rec: &mut Recorder) {
    for q in [2, 3] {
        rec.record("witt.ring-axioms", format!("W2(F{q})"), || {
            let w = WittRing::new(FiniteFpAlgebra::prime_field(prime(q)), prime(q), 2)?;
            let els = w.elements();
            Ok(Outcome::unless(first_ring_axiom_failure(&w, all_triples(&els))))
        });
    }
    let seed = rec.cfg().seed;
    rec.record("witt.ring-axioms", format!("W3(F4)/samples=500/seed={seed}"), || {
        let w = WittRing::new(f4(), prime(2), 3)?;
        let els = w.elements();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let triples: Vec<_> = (0..500)
            .map(|_| {
                let mut pick = || els.choose(&mut rng).expect("nonempty").clone();
                (pick(), pick(), pick())
            })
            .collect();
        Ok(Outcome::unless(first_ring_axiom_failure(&w, triples)))
    });

    fn ghost_hom<R: FiniteRing>(w: &WittRing<R>) -> Option<String> {
        let base = w.base();
        let els = w.elements();
        let ones = vec![base.one(); w.len()];
        if w.ghost(&w.one()) != ones {
            return Some("ghost(1) is not (1, ..., 1)".into());
        }
        let ghosts: Vec<Vec<R::Elem>> = els.iter().map(|a| w.ghost(a)).collect();
        for (i, a) in els.iter().enumerate() {
            for (j, b) in els.iter().enumerate() {
                let sum: Vec<R::Elem> = ghosts[i].iter().zip(&ghosts[j]).map(|(x, y)| base.add(x, y)).collect();
                let prod: Vec<R::Elem> = ghosts[i].iter().zip(&ghosts[j]).map(|(x, y)| base.mul(x, y)).collect();
                if w.ghost(&w.add(a, b)) != sum {
                    return Some(format!("ghost(a + b) differs at a={a:?}, b={b:?}"));
                }
                if w.ghost(&w.mul(a, b)) != prod {
                    return Some(format!("ghost(a b) differs at a={a:?}, b={b:?}"));
                }
            }
        }
        None
    }
    for q in [2, 3] {
        rec.record("witt.ghost-hom", format!("W2(Z/{q}^2)"), || {
            let w = WittRing::new(ResidueRing::new(prime(q), 2)?, prime(q), 2)?;
            Ok(Outcome::unless(ghost_hom(&w)))
        });
    }
    rec.record("witt.ghost-hom", "W3(F2)", || {
        let w = WittRing::new(FiniteFpAlgebra::prime_field(prime(2)), prime(2), 3)?;
        Ok(Outcome::unless(ghost_hom(&w)))
    });

    for q in [2, 3, 5] {
        for n in 1..=4 {
            rec.record("witt.ghost-identities", format!("p={q}/n={n}"), || {
                let set = witt_polys(prime(q), n)?;
                Ok(Outcome::unless(verify_ghost_identities(&set).err()))
            });
        }
    }
    for q in [2, 3] {
        for n in 1..=4 {
            rec.record("witt.fp-iso", format!("p={q}/n={n}"), || {
                let c = verify_fp_iso(prime(q), n)?;
                Ok(Outcome::new(c.passed(), (!c.passed()).then(|| format!("{c:?}"))))
            });
        }
    }
}

fn w3_f4_delta() -> Result<DeltaStructure<WittRing<FiniteFpAlgebra>>> {
    let w = WittRing::new(f4(), prime(2), 3)?;
    let lift = w.clone();
    DeltaStructure::new(w, move |x| lift.witt_frobenius(x).expect("F_4 is perfect"))
}

fn delta_axioms(rec: &mut Recorder) {
    let mutate = rec.cfg().mutation == Some(Mutation::Delta);
    for q in [2, 3] {
        for m in 2..=4 {
            rec.record("delta.axioms", format!("Z/{q}^{m}"), || {
                let r = ResidueRing::new(prime(q), m)?;
                let mut d = DeltaStructure::identity_lift(r)?;
                if mutate && (q, m) == (2, 4) {
                    d = d.corrupted();
                }
                Ok(axiom_outcome(&check_delta_axioms(&d, all_pairs(&r.elements()))))
            });
        }
    }
    rec.record("delta.axioms", "W3(F4)", || {
        let d = w3_f4_delta()?;
        let els = d.carrier().elements();
        Ok(axiom_outcome(&check_delta_axioms(&d, all_pairs(&els))))
    });

    rec.record("delta.mutation", "Z/2^4", || {
        let r = ResidueRing::new(prime(2), 4)?;
        let d = DeltaStructure::identity_lift(r)?.corrupted();
        let rep = check_delta_axioms(&d, all_pairs(&r.elements()));
        Ok(Outcome::new(!rep.passed, Some(format!("{:?}", rep.failures.iter().map(|f| f.axiom).collect::<Vec<_>>()))))
    });
    rec.record("delta.mutation", "W3(F4)", || {
        let d = w3_f4_delta()?.corrupted();
        let els = d.carrier().elements();
        let rep = check_delta_axioms(&d, all_pairs(&els));
        Ok(Outcome::new(!rep.passed, Some(format!("{:?}", rep.failures.iter().map(|f| f.axiom).collect::<Vec<_>>()))))
    });
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

fn finite_stone(rec: &mut Recorder) {
    let p = rec.cfg().prime();
    let max = rec.cfg().max_level_size;
    for k in 1..=5 {
        rec.record("stone.round-trip", format!("|S|={k}"), || {
            let a = stone_dual_of_set(&labels(k), p)?;
            let mut pts = spec_chars(&a)
                .points
                .iter()
                .map(point_of_character)
                .collect::<Option<Vec<usize>>>()
                .ok_or_else(|| Error::Internal("a character is not an evaluation".into()))?;
            pts.sort_unstable();
            let ok = pts == (0..k).collect::<Vec<_>>();
            Ok(Outcome::new(ok, (!ok).then(|| format!("characters evaluate at {pts:?}"))))
        });
    }
    for s in 1..=max {
        for t in 1..=max {
            rec.record("stone.double-dual", format!("{s}->{t}"), || {
                for f in all_functions(s, t) {
                    let back = double_dual_of_set_map(p, s, t, &f)?;
                    if back != f {
                        return Ok(Outcome::unless(Some(format!("{f:?} comes back as {back:?}"))));
                    }
                }
                Ok(Outcome::unless(None))
            });
        }
    }

    let mut corpus: Vec<(String, FiniteFpAlgebra)> = (1..=5).map(|k| (format!("F{}^{k}", p.get()), function_algebra(p, k))).collect();
    corpus.push((
        format!("F{0}^2 x F{0}^3", p.get()),
        function_algebra(p, 2).product(&function_algebra(p, 3)).expect("same prime"),
    ));
    if p.get() == 2 {
        corpus.push(("F2^2 in basis (1, e)".into(), f2_squared_idempotent_basis()));
        corpus.push(("F4".into(), f4()));
    }
    corpus.push((format!("F{}[e]/e^2", p.get()), dual_numbers(p)));
    for (name, a) in corpus {
        rec.record("stone.p-boolean-iso", name, || {
            let pb = is_p_boolean(&a);
            let iso = evaluation_iso_by_search(&a)?;
            let structural = PBooleanAlgebra::new(a.clone()).map(|b| evaluation_is_iso(&b)).unwrap_or(false);
            let ok = pb == iso && structural == iso;
            Ok(Outcome::new(ok, (!ok).then(|| format!("p-Boolean: {pb}, evaluation iso: {iso}, via idempotents: {structural}"))))
        });
    }
}

/// Evaluation `A -> F_p^{Hom(A, F_p)}` is bijective, with characters found by exhaustive search.
fn evaluation_iso_by_search(a: &FiniteFpAlgebra) -> Result<bool> {
    let chars = characters_exhaustive(a)?;
    if chars.len() != a.dim() {
        return Ok(false);
    }
    let dual = FiniteStoneDual { p: a.prime(), points: chars };
    let ev = AlgebraMap::new(FpMatrix {
        p: a.prime().get(),
        rows: dual.len(),
        cols: a.dim(),
        data: dual.points.iter().map(|c| c.0.clone()).collect(),
    });
    Ok(ev.is_injective())
}

fn corpus_towers(depth: usize) -> Result<Vec<(String, Tower)>> {
    let nt = canonical_ntilde(depth)?;
    let c = canonical_cantor(depth)?;
    let mut out = vec![
        ("ntilde".to_string(), nt.clone()),
        ("cantor".to_string(), c.clone()),
        ("ntilde x cantor".to_string(), tower_product(&nt, &c)?),
    ];
    let from_cantor = ntilde_from_cantor().presentation()?;
    let (q, _) = quotient_tower(&from_cantor)?;
    out.push(("ntilde as a cantor quotient".to_string(), q.truncate(depth.min(q.depth()))?));
    let dyadic = dyadic_interval().presentation()?;
    for n in 0..=depth.min(dyadic.space.depth()) {
        let quotient = quotient_presentation(&dyadic, n)?;
        let labels = quotient.classes.iter().map(|c| format!("[{}]", dyadic.space.level(n)[c[0]])).collect();
        out.push((format!("dyadic interval level {n}"), Tower::constant(labels, 0)));
    }
    Ok(out)
}

fn delta_stone(rec: &mut Recorder) {
    let (p, depth, precision, max) = (rec.cfg().prime(), rec.cfg().depth, rec.cfg().precision, rec.cfg().max_level_size);
    let towers = match corpus_towers(depth) {
        Ok(t) => t,
        Err(e) => {
            rec.record("duality.roundtrip", "corpus", || Err(e));
            return;
        }
    };
    for (name, t) in &towers {
        for n in 0..=t.depth() {
            for m in 1..=precision {
                rec.record("duality.roundtrip", format!("{name}/level={n}/m={m}"), || {
                    let ok = round_trip_is_identity(t, n, p, m)?;
                    Ok(Outcome::new(ok, (!ok).then(|| "characters do not match the points".to_string())))
                });
            }
        }
        for n in 0..t.depth() {
            rec.record("duality.functoriality", format!("{name}/transition={n}"), || {
                let tr = t.transition(n);
                let back = dualize_twice(tr, t.level_size(n + 1), t.level_size(n), p, precision)?;
                Ok(Outcome::new(back == tr, (back != tr).then(|| format!("transition comes back as {back:?}"))))
            });
        }
    }
    let coeff = match ResidueRing::new(p, precision) {
        Ok(c) => c,
        Err(e) => {
            rec.record("duality.functoriality", "coefficients", || Err(e));
            return;
        }
    };
    for a in 1..=max {
        for b in 1..=max {
            rec.record("duality.functoriality", format!("double-dual {a}->{b}"), || {
                for f in all_functions(a, b) {
                    let back = dualize_twice(&f, a, b, p, precision)?;
                    if back != f {
                        return Ok(Outcome::unless(Some(format!("{f:?} comes back as {back:?}"))));
                    }
                }
                Ok(Outcome::unless(None))
            });
            for c in 1..=max {
                rec.record("duality.functoriality", format!("composition {a}->{b}->{c}"), || {
                    let (ra, rb, rc) = (FunctionRing::new(a, coeff)?, FunctionRing::new(b, coeff)?, FunctionRing::new(c, coeff)?);
                    for f in all_functions(a, b) {
                        let pf = FunctionRingMap::pullback(rb, ra, &f)?;
                        for g in all_functions(b, c) {
                            let gf: Vec<usize> = f.iter().map(|x| g[*x]).collect();
                            let direct = FunctionRingMap::pullback(rc, ra, &gf)?;
                            let pg = FunctionRingMap::pullback(rc, rb, &g)?;
                            let composite: Vec<Vec<u64>> = pg.images.iter().map(|e| pf.apply(e)).collect();
                            if composite != direct.images {
                                return Ok(Outcome::unless(Some(format!("pullback of {g:?} after {f:?} is not functorial"))));
                            }
                        }
                    }
                    Ok(Outcome::unless(None))
                });
            }
        }
    }
}

/// Records for criterion 5; the sampled part is also reused by the determinism check.
fn witt_cont(rec: &mut Recorder, exhaustive: bool, sampled: bool) {
    let p = rec.cfg().prime();
    if exhaustive {
        for s in 1..=2 {
            for m in 1..=2 {
                rec.record("duality.witt-cont-exhaustive", format!("|S|={s}/m={m}"), || {
                    let r = WittContIso::new(s, p, m)?.verify_exhaustive();
                    Ok(Outcome::new(r.passed(), (!r.passed()).then(|| format!("{r:?}"))))
                });
            }
        }
    }
    if sampled {
        let (seed, samples) = (rec.cfg().seed, rec.cfg().samples);
        rec.record("duality.witt-cont-sampled", format!("|S|=3/m=3/samples={samples}/seed={seed}"), || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = WittContIso::new(3, p, 3)?.verify_sampled(&mut rng, samples);
            Ok(Outcome::new(r.passed(), (!r.passed()).then(|| format!("{r:?}"))))
        });
    }
}

fn flatness(rec: &mut Recorder) {
    let (p, precision, max) = (rec.cfg().prime(), rec.cfg().precision, rec.cfg().max_level_size);
    for s in 1..=max {
        for t in 1..=max {
            rec.record("flatness.ff-correspondence", format!("|S|={s}/|T|={t}"), || {
                for g in all_functions(t, s) {
                    let w = ff_check(&AlgebraMap::pullback(p, s, &g), s, t)?;
                    if !w.criteria_agree() || w.dual != g {
                        return Ok(Outcome::unless(Some(format!("dual map {g:?}: {w:?}"))));
                    }
                }
                Ok(Outcome::unless(None))
            });
            rec.record("flatness.p-complete", format!("|S|={s}/|T|={t}/m={precision}"), || {
                let coeff = ResidueRing::new(p, precision)?;
                let (rs, rt) = (FunctionRing::new(s, coeff)?, FunctionRing::new(t, coeff)?);
                for g in all_functions(t, s) {
                    let f = FunctionRingMap::pullback(rs, rt, &g)?;
                    let lifted = p_complete_ff_check(&f)?.faithfully_flat();
                    let reduced = ff_check(&f.reduction(), s, t)?.faithfully_flat();
                    if lifted != reduced {
                        return Ok(Outcome::unless(Some(format!("dual map {g:?}: lifted ff {lifted}, reduction ff {reduced}"))));
                    }
                }
                Ok(Outcome::unless(None))
            });
        }
    }
}

/// Removes the last base point from every member image.
fn drop_last_point(cover: &LevelCover) -> LevelCover {
    let last = cover.base_size - 1;
    LevelCover {
        base_size: cover.base_size,
        members: cover
            .members
            .iter()
            .map(|m| m.iter().map(|x| if *x == last { 0 } else { *x }).collect())
            .collect(),
    }
}

fn site_comparison(rec: &mut Recorder) {
    let (p, max) = (rec.cfg().prime(), rec.cfg().max_level_size);
    let m = rec.cfg().precision.min(2);
    let mutate = rec.cfg().mutation == Some(Mutation::Cover);
    let all_families = enumerate_level_families(max, 3);
    for base in 1..=max {
        let families: Vec<&LevelCover> = all_families.iter().filter(|c| c.base_size == base).collect();
        for members in 1..=3 {
            let group: Vec<&LevelCover> = families.iter().copied().filter(|c| c.members.len() == members).collect();
            rec.record("site.translate", format!("|T|={base}/members={members}/families={}", group.len()), || {
                for cover in &group {
                    let covering = cover.jointly_surjective();
                    let translated = if mutate && covering && base > 1 { drop_last_point(cover) } else { (*cover).clone() };
                    let tr = site_translate(&translated, p, m)?;
                    if !tr.round_trip_ok(&translated) {
                        return Ok(Outcome::unless(Some(format!("{:?} comes back as {:?}", translated.members, tr.round_trip))));
                    }
                    if covering != tr.product_ff.faithfully_flat() {
                        return Ok(Outcome::unless(Some(format!(
                            "family {:?} covering {covering} but product ff {} (missed point {:?})",
                            translated.members,
                            tr.product_ff.faithfully_flat(),
                            tr.product_ff.missed_point
                        ))));
                    }
                }
                Ok(Outcome::unless(None))
            });
            if base < 2 {
                continue;
            }
            rec.record("site.mutated-cover", format!("|T|={base}/members={members}"), || {
                let mut caught = 0;
                for cover in group.iter().filter(|c| c.jointly_surjective()) {
                    let broken = drop_last_point(cover);
                    let tr = site_translate(&broken, p, m)?;
                    if tr.product_ff.faithfully_flat() || tr.product_ff.missed_point != Some(base - 1) {
                        return Ok(Outcome::unless(Some(format!("mutated family {:?} not caught", broken.members))));
                    }
                    caught += 1;
                }
                Ok(Outcome::new(true, Some(format!("{caught} mutated families rejected, missed point {}", base - 1))))
            });
        }
    }
}

fn characterization(rec: &mut Recorder) {
    let p = rec.cfg().prime();
    let mut bases: Vec<(String, FiniteFpAlgebra)> = (1..=3).map(|k| (format!("F{}^{k}", p.get()), function_algebra(p, k))).collect();
    bases.push(("F4".into(), f4()));
    bases.push(("F4 x F2".into(), f4().product(&function_algebra(prime(2), 1)).expect("same prime")));
    if let Ok(f9) = FiniteFpAlgebra::monogenic(prime(3), &[1, 0]) {
        bases.push(("F9".into(), f9));
    }
    bases.push(("F3^2".into(), function_algebra(prime(3), 2)));
    for (name, base) in bases {
        for m in 1..=2 {
            rec.record("stone.characterization", format!("W{m}({name})"), || {
                let c = WittCarrier::new(base.clone(), m)?;
                let r = stone_characterization_check(&c)?;
                Ok(Outcome::new(
                    r.agree,
                    Some(format!(
                        "phi = id: {}, coinvariant map ff: {}{}",
                        r.phi_is_identity,
                        r.coinvariant_map_ff,
                        r.witness.map(|w| format!(" ({w})")).unwrap_or_default()
                    )),
                ))
            });
        }
    }
}

fn small_algebras(p: Prime) -> Vec<(String, FiniteFpAlgebra)> {
    let q = p.get();
    let field = match q {
        2 => f4(),
        _ => FiniteFpAlgebra::monogenic(p, &[1, 0]).expect("x^2 + 1 is monic"),
    };
    vec![
        (format!("F{q}"), FiniteFpAlgebra::prime_field(p)),
        (format!("F{q}^2"), function_algebra(p, 2)),
        (format!("F{q}[e]/e^2"), dual_numbers(p)),
        (format!("F{}", q * q), field),
    ]
}

fn adjunctions(rec: &mut Recorder) {
    for q in [2, 3] {
        let p = prime(q);
        let algebras = small_algebras(p);
        let stone: Vec<(String, FiniteFpAlgebra)> = (1..=3).map(|k| (format!("F{q}^{k}"), function_algebra(p, k))).collect();
        let perfect: Vec<(String, FiniteFpAlgebra)> = algebras.iter().filter(|(_, b)| is_perfect(b)).cloned().collect();
        for (an, a) in &algebras {
            for (bn, b) in &stone {
                rec.record("adjunction.frobenius", format!("invariants/{an}/{bn}"), || Ok(bijection_outcome(&invariants_adjunction(a, b)?)));
                rec.record("adjunction.frobenius", format!("coinvariants/{an}/{bn}"), || Ok(bijection_outcome(&coinvariants_adjunction(a, b)?)));
            }
            for (bn, b) in perfect.iter().chain(&stone) {
                rec.record("adjunction.frobenius", format!("coperfection/{an}/{bn}"), || Ok(bijection_outcome(&coperfection_adjunction(a, b)?)));
                rec.record("adjunction.frobenius", format!("perfection/{an}/{bn}"), || Ok(bijection_outcome(&perfection_adjunction(a, b)?)));
            }
        }
    }
    let p = prime(2);
    let targets = [("F2", FiniteFpAlgebra::prime_field(p)), ("F2^2", function_algebra(p, 2))];
    let sources = [("F4", f4()), ("F2", FiniteFpAlgebra::prime_field(p)), ("F2^2", function_algebra(p, 2))];
    for (an, a) in &sources {
        for (bn, b) in &targets {
            rec.record("adjunction.delta", format!("invariants/W2({an})/W2({bn})"), || {
                let (a, b) = (WittCarrier::new(a.clone(), 2)?, WittCarrier::new(b.clone(), 2)?);
                Ok(bijection_outcome(&delta_invariants_adjunction(&a, &b)?))
            });
            rec.record("adjunction.delta", format!("coinvariants/W2({an})/W2({bn})"), || {
                let (a, b) = (WittCarrier::new(a.clone(), 2)?, WittCarrier::new(b.clone(), 2)?);
                Ok(bijection_outcome(&delta_coinvariants_adjunction(&a, &b)?))
            });
        }
    }
}

fn profinite(rec: &mut Recorder, exhaustive: bool) {
    if exhaustive {
        for d in 1..=6 {
            for (name, t) in [("ntilde", canonical_ntilde(d)), ("cantor", canonical_cantor(d))] {
                rec.record("profinite.replete", format!("{name}/depth={d}"), || {
                    let t = t?;
                    let r = check_sequential_surjectivity(&t);
                    let ok = r.surjective && r.lifts_valid(&t);
                    let sample = r.lifts.last().and_then(|l| l.last()).cloned();
                    Ok(Outcome::new(ok, Some(format!("missed: {:?}, lift of the last top point: {sample:?}", r.missed))))
                });
            }
        }
        let towers: Vec<(&str, Tower)> = vec![
            ("point", Tower::point(2)),
            ("two", Tower::constant(vec!["a".into(), "b".into()], 2)),
            ("ntilde", canonical_ntilde(2).expect("depth is positive")),
        ];
        for (cn, c) in &towers {
            for (an, a) in &towers {
                for (bn, b) in &towers {
                    rec.record("profinite.fiber-universal", format!("{an} -> {cn} <- {bn}"), || {
                        let fs = ProMap::enumerate_levelwise(a, c);
                        let gs = ProMap::enumerate_levelwise(b, c);
                        for f in &fs {
                            for g in &gs {
                                let fp = tower_fiber_product(f, g)?;
                                if let Some(w) = universal_property_failure(&fp, 2) {
                                    return Ok(Outcome::unless(Some(format!("cone {w:?} for maps {:?} and {:?}", f.maps, g.maps))));
                                }
                            }
                        }
                        Ok(Outcome::unless(None))
                    });
                }
            }
        }
    }
    let seed = rec.cfg().seed;
    rec.record("profinite.fiber-universal", format!("random cospans/seed={seed}"), || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let mut checked = 0;
        for _ in 0..20 {
            let a = Tower::random(&mut rng, 2, 3);
            let f = ProMap::random_levelwise(&mut rng, &a, 2);
            let b = Tower::random(&mut rng, 2, 3);
            let options = ProMap::enumerate_levelwise(&b, &f.target);
            let Some(g) = options.choose(&mut rng) else { continue };
            let fp = tower_fiber_product(&f, g)?;
            if let Some(w) = universal_property_failure(&fp, 2) {
                return Ok(Outcome::unless(Some(format!("cone {w:?} for maps {:?} and {:?}", f.maps, g.maps))));
            }
            checked += 1;
        }
        Ok(Outcome::new(true, Some(format!("{checked} cospans checked"))))
    });
}

fn sheaf_outcome<X: Presheaf>(x: &X, site: &FiniteSite) -> Result<Outcome> {
    let (covers, failure) = sheaf_check_site(x, site, 3)?;
    Ok(match failure {
        None => Outcome::unless(None),
        Some((cover, r)) => Outcome::unless(Some(format!(
            "cover of {} by {:?}: {}",
            cover.target.name,
            cover.members.iter().map(|m| &m.map).collect::<Vec<_>>(),
            r.witness.unwrap_or_else(|| format!("{covers} covers, equalizer fails"))
        ))),
    })
}

fn condensed(rec: &mut Recorder) {
    let p = rec.cfg().prime();
    let site = FiniteSite::standard();
    let level = site.level;
    for k in 1..=3 {
        rec.record("condensed.sheaf-condensify", format!("discrete/{k}"), || sheaf_outcome(&Condensable::Discrete(k), &site));
    }
    for (name, fixture) in [("dyadic interval", dyadic_interval()), ("ntilde from cantor", ntilde_from_cantor())] {
        rec.record("condensed.sheaf-condensify", format!("{name}/level={level}"), || {
            let q = QuotientCondensedSet::new(fixture.presentation()?, level)?;
            sheaf_outcome(&Condensable::Quotient(q), &site)
        });
    }
    let mut represented = site.objects.clone();
    represented.push(SiteObject::new("cantor level 2", 4));
    for obj in &represented {
        rec.record("condensed.sheaf-representable", obj.name.clone(), || sheaf_outcome(&Representable::new(obj.clone()), &site));
    }
    let mutate = rec.cfg().mutation == Some(Mutation::Restriction);
    rec.record("condensed.sheaf-representable", "tabulated two-member cover", || {
        let t = site.object("ntilde")?.clone();
        let two = site.object("two")?.clone();
        let cover = Cover::new(
            t.clone(),
            vec![SiteMap::new(two.clone(), t.clone(), vec![0, 2])?, SiteMap::new(two, t, vec![1, 2])?],
        )?;
        let x = Representable::new(SiteObject::new("K", 2));
        let mut table = PresheafApprox::tabulate_for_cover(&x, &cover)?;
        if mutate {
            let r = table
                .restrictions
                .iter_mut()
                .find(|r| r.map == cover.members[0])
                .ok_or_else(|| Error::Internal("cover member was not tabulated".into()))?;
            r.table[0] = r.table[1];
        }
        if let Some(why) = table.functoriality_failure() {
            return Ok(Outcome::unless(Some(why)));
        }
        let r = sheaf_check(&table, &cover)?;
        Ok(Outcome::new(r.passed, r.witness))
    });

    for obj in &site.objects {
        rec.record("condensed.qc", format!("representable/{}", obj.name), || {
            let r = qc_check(&Representable::new(obj.clone()), &site)?;
            Ok(Outcome::new(r.quasi_compact, r.generator.map(|g| format!("generator {g:?}")).or(r.witness)))
        });
    }
    rec.record("condensed.qc", format!("dyadic interval/level={level}"), || {
        let q = QuotientCondensedSet::new(dyadic_interval().presentation()?, level)?;
        let mut with_cover = site.clone();
        with_cover.objects.push(q.cover_object());
        let r = qc_check(&q, &with_cover)?;
        let canonical = is_generator(&q, &with_cover, &q.cover_object(), &q.quotient_section())?;
        Ok(Outcome::new(
            r.quasi_compact && canonical,
            Some(format!("canonical quotient map generates: {canonical}; first generator {:?}", r.generator)),
        ))
    });

    let ks: Vec<(String, Tower, usize)> = vec![
        ("point".into(), Tower::point(1), 1),
        ("two".into(), Tower::constant(vec!["a".into(), "b".into()], 1), 1),
        ("ntilde level 1".into(), canonical_ntilde(2).expect("depth is positive"), 1),
        ("ntilde level 2".into(), canonical_ntilde(2).expect("depth is positive"), 2),
        ("cantor level 1".into(), canonical_cantor(1).expect("depth is positive"), 1),
    ];
    for m in 1..=2 {
        let corpus = match betti_corpus(p, m) {
            Ok(c) => c,
            Err(e) => {
                rec.record("condensed.betti", format!("m={m}"), || Err(e));
                continue;
            }
        };
        for (an, a) in &corpus {
            for (kn, k, n) in &ks {
                rec.record("condensed.betti", format!("K={kn}/A={an}/m={m}"), || {
                    let r = betti_delta_check(k, *n, a)?;
                    let passed = r.passed();
                    let witness = if passed { Some(format!("{} maps on each side", r.delta_maps)) } else { r.witness };
                    Ok(Outcome::new(passed, witness))
                });
            }
        }
        for (an, a) in &corpus {
            for (bn, b) in &corpus {
                rec.record("condensed.betti-naturality", format!("{an} -> {bn}/m={m}"), || {
                    for g in all_functions(b.points(), a.points()) {
                        let f = FunctionRingMap::pullback(a.carrier, b.carrier, &g)?;
                        for (kn, k, n) in &ks {
                            if let Some(kappa) = betti_naturality(k, *n, &f, a, b)? {
                                return Ok(Outcome::unless(Some(format!("K={kn}, dual map {g:?}, κ={kappa:?}"))));
                            }
                        }
                    }
                    Ok(Outcome::unless(None))
                });
            }
        }
    }

    let dyadic = dyadic_interval();
    for n in 0..=3.min(dyadic.space.depth()) {
        for obj in &site.objects {
            rec.record("condensed.coequalizer", format!("dyadic level {n}/{}", obj.name), || {
                let q = QuotientCondensedSet::new(dyadic.presentation()?, n)?;
                let c = coequalizer_check(&q, obj)?;
                Ok(Outcome::new(c.passed, c.witness))
            });
        }
    }
}

fn betti_corpus(p: Prime, m: u32) -> Result<Vec<(String, StoneDeltaRingApprox)>> {
    let nt = canonical_ntilde(2)?;
    let c = canonical_cantor(1)?;
    Ok(vec![
        ("Z/p^m".into(), phi_functor(&Tower::point(1), 0, p, m)?),
        ("ntilde level 1".into(), phi_functor(&nt, 1, p, m)?),
        ("ntilde level 2".into(), phi_functor(&nt, 2, p, m)?),
        ("cantor level 1".into(), phi_functor(&c, 1, p, m)?),
    ])
}

fn determinism(rec: &mut Recorder) {
    let cfg = RunConfig { timings: false, ..rec.cfg().clone() };
    let seeded = |cfg: &RunConfig| {
        let mut r = Recorder::new(cfg);
        witt_cont(&mut r, false, true);
        profinite(&mut r, false);
        serde_json::to_string(&r.finish()).expect("records serialize")
    };
    rec.record("determinism.rerun", format!("seed={}", cfg.seed), || {
        let (first, second) = (seeded(&cfg), seeded(&cfg));
        Ok(Outcome::new(first == second, (first != second).then(|| "seeded records differ between runs".to_string())))
    });
}
