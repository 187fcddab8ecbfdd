use std::error::Error as StdError;
use std::fmt::Write as _;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use wittstone::algebra::{FiniteFpAlgebra, FiniteRing, Prime};
use wittstone::condensed::{betti_delta_check, sheaf_check_site, FiniteSite, PresheafApprox};
use wittstone::duality::{ff_check, phi_functor, witt_of_cont_iso};
use wittstone::profinite::fixtures::PresentationFixture;
use wittstone::profinite::{
    canonical_cantor, canonical_ntilde, check_sequential_surjectivity, quotient_presentation, quotient_tower,
    tower_fiber_product, universal_property_failure, ProMap, Tower,
};
use wittstone::stone::{
    characters_exhaustive, coperfection, evaluation_is_iso, is_p_boolean, is_perfect, perfection, stone_dual_of_set,
    AlgebraMap, PBooleanAlgebra,
};
use wittstone::verify::{explain, run_suite, CheckRecord, Mutation, Report, RunConfig};
use wittstone::witt::delta::all_pairs;
use wittstone::witt::{check_delta_axioms, witt_polys, DeltaStructure, WittRing, WittVector};

use crate::{
    Canonical, Cli, Command, CondensedCmd, DualityCmd, FlatnessCmd, Format, Global, ProfiniteCmd, StoneCmd, TowerSource,
    VerifyArgs, WittBinary, WittCmd,
};

type CliResult<T> = Result<T, Box<dyn StdError>>;

/// Largest Witt ring whose elements `witt check-delta` lists.
const ENUMERATION_LIMIT: usize = 1 << 12;

pub struct Output {
    pub json: Value,
    pub text: String,
    pub passed: bool,
}

impl Output {
    fn new(json: impl Serialize, text: String) -> CliResult<Self> {
        Ok(Output { json: serde_json::to_value(json)?, text, passed: true })
    }

    fn check(json: impl Serialize, text: String, passed: bool) -> CliResult<Self> {
        Ok(Output { json: serde_json::to_value(json)?, text, passed })
    }
}

pub fn emit(global: &Global, out: &Output) -> CliResult<()> {
    let body = match global.format {
        Format::Json => serde_json::to_string_pretty(&out.json)? + "\n",
        Format::Text => out.text.clone(),
    };
    match &global.out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(())
}

/// JSON given inline, or the contents of a file.
fn load(arg: &str) -> CliResult<String> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}").into())
}

fn prime(global: &Global) -> CliResult<Prime> {
    Ok(Prime::new(global.p.unwrap_or(2))?)
}

fn precision(global: &Global) -> u32 {
    global.precision.unwrap_or(3)
}

fn depth(global: &Global) -> usize {
    global.depth.unwrap_or(3)
}

fn record(check: &str, key: String, passed: bool, witness: Option<String>) -> CheckRecord {
    CheckRecord { check_id: check.to_string(), criterion: 0, instance_key: key, passed, witness, duration_ms: None }
}

fn record_json(r: &CheckRecord) -> Value {
    let mut v = json!({ "check": r.check_id, "instance_key": r.instance_key, "passed": r.passed });
    if let Some(w) = &r.witness {
        v["witness"] = json!(w);
    }
    v
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Witt(cmd) => witt(g, cmd),
        Command::Stone(cmd) => stone(g, cmd),
        Command::Profinite(cmd) => profinite(g, cmd),
        Command::Duality(cmd) => duality(g, cmd),
        Command::Flatness(FlatnessCmd::Check { map }) => flatness(map),
        Command::Condensed(cmd) => condensed(g, cmd),
        Command::Verify(args) => verify(g, args),
        Command::Explain { check_id } => {
            let text = explain(check_id)?;
            Output::new(json!({ "check_id": check_id, "explanation": text }), text + "\n")
        }
    }
}

fn algebra_or_prime_field(base: Option<&str>, p: Prime) -> CliResult<FiniteFpAlgebra> {
    match base {
        Some(s) => Ok(FiniteFpAlgebra::from_json(&load(s)?)?),
        None => Ok(FiniteFpAlgebra::prime_field(p)),
    }
}

/// A list of components; an integer `c` stands for `c · 1`.
fn parse_witt(a: &FiniteFpAlgebra, s: &str) -> CliResult<Vec<Vec<u64>>> {
    let items: Vec<Value> = serde_json::from_str(s)?;
    let p = a.prime().get();
    items
        .iter()
        .map(|item| match item {
            Value::Number(n) => {
                let c = n.as_u64().ok_or("components must be nonnegative")? % p;
                Ok(a.unit().iter().map(|u| u * c % p).collect())
            }
            Value::Array(_) => {
                let v: Vec<u64> = serde_json::from_value(item.clone())?;
                if v.len() != a.dim() || v.iter().any(|c| *c >= p) {
                    return Err(format!("component {v:?} is not an element of a {}-dimensional F_{p}-algebra", a.dim()).into());
                }
                Ok(v)
            }
            other => Err(format!("cannot read component {other}").into()),
        })
        .collect()
}

fn witt(g: &Global, cmd: &WittCmd) -> CliResult<Output> {
    let p = prime(g)?;
    match cmd {
        WittCmd::Add(args) | WittCmd::Mul(args) => {
            let WittBinary { len, base, lhs, rhs } = args;
            let base = algebra_or_prime_field(base.as_deref(), p)?;
            let w = WittRing::new(base.clone(), base.prime(), *len)?;
            let a = w.vector(parse_witt(&base, lhs)?)?;
            let b = w.vector(parse_witt(&base, rhs)?)?;
            let (op, c) = match cmd {
                WittCmd::Add(_) => ("add", w.witt_add(&a, &b)?),
                _ => ("mul", w.witt_mul(&a, &b)?),
            };
            let text = format!("{:?} {op} {:?} = {:?}\nghost: {:?}\n", a.0, b.0, c.0, w.ghost(&c));
            Output::new(json!({ "op": op, "p": base.prime().get(), "len": len, "result": c.0, "ghost": w.ghost(&c) }), text)
        }
        WittCmd::Polys { len } => {
            let set = witt_polys(p, *len)?;
            let json: Value = serde_json::from_str(&set.to_json())?;
            Output::new(json, set.to_json() + "\n")
        }
        WittCmd::CheckDelta { carrier, exhaustive, samples } => {
            let base = FiniteFpAlgebra::from_json(&load(carrier)?)?;
            let m = precision(g) as usize;
            let w = WittRing::new(base.clone(), base.prime(), m)?;
            if !w.base_is_perfect() {
                return Err("the Witt Frobenius needs a perfect base algebra".into());
            }
            let lift = w.clone();
            let d = DeltaStructure::new(w.clone(), move |x: &WittVector<Vec<u64>>| {
                lift.witt_frobenius(x).expect("base is perfect")
            })?;
            let size = base.prime().get().checked_pow((base.dim() * m) as u32).unwrap_or(u64::MAX);
            if size > ENUMERATION_LIMIT as u64 {
                return Err(format!("W_{m} of this algebra has {size} elements, more than {ENUMERATION_LIMIT}").into());
            }
            let els = w.elements();
            let pairs = if *exhaustive {
                all_pairs(&els)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(g.seed.unwrap_or(0));
                (0..*samples)
                    .map(|_| (els.choose(&mut rng).expect("nonempty").clone(), els.choose(&mut rng).expect("nonempty").clone()))
                    .collect()
            };
            let report = check_delta_axioms(&d, pairs);
            let mut text = format!(
                "delta axioms on W_{m}: {} ({} pairs)\n",
                if report.passed { "hold" } else { "FAIL" },
                report.pairs_checked
            );
            for f in &report.failures {
                let _ = writeln!(text, "  {}: {}", f.axiom, f.witness);
            }
            let passed = report.passed;
            Output::check(report, text, passed)
        }
    }
}

fn stone(g: &Global, cmd: &StoneCmd) -> CliResult<Output> {
    match cmd {
        StoneCmd::Dual { set_size } => {
            let labels: Vec<String> = (0..*set_size).map(|i| format!("s{i}")).collect();
            let a = stone_dual_of_set(&labels, prime(g)?)?;
            let text = format!("F_{}^{set_size}: dimension {}, p-Boolean\n", a.prime().get(), a.dim());
            Output::new(json!({ "algebra": a.algebra(), "points": labels }), text)
        }
        StoneCmd::Spec { algebra } => {
            let a = FiniteFpAlgebra::from_json(&load(algebra)?)?;
            let chars = characters_exhaustive(&a)?;
            let pb = is_p_boolean(&a);
            let iso = PBooleanAlgebra::new(a.clone()).map(|b| evaluation_is_iso(&b)).unwrap_or(false);
            let text = format!(
                "dimension {}, {} characters, p-Boolean: {pb}, evaluation is an isomorphism: {iso}\n",
                a.dim(),
                chars.len()
            );
            Output::new(json!({ "characters": chars, "p_boolean": pb, "evaluation_iso": iso }), text)
        }
        StoneCmd::Perfection { algebra } => {
            let a = FiniteFpAlgebra::from_json(&load(algebra)?)?;
            let perf = perfection(&a)?;
            let coperf = coperfection(&a)?;
            let text = format!(
                "perfect: {}; perfection has dimension {}, coperfection has dimension {}\n",
                is_perfect(&a),
                perf.algebra.dim(),
                coperf.algebra.dim()
            );
            Output::new(json!({ "perfect": is_perfect(&a), "perfection": perf, "coperfection": coperf }), text)
        }
    }
}

fn tower(g: &Global, src: &TowerSource) -> CliResult<Tower> {
    match (&src.tower, src.canonical) {
        (Some(t), _) => Ok(Tower::from_json(&load(t)?)?),
        (None, Some(Canonical::Ntilde)) => Ok(canonical_ntilde(depth(g))?),
        (None, Some(Canonical::Cantor)) => Ok(canonical_cantor(depth(g))?),
        (None, None) => Err("give --tower or --canonical".into()),
    }
}

fn profinite(g: &Global, cmd: &ProfiniteCmd) -> CliResult<Output> {
    match cmd {
        ProfiniteCmd::Replete { tower: src } => {
            let t = tower(g, src)?;
            let r = check_sequential_surjectivity(&t);
            let passed = r.surjective && r.lifts_valid(&t);
            let text = match r.missed {
                None => format!("all {} transitions surjective; every level point lifts\n", t.depth()),
                Some((n, x)) => format!("transition onto level {n} misses point {x}\n"),
            };
            Output::check(r, text, passed)
        }
        ProfiniteCmd::Fiber { f, g: gm, max_cone } => {
            let f = ProMap::from_json(&load(f)?)?;
            let gm = ProMap::from_json(&load(gm)?)?;
            let fp = tower_fiber_product(&f, &gm)?;
            let failure = universal_property_failure(&fp, *max_cone);
            let sizes: Vec<usize> = (0..=fp.tower.depth()).map(|n| fp.tower.level_size(n)).collect();
            let text = format!("fiber product level sizes {sizes:?}; universal property: {}\n", if failure.is_none() { "holds" } else { "FAILS" });
            let passed = failure.is_none();
            Output::check(json!({ "tower": fp.tower, "pairs": fp.pairs, "universal_property_failure": failure }), text, passed)
        }
        ProfiniteCmd::Quotient { fixture } => {
            let fx = PresentationFixture::from_json(&load(fixture)?)?;
            let pres = fx.presentation()?;
            let levels = (0..=pres.space.depth())
                .map(|n| quotient_presentation(&pres, n))
                .collect::<Result<Vec<_>, _>>()?;
            let tower = quotient_tower(&pres).ok().map(|(t, _)| t);
            let mut text = String::new();
            for (n, q) in levels.iter().enumerate() {
                let _ = writeln!(text, "level {n}: {} classes", q.classes.len());
            }
            let _ = writeln!(text, "transitions descend to the quotient: {}", tower.is_some());
            Output::new(json!({ "name": fx.name, "levels": levels, "tower": tower }), text)
        }
    }
}

/// Global flags take precedence over config-file values.
fn with_globals(mut cfg: RunConfig, g: &Global) -> RunConfig {
    if let Some(p) = g.p {
        cfg.p = p;
    }
    if let Some(m) = g.precision {
        cfg.precision = m;
    }
    if let Some(d) = g.depth {
        cfg.depth = d;
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    cfg
}

fn report_output(report: Report) -> CliResult<Output> {
    let text = report.to_text();
    let passed = report.passed();
    Output::check(serde_json::from_str::<Value>(&report.to_json())?, text, passed)
}

fn duality(g: &Global, cmd: &DualityCmd) -> CliResult<Output> {
    match cmd {
        DualityCmd::Roundtrip { max_level_size } => {
            let cfg = RunConfig { max_level_size: *max_level_size, criteria: vec![4], ..with_globals(RunConfig::default(), g) };
            report_output(run_suite(&cfg)?)
        }
        DualityCmd::WittCont { tower: src, level, samples } => {
            let t = tower(g, src)?;
            let n = level.unwrap_or(t.depth());
            let (p, m) = (prime(g)?, precision(g));
            let iso = witt_of_cont_iso(&t, n, p, m)?;
            let size = p.get().checked_pow(m * t.level_size(n) as u32).unwrap_or(u64::MAX);
            let report = if size <= 256 {
                iso.verify_exhaustive()
            } else {
                iso.verify_sampled(&mut ChaCha8Rng::seed_from_u64(g.seed.unwrap_or(0)), *samples)
            };
            let r = record(
                if report.exhaustive { "duality.witt-cont-exhaustive" } else { "duality.witt-cont-sampled" },
                format!("level={n}/|S|={}/m={m}", t.level_size(n)),
                report.passed(),
                report.witness.clone(),
            );
            let text = format!(
                "{} [{}]: {} ({} elements, {} pairs)\n",
                r.check_id,
                r.instance_key,
                if r.passed { "PASS" } else { "FAIL" },
                report.elements_checked,
                report.pairs_checked
            );
            Output::check(record_json(&r), text, r.passed)
        }
    }
}

fn flatness(map: &str) -> CliResult<Output> {
    let f: AlgebraMap = serde_json::from_str(&load(map)?)?;
    let (s, t) = (f.matrix.cols, f.matrix.rows);
    let w = ff_check(&f, s, t)?;
    let r = record(
        "flatness.ff-correspondence",
        format!("|S|={s}/|T|={t}/dual={:?}", w.dual),
        w.criteria_agree(),
        w.missed_point.zip(w.killed_function.as_ref()).map(|(s, e)| format!("point {s} is missed; the map kills {e:?}")),
    );
    let mut json = record_json(&r);
    json["faithfully_flat"] = json!(w.faithfully_flat());
    json["dual"] = json!(w.dual);
    let text = format!(
        "dual map {:?}; faithfully flat: {}; criteria agree: {}\n",
        w.dual,
        w.faithfully_flat(),
        w.criteria_agree()
    );
    Output::check(json, text, r.passed)
}

fn condensed(g: &Global, cmd: &CondensedCmd) -> CliResult<Output> {
    match cmd {
        CondensedCmd::SheafCheck { site, presheaf, max_members } => {
            let site = FiniteSite::from_json(&load(site)?)?;
            let x = PresheafApprox::from_json(&load(presheaf)?)?;
            if let Some(why) = x.functoriality_failure() {
                return Err(format!("not a presheaf: {why}").into());
            }
            let (covers, failure) = sheaf_check_site(&x, &site, *max_members)?;
            let text = match &failure {
                None => format!("sheaf condition holds on all {covers} covers\n"),
                Some((cover, r)) => format!(
                    "sheaf condition FAILS on a cover of {}: {}\n",
                    cover.target.name,
                    r.witness.as_deref().unwrap_or("-")
                ),
            };
            let passed = failure.is_none();
            Output::check(json!({ "covers": covers, "failure": failure }), text, passed)
        }
        CondensedCmd::Betti { tower: src, level } => {
            let k = tower(g, src)?;
            let n = level.unwrap_or(k.depth());
            let (p, m) = (prime(g)?, precision(g));
            let mut records = Vec::new();
            let mut text = String::new();
            for j in 0..=k.depth() {
                let a = phi_functor(&k, j, p, m)?;
                let c = betti_delta_check(&k, n, &a)?;
                let r = record(
                    "condensed.betti",
                    format!("K=level {n}/A=Cont(level {j})/m={m}"),
                    c.passed(),
                    c.witness.clone(),
                );
                let _ = writeln!(
                    text,
                    "{}: {} ({} continuous maps, {} delta maps)",
                    r.instance_key,
                    if r.passed { "PASS" } else { "FAIL" },
                    c.continuous_maps,
                    c.delta_maps
                );
                records.push(r);
            }
            let passed = records.iter().all(|r| r.passed);
            Output::check(records.iter().map(record_json).collect::<Vec<_>>(), text, passed)
        }
    }
}

fn verify(g: &Global, args: &VerifyArgs) -> CliResult<Output> {
    let file = match &args.config {
        Some(path) => {
            let s = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            RunConfig::from_json(&s)?
        }
        None => RunConfig::default(),
    };
    let mut cfg = with_globals(file, g);
    if let Some(m) = args.max_level_size {
        cfg.max_level_size = m;
    }
    if let Some(s) = args.samples {
        cfg.samples = s;
    }
    if !args.criteria.is_empty() {
        cfg.criteria = args.criteria.clone();
    }
    if let Some(m) = &args.inject_mutation {
        cfg.mutation = Some(m.parse::<Mutation>()?);
    }
    cfg.timings |= args.timings;
    report_output(run_suite(&cfg)?)
}
