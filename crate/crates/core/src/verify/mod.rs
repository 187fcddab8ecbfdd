//! The acceptance battery: every check runs over a configured family of instances and
//! records a pass/fail line with an optional witness. Reports are sorted and, unless
//! timings are requested, byte-identical across runs with the same configuration.

mod catalog;
mod checks;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use catalog::{check_info, explain, CheckInfo, CATALOG};

use crate::algebra::Prime;
use crate::error::{Error, Result};

/// A deliberate fault injected into one family of instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mutation {
    /// Corrupt the δ map of one `Z/p^m` instance.
    Delta,
    /// Drop a point from every covering family while keeping the covering flag.
    Cover,
    /// Break one restriction table of a tabulated sheaf.
    Restriction,
}

impl std::str::FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(Mutation::Delta),
            "cover" => Ok(Mutation::Cover),
            "restriction" => Ok(Mutation::Restriction),
            other => Err(Error::ParameterMismatch(format!("unknown mutation `{other}` (delta, cover, restriction)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub p: u64,
    pub depth: usize,
    pub precision: u32,
    pub max_level_size: usize,
    pub seed: u64,
    pub samples: usize,
    /// Criteria to run; empty means all.
    pub criteria: Vec<u8>,
    pub mutation: Option<Mutation>,
    /// Record wall-clock durations (makes reports differ between runs).
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 2,
            depth: 3,
            precision: 3,
            max_level_size: 3,
            seed: 0,
            samples: 1000,
            criteria: Vec::new(),
            mutation: None,
            timings: false,
        }
    }
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        Prime::new(self.p)?;
        if self.depth == 0 || self.precision == 0 || self.max_level_size == 0 || self.samples == 0 {
            return Err(Error::ParameterMismatch("depth, precision, max_level_size and samples must be positive".into()));
        }
        if self.max_level_size > 4 {
            return Err(Error::TooLarge(format!("max_level_size {} (at most 4)", self.max_level_size)));
        }
        if self.depth > 6 || self.precision > 6 {
            return Err(Error::TooLarge("depth and precision are limited to 6".into()));
        }
        if let Some(c) = self.criteria.iter().find(|c| !(1..=12).contains(*c)) {
            return Err(Error::ParameterMismatch(format!("no acceptance criterion {c}")));
        }
        Ok(())
    }

    pub fn prime(&self) -> Prime {
        Prime::new(self.p).expect("validated")
    }

    pub fn selects(&self, criterion: u8) -> bool {
        self.criteria.is_empty() || self.criteria.contains(&criterion)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub criterion: u8,
    pub instance_key: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
}

/// Pass/fail of one acceptance criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionSummary {
    pub criterion: u8,
    pub passed: bool,
    pub instances: usize,
    pub failures: usize,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn criteria(&self) -> Vec<CriterionSummary> {
        let mut out: Vec<CriterionSummary> = Vec::new();
        for c in &self.checks {
            match out.iter_mut().find(|s| s.criterion == c.criterion) {
                Some(s) => {
                    s.instances += 1;
                    s.failures += usize::from(!c.passed);
                    s.passed &= c.passed;
                }
                None => out.push(CriterionSummary {
                    criterion: c.criterion,
                    passed: c.passed,
                    instances: 1,
                    failures: usize::from(!c.passed),
                }),
            }
        }
        out.sort_by_key(|s| s.criterion);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("wittstone {}\n", self.tool_version);
        for c in self.criteria() {
            s.push_str(&format!(
                "criterion {:>2}: {} ({} instances, {} failed)\n",
                c.criterion,
                if c.passed { "PASS" } else { "FAIL" },
                c.instances,
                c.failures
            ));
        }
        for f in self.failures() {
            s.push_str(&format!(
                "  FAIL {} [{}]: {}\n",
                f.check_id,
                f.instance_key,
                f.witness.as_deref().unwrap_or("no witness")
            ));
        }
        s
    }
}

/// Collects records for one check family.
pub(crate) struct Recorder<'a> {
    cfg: &'a RunConfig,
    records: Vec<CheckRecord>,
}

pub(crate) struct Outcome {
    pub passed: bool,
    pub witness: Option<String>,
}

impl Outcome {
    pub fn new(passed: bool, witness: Option<String>) -> Self {
        Outcome { passed, witness }
    }

    /// Pass unless a failure description is given.
    pub fn unless(failure: Option<String>) -> Self {
        Outcome {
            passed: failure.is_none(),
            witness: failure,
        }
    }
}

impl<'a> Recorder<'a> {
    pub fn new(cfg: &'a RunConfig) -> Self {
        Recorder { cfg, records: Vec::new() }
    }

    pub fn cfg(&self) -> &RunConfig {
        self.cfg
    }

    pub fn record(&mut self, id: &'static str, key: impl Into<String>, check: impl FnOnce() -> Result<Outcome>) {
        let info = check_info(id).expect("every recorded check is catalogued");
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome::new(false, Some(format!("error: {e}"))));
        let duration_ms = self.cfg.timings.then(|| start.elapsed().as_secs_f64() * 1e3);
        self.records.push(CheckRecord {
            check_id: id.to_string(),
            criterion: info.criterion,
            instance_key: key.into(),
            passed: outcome.passed,
            witness: outcome.witness,
            duration_ms,
        });
    }

    pub fn finish(self) -> Vec<CheckRecord> {
        self.records
    }
}

fn sort_records(records: &mut [CheckRecord]) {
    records.sort_by(|a, b| {
        (a.criterion, &a.check_id, &a.instance_key).cmp(&(b.criterion, &b.check_id, &b.instance_key))
    });
}

/// Runs every selected criterion (concurrently) and merges the records in sorted order.
pub fn run_suite(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let selected: Vec<u8> = (1..=12).filter(|c| cfg.selects(*c)).collect();
    let mut records: Vec<CheckRecord> = std::thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .map(|c| scope.spawn(move || checks::run_criterion(*c, cfg)))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("check threads do not panic"))
            .collect()
    });
    sort_records(&mut records);
    Ok(Report {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        checks: records,
    })
}
