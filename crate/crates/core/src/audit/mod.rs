//! The audit engine: generates morphisms, evaluates a measure on each
//! axiom and derived statement, and records every violation with enough
//! information to replay it.
//!
//! ```
//! use infocat::audit::{audit_axioms, AuditConfig};
//! use infocat::CategoryId;
//!
//! let config = AuditConfig::new(CategoryId::Finset, "shannon").max_size(2);
//! let report = audit_axioms(&config).unwrap();
//! assert!(report.passed());
//! assert_eq!(report.runs_of("axiom2.external_additivity"), 64);
//! ```

mod checks;
pub mod config;
mod plan;
mod registry;
pub mod report;

use std::collections::HashMap;

use rayon::prelude::*;

use crate::category::{Category, CategoryId};
use crate::error::{Error, Result};
use crate::json::AnyMorphism;
use crate::sample::{trial_rng, Mode, SampleParams, TrialRng};
use checks::{evaluate, Ctx, Outcome};
use plan::{corpus, draw, space, Shape, Space};
use registry::{dispatch, Audited, Visitor};

pub use config::AuditConfig;
pub use plan::{Check, Group};
pub use registry::measure_names;
pub use report::{AuditReport, Finding, Violation, ViolationKind};

/// Tuples evaluated in parallel per batch.
const BATCH: usize = 1 << 14;

pub fn audit_axioms(config: &AuditConfig) -> Result<AuditReport> {
    audit_checks(config, &Check::in_group(Group::Axiom))
}

/// Propositions 1 to 4 and their corollaries.
pub fn audit_propositions(config: &AuditConfig) -> Result<AuditReport> {
    audit_checks(config, &Check::in_group(Group::Proposition))
}

/// Axioms and propositions in one report.
pub fn audit_all(config: &AuditConfig) -> Result<AuditReport> {
    audit_checks(config, Check::ALL)
}

pub fn audit_checks(config: &AuditConfig, checks: &[Check]) -> Result<AuditReport> {
    config.validate()?;
    dispatch(config, Run { config, checks })
}

/// The single morphisms an audit with this config would draw: the whole
/// corpus in exhaustive mode, `trials` draws otherwise.
pub fn generate(config: &AuditConfig) -> Result<Vec<AnyMorphism>> {
    config.validate()?;
    dispatch(config, Generate { config })
}

/// Regenerates recorded violation `index` from the report's config alone and
/// checks that it reproduces bit for bit.
pub fn replay(report: &AuditReport, index: usize) -> Result<Violation> {
    let v = report
        .violations
        .get(index)
        .ok_or(Error::IndexOutOfRange { index, len: report.violations.len() })?;
    if v.seed != report.config.seed {
        return Err(Error::ReplayMismatch(format!(
            "violation was recorded under seed {} but the config has seed {}",
            v.seed, report.config.seed
        )));
    }
    let check = Check::from_id(&v.check).ok_or_else(|| Error::ReplayMismatch(format!("unknown check `{}`", v.check)))?;
    report.config.validate()?;
    let again = dispatch(&report.config, Replay { config: &report.config, check, trial: v.trial_index })?;
    let same = |w: &Violation| {
        w.kind == v.kind
            && w.morphisms == v.morphisms
            && bits(w.lhs) == bits(v.lhs)
            && bits(w.rhs) == bits(v.rhs)
    };
    match again.iter().find(|w| same(w)) {
        Some(w) => Ok(w.clone()),
        None if again.is_empty() => Err(Error::ReplayMismatch(format!(
            "{} passes on trial {} when regenerated",
            v.check, v.trial_index
        ))),
        None => Err(Error::ReplayMismatch(format!(
            "{} on trial {} regenerates different morphisms or values",
            v.check, v.trial_index
        ))),
    }
}

fn bits(x: Option<f64>) -> Option<u64> {
    x.map(f64::to_bits)
}

fn params(config: &AuditConfig) -> SampleParams {
    SampleParams { max_size: config.max_size, measure_compatible: config.mode == Mode::MeasureCompatible }
}

/// Where tuples come from.
enum Source<M> {
    Spaces(HashMap<Shape, Space<M>>),
    Random(SampleParams),
}

impl<M: Clone> Source<M> {
    fn len(&self, shape: Shape, trials: u64) -> usize {
        match self {
            Source::Spaces(s) => s[&shape].len(),
            Source::Random(_) => trials as usize,
        }
    }
}

fn tuple<C: Audited>(cat: &C, source: &Source<C::Morphism>, shape: Shape, seed: u64, i: usize) -> (Vec<C::Morphism>, TrialRng) {
    let mut rng = trial_rng(seed, i as u64);
    let t = match source {
        Source::Spaces(s) => s[&shape].tuple(i, shape.arity()),
        Source::Random(p) => draw(cat, shape, &mut rng, p),
    };
    (t, rng)
}

fn violation<C: Category>(
    cat: &C,
    check: Check,
    seed: u64,
    trial: usize,
    tuple: &[C::Morphism],
    f: checks::Failure<C::Morphism>,
) -> Violation {
    Violation {
        check: check.id().to_string(),
        kind: f.kind,
        morphisms: tuple.iter().chain(&f.extra).map(|m| cat.to_json(m)).collect(),
        lhs: f.lhs,
        rhs: f.rhs,
        delta: f.delta,
        note: f.note,
        seed,
        trial_index: trial as u64,
    }
}

struct Run<'a> {
    config: &'a AuditConfig,
    checks: &'a [Check],
}

impl Visitor for Run<'_> {
    type Out = AuditReport;

    fn visit<C: Audited>(self, cat: &C) -> Result<AuditReport> {
        let config = self.config;
        let measure = C::measure(config)?;
        let exact = measure.exact();
        let p = params(config);
        let ctx = Ctx { cat, measure: &*measure, tol: if exact { 0.0 } else { config.tolerance }, exact, params: p };
        let mut report = AuditReport::empty(config.clone());

        let (source, unary) = match config.mode {
            Mode::Exhaustive => {
                let corpus = corpus(cat, config.max_size)?;
                let mut spaces = HashMap::new();
                for c in self.checks {
                    if let std::collections::hash_map::Entry::Vacant(e) = spaces.entry(c.shape()) {
                        let s = space(cat, &corpus, c.shape(), config.tuple_budget)?;
                        if let Some(f) = &s.finding {
                            report.findings.push(f.clone());
                        }
                        e.insert(s);
                    }
                }
                (Source::Spaces(spaces), corpus.morphisms)
            }
            Mode::Random | Mode::MeasureCompatible => {
                let unary = (0..config.trials as usize)
                    .map(|i| tuple(cat, &Source::Random(p), Shape::Unary, config.seed, i).0.remove(0))
                    .collect();
                (Source::Random(p), unary)
            }
        };

        for &check in self.checks {
            let shape = check.shape();
            let n = source.len(shape, config.trials);
            let (mut ran, mut skipped, mut failed) = (0u64, 0u64, 0u64);
            let mut recorded = 0usize;
            for start in (0..n).step_by(BATCH) {
                let end = (start + BATCH).min(n);
                let outcomes: Vec<Result<(usize, Vec<C::Morphism>, Outcome<C::Morphism>)>> = (start..end)
                    .into_par_iter()
                    .map(|i| {
                        let (t, mut rng) = tuple(cat, &source, shape, config.seed, i);
                        let o = evaluate(&ctx, check, &t, &mut rng)?;
                        Ok((i, t, o))
                    })
                    .collect();
                for r in outcomes {
                    let (i, t, o) = r?;
                    match o {
                        Outcome::Pass => ran += 1,
                        Outcome::Skip => skipped += 1,
                        Outcome::Fail(fs) => {
                            ran += 1;
                            failed += 1;
                            for f in fs {
                                if recorded < config.max_recorded_violations {
                                    report.violations.push(violation(cat, check, config.seed, i, &t, f));
                                    recorded += 1;
                                }
                            }
                        }
                    }
                }
            }
            let id = check.id().to_string();
            report.checks_run.insert(id.clone(), ran);
            report.skipped_undefined.insert(id.clone(), skipped);
            report.violation_counts.insert(id, failed);
        }
        report.findings.extend(C::findings(config, &unary));
        Ok(report)
    }
}

struct Generate<'a> {
    config: &'a AuditConfig,
}

impl Visitor for Generate<'_> {
    type Out = Vec<AnyMorphism>;

    fn visit<C: Audited>(self, cat: &C) -> Result<Vec<AnyMorphism>> {
        let config = self.config;
        let ms = match config.mode {
            Mode::Exhaustive => corpus(cat, config.max_size)?.morphisms,
            _ => {
                let p = Source::Random(params(config));
                (0..config.trials as usize)
                    .map(|i| tuple(cat, &p, Shape::Unary, config.seed, i).0.remove(0))
                    .collect()
            }
        };
        ms.iter().map(|m| AnyMorphism::from_envelope(&cat.encode(m))).collect()
    }
}

struct Replay<'a> {
    config: &'a AuditConfig,
    check: Check,
    trial: u64,
}

impl Visitor for Replay<'_> {
    type Out = Vec<Violation>;

    fn visit<C: Audited>(self, cat: &C) -> Result<Vec<Violation>> {
        let config = self.config;
        let measure = C::measure(config)?;
        let exact = measure.exact();
        let p = params(config);
        let ctx = Ctx { cat, measure: &*measure, tol: if exact { 0.0 } else { config.tolerance }, exact, params: p };
        let shape = self.check.shape();
        let source = match config.mode {
            Mode::Exhaustive => {
                let c = corpus(cat, config.max_size)?;
                Source::Spaces(HashMap::from([(shape, space(cat, &c, shape, config.tuple_budget)?)]))
            }
            _ => Source::Random(p),
        };
        let i = self.trial as usize;
        if i >= source.len(shape, config.trials) {
            return Err(Error::ReplayMismatch(format!("trial {i} is outside the tuple space")));
        }
        let (t, mut rng) = tuple(cat, &source, shape, config.seed, i);
        Ok(match evaluate(&ctx, self.check, &t, &mut rng)? {
            Outcome::Fail(fs) => fs.into_iter().map(|f| violation(cat, self.check, config.seed, i, &t, f)).collect(),
            _ => Vec::new(),
        })
    }
}

/// The value of the named measure on `f`, in bits; `None` where the measure
/// is undefined.
pub fn measure_value(f: &AnyMorphism, measure: &str) -> Result<Option<f64>> {
    let mut config = AuditConfig::new(f.category(), measure);
    match f {
        AnyMorphism::Finvect(m) => config.field = Some(m.field()),
        AnyMorphism::FinvectDual(m) => config.field = Some(m.inner.field()),
        _ => {}
    }
    dispatch(&config, Evaluate { config: &config, f })
}

struct Evaluate<'a> {
    config: &'a AuditConfig,
    f: &'a AnyMorphism,
}

impl Visitor for Evaluate<'_> {
    type Out = Option<f64>;

    fn visit<C: Audited>(self, _cat: &C) -> Result<Option<f64>> {
        let m = C::decode(&self.f.to_envelope())?;
        C::measure(self.config)?.value(&m)
    }
}

/// Runs the rank audit in both linear categories on the same corpus: rank
/// is a bi-information function when both reports pass.
pub fn bi_information(config: &AuditConfig) -> Result<(AuditReport, AuditReport)> {
    let primal = AuditConfig { category: CategoryId::Finvect, measure: "rank".into(), ..config.clone() };
    let dual = AuditConfig { category: CategoryId::FinvectDual, measure: "image_dimension".into(), ..config.clone() };
    Ok((audit_all(&primal)?, audit_all(&dual)?))
}
