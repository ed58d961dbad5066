//! Measures by name, and per-category hooks for the engine.

use serde_json::json;

use super::config::AuditConfig;
use super::report::Finding;
use crate::category::{Category, CategoryId, Enumerate};
use crate::dual::{Dual, ImageCardinality, ImageDimension};
use crate::error::{Error, Result};
use crate::finprob::FinProb;
use crate::finset::{AfnCombination, Constant, FinSet, Hartley, Shannon, SourceSize};
use crate::finvect::{FinVect, Rank};
use crate::json::{Decode, Envelope};
use crate::measure::InfoMeasure;
use crate::noisy::{closed_form_ni, NoisyCapacity, NoisyFinSet, NoisyInformation};
use crate::noisy_prob::{ContinuousCapacity, ContinuousNoisyInformation, NoisyFinProb};
use crate::sample::Sample;

/// Measure names accepted by each category.
pub fn measure_names(category: CategoryId) -> &'static [&'static str] {
    match category {
        CategoryId::Finset => &["shannon", "hartley", "afn:<lambda>,<mu>", "source_size", "constant[:<c>]"],
        CategoryId::NoisyFinset => &["ni", "capacity"],
        CategoryId::Finprob => &[],
        CategoryId::NoisyFinprob => &["continuous_ni", "continuous_capacity"],
        CategoryId::Finvect => &["rank"],
        CategoryId::FinsetDual => &["image_cardinality"],
        CategoryId::FinvectDual => &["image_dimension"],
    }
}

fn unknown(config: &AuditConfig) -> Error {
    Error::UnknownMeasure { category: config.category, measure: config.measure.clone() }
}

pub(crate) trait Audited: Enumerate + Sample + Sized {
    fn measure(config: &AuditConfig) -> Result<Box<dyn InfoMeasure<Self>>>;

    fn decode(env: &Envelope) -> Result<Self::Morphism>;

    /// Category-specific notes computed over the single-morphism corpus.
    fn findings(_config: &AuditConfig, _corpus: &[Self::Morphism]) -> Vec<Finding> {
        Vec::new()
    }
}

fn parse_coefficient(s: &str) -> Option<f64> {
    s.trim().parse().ok()
}

impl Audited for FinSet {
    fn decode(env: &Envelope) -> Result<Self::Morphism> {
        Decode::decode(env)
    }

    fn measure(config: &AuditConfig) -> Result<Box<dyn InfoMeasure<FinSet>>> {
        let base = config.log_base;
        let name = config.measure.as_str();
        Ok(match name {
            "shannon" => Box::new(Shannon { base }),
            "hartley" => Box::new(Hartley { base }),
            "source_size" => Box::new(SourceSize),
            "constant" => Box::new(Constant(1)),
            _ => {
                if let Some(c) = name.strip_prefix("constant:") {
                    let c: u64 = c.parse().map_err(|_| unknown(config))?;
                    return Ok(Box::new(Constant(c)));
                }
                let rest = name.strip_prefix("afn:").ok_or_else(|| unknown(config))?;
                let (l, m) = rest.split_once(',').ok_or_else(|| unknown(config))?;
                let (Some(l), Some(m)) = (parse_coefficient(l), parse_coefficient(m)) else {
                    return Err(unknown(config));
                };
                Box::new(AfnCombination::new(l, m, base)?)
            }
        })
    }
}

impl Audited for NoisyFinSet {
    fn decode(env: &Envelope) -> Result<Self::Morphism> {
        Decode::decode(env)
    }

    fn measure(config: &AuditConfig) -> Result<Box<dyn InfoMeasure<NoisyFinSet>>> {
        let base = config.log_base;
        Ok(match config.measure.as_str() {
            "ni" => Box::new(NoisyInformation { base }),
            "capacity" => Box::new(NoisyCapacity { eps: config.epsilon, base }),
            _ => return Err(unknown(config)),
        })
    }

    /// Compares the closed form of noisy information with the
    /// definition on every morphism of the corpus.
    fn findings(config: &AuditConfig, corpus: &[Self::Morphism]) -> Vec<Finding> {
        if config.measure != "ni" {
            return Vec::new();
        }
        let mut count = 0usize;
        let mut worst: Option<(f64, &Self::Morphism)> = None;
        for f in corpus {
            let c = closed_form_ni(f, config.log_base);
            if c.delta.abs() > config.tolerance {
                count += 1;
                if worst.is_none_or(|(d, _)| c.delta.abs() > d) {
                    worst = Some((c.delta.abs(), f));
                }
            }
        }
        if count == 0 {
            return Vec::new();
        }
        let (d, f) = worst.expect("at least one discrepancy");
        let c = closed_form_ni(f, config.log_base);
        vec![Finding {
            topic: "ni_closed_form".into(),
            message: format!(
                "the closed form of noisy information disagrees with the definition on {count} of {} morphisms; largest gap {d:?}",
                corpus.len()
            ),
            data: json!({
                "disagreements": count,
                "morphisms": corpus.len(),
                "worst": NoisyFinSet.to_json(f),
                "closed_form": format!("{:?}", c.closed_form),
                "definitional": format!("{:?}", c.definitional),
            }),
        }]
    }
}

impl Audited for FinProb {
    fn decode(env: &Envelope) -> Result<Self::Morphism> {
        Decode::decode(env)
    }

    fn measure(config: &AuditConfig) -> Result<Box<dyn InfoMeasure<FinProb>>> {
        Err(unknown(config))
    }
}

impl Audited for NoisyFinProb {
    fn decode(env: &Envelope) -> Result<Self::Morphism> {
        Decode::decode(env)
    }

    fn measure(config: &AuditConfig) -> Result<Box<dyn InfoMeasure<NoisyFinProb>>> {
        let base = config.log_base;
        Ok(match config.measure.as_str() {
            "continuous_ni" => Box::new(ContinuousNoisyInformation { base }),
            "continuous_capacity" => Box::new(ContinuousCapacity { eps: config.epsilon, base }),
            _ => return Err(unknown(config)),
        })
    }
}

impl Audited for FinVect {
    fn decode(env: &Envelope) -> Result<Self::Morphism> {
        Decode::decode(env)
    }

    fn measure(config: &AuditConfig) -> Result<Box<dyn InfoMeasure<FinVect>>> {
        match config.measure.as_str() {
            "rank" => Ok(Box::new(Rank)),
            _ => Err(unknown(config)),
        }
    }
}

impl Audited for Dual<FinSet> {
    fn decode(env: &Envelope) -> Result<Self::Morphism> {
        Decode::decode(env)
    }

    fn measure(config: &AuditConfig) -> Result<Box<dyn InfoMeasure<Dual<FinSet>>>> {
        match config.measure.as_str() {
            "image_cardinality" => Ok(Box::new(ImageCardinality)),
            _ => Err(unknown(config)),
        }
    }
}

impl Audited for Dual<FinVect> {
    fn decode(env: &Envelope) -> Result<Self::Morphism> {
        Decode::decode(env)
    }

    fn measure(config: &AuditConfig) -> Result<Box<dyn InfoMeasure<Dual<FinVect>>>> {
        match config.measure.as_str() {
            "image_dimension" => Ok(Box::new(ImageDimension)),
            _ => Err(unknown(config)),
        }
    }
}

/// Work to do once the category type is known.
pub(crate) trait Visitor {
    type Out;
    fn visit<C: Audited>(self, cat: &C) -> Result<Self::Out>;
}

pub(crate) fn dispatch<V: Visitor>(config: &AuditConfig, v: V) -> Result<V::Out> {
    match config.category {
        CategoryId::Finset => v.visit(&FinSet),
        CategoryId::NoisyFinset => v.visit(&NoisyFinSet),
        CategoryId::Finprob => v.visit(&FinProb),
        CategoryId::NoisyFinprob => v.visit(&NoisyFinProb),
        CategoryId::Finvect => v.visit(&FinVect::new(config.field_or_default())),
        CategoryId::FinsetDual => v.visit(&Dual(FinSet)),
        CategoryId::FinvectDual => v.visit(&Dual(FinVect::new(config.field_or_default()))),
    }
}
