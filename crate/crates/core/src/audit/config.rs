use serde::{Deserialize, Serialize};

use crate::category::CategoryId;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::measure::LogBase;
use crate::sample::Mode;

/// Everything that determines an audit run. Two runs with equal configs
/// produce identical reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    pub category: CategoryId,
    pub measure: String,
    pub mode: Mode,
    /// Largest object: set size, noise-space size, or dimension.
    pub max_size: usize,
    /// Tuples per check in random modes.
    pub trials: u64,
    pub seed: u64,
    #[serde(with = "real")]
    pub tolerance: f64,
    pub log_base: LogBase,
    /// Scalar field for `finvect` and `finvect_dual`; `gf2` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<Field>,
    /// Accuracy of the capacity solver.
    #[serde(with = "real")]
    pub epsilon: f64,
    /// Exhaustive tuple spaces larger than this are cut down to
    /// representatives of isomorphism classes.
    pub tuple_budget: u64,
    /// Violations beyond this many per check are counted but not stored.
    pub max_recorded_violations: usize,
}

impl AuditConfig {
    pub fn new(category: CategoryId, measure: impl Into<String>) -> Self {
        AuditConfig {
            category,
            measure: measure.into(),
            mode: Mode::Exhaustive,
            max_size: 3,
            trials: 1000,
            seed: 0,
            tolerance: 1e-9,
            log_base: LogBase::Two,
            field: None,
            epsilon: crate::capacity::DEFAULT_EPSILON,
            tuple_budget: 2_000_000,
            max_recorded_violations: 100,
        }
    }

    pub fn mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn max_size(mut self, n: usize) -> Self {
        self.max_size = n;
        self
    }

    pub fn trials(mut self, n: u64) -> Self {
        self.trials = n;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self
    }

    pub fn field(mut self, field: Field) -> Self {
        self.field = Some(field);
        self
    }

    pub fn log_base(mut self, base: LogBase) -> Self {
        self.log_base = base;
        self
    }

    pub fn epsilon(mut self, eps: f64) -> Self {
        self.epsilon = eps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return bad(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if !(self.epsilon > 0.0) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.mode == Mode::MeasureCompatible && self.category != CategoryId::NoisyFinset {
            return bad("measure_compatible mode applies to noisy_finset only".into());
        }
        let vect = matches!(self.category, CategoryId::Finvect | CategoryId::FinvectDual);
        if self.field.is_some() && !vect {
            return bad(format!("category {} takes no field", self.category));
        }
        Ok(())
    }

    pub(crate) fn field_or_default(&self) -> Field {
        self.field.unwrap_or(Field::GF2)
    }
}

/// `f64` as its shortest round-trip decimal string.
pub(crate) mod real {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn to_string(x: f64) -> String {
        format!("{x:?}")
    }

    pub fn from_str(s: &str) -> Option<f64> {
        s.parse().ok()
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_string(*x))
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Str(String),
        Num(f64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Str(s) => from_str(&s).ok_or_else(|| de::Error::custom(format!("`{s}` is not a real number"))),
        }
    }

    pub mod option {
        use super::*;
        use serde::Serialize;

        pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            x.map(to_string).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            match Option::<String>::deserialize(d)? {
                None => Ok(None),
                Some(s) => from_str(&s).map(Some).ok_or_else(|| de::Error::custom(format!("`{s}` is not a real number"))),
            }
        }
    }
}
