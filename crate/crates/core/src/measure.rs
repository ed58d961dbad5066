//! Information measures: named partial functions from morphisms to
//! nonnegative reals.
//!
//! A measure may be undefined on some morphisms (`Ok(None)`), e.g. Shannon
//! entropy of a map out of the empty set.

use serde::{Deserialize, Serialize};

use crate::category::Category;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    /// Bits.
    #[default]
    #[serde(rename = "2")]
    Two,
    /// Nats.
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }

    /// Converts a quantity measured in bits into this base.
    pub fn from_bits(self, bits: f64) -> f64 {
        match self {
            LogBase::Two => bits,
            LogBase::E => bits * std::f64::consts::LN_2,
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            _ => Err(crate::error::Error::Parse(format!("log base must be `2` or `e`, got `{s}`"))),
        }
    }
}

/// A measure value, optionally with a structural key.
///
/// Keys let the audit decide equality exactly. Equal keys always mean equal
/// values. For two morphisms where one refines the other (`g ∘ f` versus
/// `f`, `f ×_A f` versus `f`) unequal keys mean unequal values.
#[derive(Debug, Clone, PartialEq)]
pub struct Measured {
    pub value: f64,
    pub key: Option<Vec<u64>>,
}

impl Measured {
    pub fn real(value: f64) -> Self {
        Measured { value, key: None }
    }

    pub fn keyed(value: f64, key: Vec<u64>) -> Self {
        Measured { value, key: Some(key) }
    }

    /// An integer-valued measure: the value is its own key.
    pub fn count(n: u64) -> Self {
        Measured { value: n as f64, key: Some(vec![n]) }
    }
}

pub trait InfoMeasure<C: Category>: Send + Sync {
    fn name(&self) -> String;

    /// Values are integers computed without rounding, so every comparison
    /// can be made with tolerance zero.
    fn exact(&self) -> bool {
        false
    }

    fn eval(&self, f: &C::Morphism) -> Result<Option<Measured>>;

    fn value(&self, f: &C::Morphism) -> Result<Option<f64>> {
        Ok(self.eval(f)?.map(|m| m.value))
    }
}

/// `Σ -p log p` over positive counts summing to `total`, accumulated in
/// ascending order of count so that the result depends only on the multiset.
pub(crate) fn entropy_of_counts(sorted_counts: &[usize], total: usize, base: LogBase) -> f64 {
    let n = total as f64;
    let mut h = 0.0;
    for &k in sorted_counts {
        if k == 0 {
            continue;
        }
        let p = k as f64 / n;
        h -= p * base.log(p);
    }
    // -0.0 (single fiber) prints as "-0"
    h + 0.0
}
