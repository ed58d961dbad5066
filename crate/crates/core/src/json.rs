//! The JSON envelope shared by every category, and a category-tagged
//! morphism for code that does not know the category statically.
//!
//! ```json
//! {"category": "finset", "domain": {"size": 3}, "codomain": {"size": 2},
//!  "payload": {"map": [0, 0, 1]}}
//! ```

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::category::{Category, CategoryId};
use crate::dual::{Dual, DualMorphism};
use crate::error::{Error, Result};
use crate::finprob::{FinProb, FinProbMorphism};
use crate::finset::{FinSet, FinSetMorphism};
use crate::finvect::{FinVect, LinearMorphism};
use crate::noisy::{NoisyFinSet, NoisyMorphism};
use crate::noisy_prob::{NoisyFinProb, NoisyProbMorphism};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub category: CategoryId,
    pub domain: Value,
    pub codomain: Value,
    pub payload: Value,
}

impl Envelope {
    pub(crate) fn new<D: Serialize, P: Serialize>(category: CategoryId, domain: &D, codomain: &D, payload: &P) -> Self {
        Envelope {
            category,
            domain: serde_json::to_value(domain).expect("serializable"),
            codomain: serde_json::to_value(codomain).expect("serializable"),
            payload: serde_json::to_value(payload).expect("serializable"),
        }
    }

    pub(crate) fn expect(&self, id: CategoryId) -> Result<()> {
        if self.category == id {
            Ok(())
        } else {
            Err(Error::CategoryMismatch { left: self.category, right: id })
        }
    }
}

/// Parsing a morphism out of its envelope, with full validation.
pub trait Decode: Sized {
    fn decode(env: &Envelope) -> Result<Self>;
}

pub(crate) fn field<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// A morphism of any of the implemented categories.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMorphism {
    Finset(FinSetMorphism),
    NoisyFinset(NoisyMorphism),
    Finprob(FinProbMorphism),
    NoisyFinprob(NoisyProbMorphism),
    Finvect(LinearMorphism),
    FinsetDual(DualMorphism<FinSetMorphism>),
    FinvectDual(DualMorphism<LinearMorphism>),
}

/// Applies `$body` with `$cat` bound to the category value and `$m` to the
/// payload of an [`AnyMorphism`].
macro_rules! dispatch {
    ($any:expr, $cat:ident, $m:ident => $body:expr) => {
        match $any {
            AnyMorphism::Finset($m) => { let $cat = FinSet; $body }
            AnyMorphism::NoisyFinset($m) => { let $cat = NoisyFinSet; $body }
            AnyMorphism::Finprob($m) => { let $cat = FinProb; $body }
            AnyMorphism::NoisyFinprob($m) => { let $cat = NoisyFinProb; $body }
            AnyMorphism::Finvect($m) => { let $cat = FinVect::new($m.field()); $body }
            AnyMorphism::FinsetDual($m) => { let $cat = Dual(FinSet); $body }
            AnyMorphism::FinvectDual($m) => { let $cat = Dual(FinVect::new($m.inner.field())); $body }
        }
    };
}

impl AnyMorphism {
    pub fn category(&self) -> CategoryId {
        dispatch!(self, cat, _m => cat.id())
    }

    pub fn from_envelope(env: &Envelope) -> Result<Self> {
        Ok(match env.category {
            CategoryId::Finset => AnyMorphism::Finset(FinSetMorphism::decode(env)?),
            CategoryId::NoisyFinset => AnyMorphism::NoisyFinset(NoisyMorphism::decode(env)?),
            CategoryId::Finprob => AnyMorphism::Finprob(FinProbMorphism::decode(env)?),
            CategoryId::NoisyFinprob => AnyMorphism::NoisyFinprob(NoisyProbMorphism::decode(env)?),
            CategoryId::Finvect => AnyMorphism::Finvect(LinearMorphism::decode(env)?),
            CategoryId::FinsetDual => AnyMorphism::FinsetDual(DualMorphism::<FinSetMorphism>::decode(env)?),
            CategoryId::FinvectDual => AnyMorphism::FinvectDual(DualMorphism::<LinearMorphism>::decode(env)?),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let env: Envelope = serde_json::from_str(text)?;
        Self::from_envelope(&env)
    }

    pub fn to_envelope(&self) -> Envelope {
        dispatch!(self, cat, m => cat.encode(m))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_envelope()).expect("envelopes always serialize")
    }

    /// `g ∘ f` across the tagged representation; both must live in the same
    /// category.
    pub fn compose(g: &AnyMorphism, f: &AnyMorphism) -> Result<AnyMorphism> {
        use AnyMorphism as A;
        Ok(match (g, f) {
            (A::Finset(g), A::Finset(f)) => A::Finset(FinSet.compose(g, f)?),
            (A::NoisyFinset(g), A::NoisyFinset(f)) => A::NoisyFinset(NoisyFinSet.compose(g, f)?),
            (A::Finprob(g), A::Finprob(f)) => A::Finprob(FinProb.compose(g, f)?),
            (A::NoisyFinprob(g), A::NoisyFinprob(f)) => A::NoisyFinprob(NoisyFinProb.compose(g, f)?),
            (A::Finvect(g), A::Finvect(f)) => A::Finvect(FinVect::new(f.field()).compose(g, f)?),
            (A::FinsetDual(g), A::FinsetDual(f)) => A::FinsetDual(Dual(FinSet).compose(g, f)?),
            (A::FinvectDual(g), A::FinvectDual(f)) => {
                A::FinvectDual(Dual(FinVect::new(f.inner.field())).compose(g, f)?)
            }
            _ => return Err(Error::CategoryMismatch { left: g.category(), right: f.category() }),
        })
    }
}
