//! The category interface every concrete category plugs into.
//!
//! A communication system is a morphism. Besides composition and identities
//! a category here knows its binary products (with projections), the
//! pairing of two morphisms out of a common object (the internal product),
//! its terminal object, when two morphisms are isomorphic as objects of the
//! arrow category, and when a relay `g` after `f` admits a section.
//!
//! Products are concrete, canonical representatives: finite sets pair
//! `(i, j) ↦ i·|Y| + j`, vector spaces use the block order `X ⊕ Y`.

use std::fmt::{self, Debug};
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::Envelope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CategoryId {
    Finset,
    NoisyFinset,
    Finprob,
    NoisyFinprob,
    Finvect,
    FinsetDual,
    FinvectDual,
}

impl CategoryId {
    pub const ALL: [CategoryId; 7] = [
        CategoryId::Finset,
        CategoryId::NoisyFinset,
        CategoryId::Finprob,
        CategoryId::NoisyFinprob,
        CategoryId::Finvect,
        CategoryId::FinsetDual,
        CategoryId::FinvectDual,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CategoryId::Finset => "finset",
            CategoryId::NoisyFinset => "noisy_finset",
            CategoryId::Finprob => "finprob",
            CategoryId::NoisyFinprob => "noisy_finprob",
            CategoryId::Finvect => "finvect",
            CategoryId::FinsetDual => "finset_dual",
            CategoryId::FinvectDual => "finvect_dual",
        }
    }
}

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CategoryId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CategoryId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown category `{s}`")))
    }
}

/// A pair of mutually inverse morphisms `forward: X → Y`, `backward: Y → X`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoWitness<M> {
    pub forward: M,
    pub backward: M,
}

/// An isomorphism `f ≅ g` in the arrow category: object isomorphisms on the
/// domains and on the codomains with `g ∘ domain.forward = codomain.forward ∘ f`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrowIso<M> {
    pub domain: IsoWitness<M>,
    pub codomain: IsoWitness<M>,
}

/// A binary product `apex` of two objects with its projections.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCone<O, M> {
    pub apex: O,
    pub first: M,
    pub second: M,
}

pub trait Category: Send + Sync {
    type Object: Clone + PartialEq + Debug + Send + Sync;
    type Morphism: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn id(&self) -> CategoryId;

    fn domain(&self, f: &Self::Morphism) -> Self::Object;

    fn codomain(&self, f: &Self::Morphism) -> Self::Object;

    fn identity(&self, obj: &Self::Object) -> Result<Self::Morphism>;

    /// `g ∘ f`. Fails with [`Error::ObjectMismatch`] unless `cod f = dom g`.
    fn compose(&self, g: &Self::Morphism, f: &Self::Morphism) -> Result<Self::Morphism>;

    fn product(&self, x: &Self::Object, y: &Self::Object)
        -> Option<ProductCone<Self::Object, Self::Morphism>>;

    /// The internal product `f ×_A g`: the product of `f` and `g` in the
    /// coslice category under their common domain `A`. `Ok(None)` when it
    /// does not exist.
    fn internal_product(&self, f: &Self::Morphism, g: &Self::Morphism)
        -> Result<Option<Self::Morphism>>;

    /// The external product `f ×̂ g`: the product of `f` and `g` in the arrow
    /// category. With binary products available it is the pairing of
    /// `f ∘ π₁` and `g ∘ π₂` out of `dom f × dom g`.
    fn external_product(&self, f: &Self::Morphism, g: &Self::Morphism)
        -> Result<Option<Self::Morphism>> {
        let (Some(src), Some(_)) = (
            self.product(&self.domain(f), &self.domain(g)),
            self.product(&self.codomain(f), &self.codomain(g)),
        ) else {
            return Ok(None);
        };
        let left = self.compose(f, &src.first)?;
        let right = self.compose(g, &src.second)?;
        self.internal_product(&left, &right)
    }

    fn terminal_object(&self) -> Option<Self::Object>;

    fn unique_to_terminal(&self, obj: &Self::Object) -> Result<Self::Morphism>;

    /// Whether `f` and `g` are isomorphic as objects of the arrow category.
    fn is_arrow_isomorphic(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<bool>;

    /// An explicit arrow isomorphism `f ≅ g`, when one exists and the search
    /// (if any) stays within budget.
    fn arrow_isomorphism(&self, f: &Self::Morphism, g: &Self::Morphism)
        -> Result<Option<ArrowIso<Self::Morphism>>>;

    /// Whether some `s: cod g → cod f` satisfies `s ∘ g ∘ f = f`.
    fn section_exists(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<bool>;

    fn encode(&self, f: &Self::Morphism) -> Envelope;

    fn to_json(&self, f: &Self::Morphism) -> serde_json::Value {
        serde_json::to_value(self.encode(f)).expect("envelopes always serialize")
    }
}

/// Categories whose hom-sets between small objects can be listed, and which
/// can name representatives of isomorphism classes of morphisms.
pub trait Enumerate: Category {
    /// Every object up to the size bound, in a fixed order.
    fn objects_up_to(&self, max_size: usize) -> Result<Vec<Self::Object>>;

    /// Every morphism `dom → cod`, in lexicographic payload order.
    fn homs(&self, dom: &Self::Object, cod: &Self::Object) -> Result<Vec<Self::Morphism>>;

    /// Number of morphisms `dom → cod`, if cheaply known.
    fn hom_count(&self, dom: &Self::Object, cod: &Self::Object) -> Option<u128> {
        let _ = (dom, cod);
        None
    }

    /// Representative of the class of `f` under `f ↦ β ∘ f ∘ α` with `α, β`
    /// object automorphisms.
    fn arrow_canonical(&self, f: &Self::Morphism) -> Option<Self::Morphism> {
        let _ = f;
        None
    }

    /// Representative of the class of `f` under `f ↦ k ∘ f` with `k` an
    /// automorphism of the codomain (isomorphism in the coslice category).
    fn coslice_canonical(&self, f: &Self::Morphism) -> Option<Self::Morphism> {
        let _ = f;
        None
    }

    /// Representative of the class of `f` under `f ↦ f ∘ α` with `α` an
    /// automorphism of the domain.
    fn precompose_canonical(&self, f: &Self::Morphism) -> Option<Self::Morphism> {
        let _ = f;
        None
    }
}

/// Does a section `s` with `s ∘ g ∘ f = f` exist? Decided by trying every
/// `s: cod g → cod f`. Refuses hom-sets larger than `10⁶`.
pub fn section_exists_brute<C: Enumerate>(cat: &C, f: &C::Morphism, g: &C::Morphism) -> Result<bool> {
    let gf = cat.compose(g, f)?;
    let (c, b) = (cat.codomain(g), cat.codomain(f));
    if let Some(n) = cat.hom_count(&c, &b) {
        if n > 1_000_000 {
            return Err(Error::SearchBudgetExceeded(format!(
                "{n} candidate sections exceed the 10^6 bound"
            )));
        }
    }
    for s in cat.homs(&c, &b)? {
        if cat.compose(&s, &gf)? == *f {
            return Ok(true);
        }
    }
    Ok(false)
}

pub(crate) fn require_same<T: PartialEq + Debug>(what: &str, a: &T, b: &T) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ObjectMismatch(format!("{what}: {a:?} vs {b:?}")))
    }
}

pub(crate) fn require_common_domain<T: PartialEq + Debug>(a: &T, b: &T) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DomainMismatch(format!("{a:?} vs {b:?}")))
    }
}
