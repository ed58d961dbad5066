//! Opposite categories. A dual morphism `f*: A → B` is a base morphism
//! `f: B → A`; composition reverses, products are base coproducts and the
//! terminal object is the base initial object.
//!
//! For finite sets the internal product `f* ×_A g*` is the case split
//! `f +_A g: B ⊔ C → A` and the external product is `f +̂ g: B ⊔ D → A ⊔ C`.
//! For vector spaces these are `[f | g]` and the block diagonal.

use serde::{Deserialize, Serialize};

use crate::category::{ArrowIso, Category, CategoryId, Enumerate, IsoWitness, ProductCone};
use crate::error::{Error, Result};
use crate::finset::{FinSet, FinSetMorphism};
use crate::finvect::{FinVect, LinearMorphism};
use crate::json::{field, Decode, Envelope};
use crate::measure::{InfoMeasure, Measured};
use crate::sample::{Sample, SampleInto, SampleParams, TrialRng};

/// Base categories with binary coproducts and an initial object.
pub trait Cocartesian: Category {
    fn dual_id(&self) -> CategoryId;

    /// `x ⊔ y` with its two injections.
    fn coproduct(&self, x: &Self::Object, y: &Self::Object) -> (Self::Object, Self::Morphism, Self::Morphism);

    /// The copairing `B ⊔ C → A` of `f: B → A` and `g: C → A`.
    fn copair(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Self::Morphism>;

    fn initial_object(&self) -> Self::Object;

    fn unique_from_initial(&self, obj: &Self::Object) -> Self::Morphism;

    /// Whether some `s` satisfies `f ∘ g ∘ s = f`: the section condition
    /// read in the opposite category.
    fn cosection_exists(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<bool>;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualMorphism<M> {
    pub inner: M,
}

impl<M> DualMorphism<M> {
    pub fn new(inner: M) -> Self {
        DualMorphism { inner }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Dual<C>(pub C);

impl<C: Cocartesian> Category for Dual<C> {
    type Object = C::Object;
    type Morphism = DualMorphism<C::Morphism>;

    fn id(&self) -> CategoryId {
        self.0.dual_id()
    }

    fn domain(&self, f: &Self::Morphism) -> C::Object {
        self.0.codomain(&f.inner)
    }

    fn codomain(&self, f: &Self::Morphism) -> C::Object {
        self.0.domain(&f.inner)
    }

    fn identity(&self, obj: &C::Object) -> Result<Self::Morphism> {
        Ok(DualMorphism::new(self.0.identity(obj)?))
    }

    /// `g* ∘ f* = (f ∘ g)*`
    fn compose(&self, g: &Self::Morphism, f: &Self::Morphism) -> Result<Self::Morphism> {
        Ok(DualMorphism::new(self.0.compose(&f.inner, &g.inner)?))
    }

    fn product(&self, x: &C::Object, y: &C::Object) -> Option<ProductCone<C::Object, Self::Morphism>> {
        let (apex, i1, i2) = self.0.coproduct(x, y);
        Some(ProductCone { apex, first: DualMorphism::new(i1), second: DualMorphism::new(i2) })
    }

    fn internal_product(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Option<Self::Morphism>> {
        Ok(Some(DualMorphism::new(self.0.copair(&f.inner, &g.inner)?)))
    }

    fn terminal_object(&self) -> Option<C::Object> {
        Some(self.0.initial_object())
    }

    fn unique_to_terminal(&self, obj: &C::Object) -> Result<Self::Morphism> {
        Ok(DualMorphism::new(self.0.unique_from_initial(obj)))
    }

    fn is_arrow_isomorphic(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<bool> {
        self.0.is_arrow_isomorphic(&f.inner, &g.inner)
    }

    /// From a base square `g ∘ α = β ∘ f`: the dual square uses `β⁻¹` on the
    /// dual domains and `α⁻¹` on the dual codomains.
    fn arrow_isomorphism(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<Option<ArrowIso<Self::Morphism>>> {
        let Some(iso) = self.0.arrow_isomorphism(&f.inner, &g.inner)? else {
            return Ok(None);
        };
        let flip = |w: IsoWitness<C::Morphism>| IsoWitness {
            forward: DualMorphism::new(w.backward),
            backward: DualMorphism::new(w.forward),
        };
        Ok(Some(ArrowIso { domain: flip(iso.codomain), codomain: flip(iso.domain) }))
    }

    fn section_exists(&self, f: &Self::Morphism, g: &Self::Morphism) -> Result<bool> {
        self.0.cosection_exists(&f.inner, &g.inner)
    }

    fn encode(&self, f: &Self::Morphism) -> Envelope {
        let inner = self.0.encode(&f.inner);
        let payload = DualPayload { dual: true, inner: inner.clone() };
        Envelope::new(self.0.dual_id(), &inner.codomain, &inner.domain, &payload)
    }
}

impl<C: Enumerate + Cocartesian> Enumerate for Dual<C> {
    /// The base objects, plus the initial object (terminal here).
    fn objects_up_to(&self, max_size: usize) -> Result<Vec<C::Object>> {
        let mut objs = self.0.objects_up_to(max_size)?;
        let initial = self.0.initial_object();
        if !objs.contains(&initial) {
            objs.insert(0, initial);
        }
        Ok(objs)
    }

    fn homs(&self, dom: &C::Object, cod: &C::Object) -> Result<Vec<Self::Morphism>> {
        Ok(self.0.homs(cod, dom)?.into_iter().map(DualMorphism::new).collect())
    }

    fn hom_count(&self, dom: &C::Object, cod: &C::Object) -> Option<u128> {
        self.0.hom_count(cod, dom)
    }

    fn arrow_canonical(&self, f: &Self::Morphism) -> Option<Self::Morphism> {
        self.0.arrow_canonical(&f.inner).map(DualMorphism::new)
    }

    fn coslice_canonical(&self, f: &Self::Morphism) -> Option<Self::Morphism> {
        self.0.precompose_canonical(&f.inner).map(DualMorphism::new)
    }

    fn precompose_canonical(&self, f: &Self::Morphism) -> Option<Self::Morphism> {
        self.0.coslice_canonical(&f.inner).map(DualMorphism::new)
    }
}

impl<C: SampleInto + Cocartesian> Sample for Dual<C> {
    fn random_object(&self, rng: &mut TrialRng, p: &SampleParams) -> C::Object {
        self.0.random_object(rng, p)
    }

    fn random_morphism_from(&self, dom: &C::Object, rng: &mut TrialRng, p: &SampleParams) -> Self::Morphism {
        DualMorphism::new(self.0.random_morphism_into(dom, rng, p))
    }

    fn random_iso(&self, obj: &C::Object, rng: &mut TrialRng, p: &SampleParams) -> (C::Object, IsoWitness<Self::Morphism>) {
        let (other, w) = self.0.random_iso(obj, rng, p);
        (other, IsoWitness { forward: DualMorphism::new(w.backward), backward: DualMorphism::new(w.forward) })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DualPayload {
    dual: bool,
    inner: Envelope,
}

fn dual_of(id: CategoryId) -> Option<CategoryId> {
    match id {
        CategoryId::Finset => Some(CategoryId::FinsetDual),
        CategoryId::Finvect => Some(CategoryId::FinvectDual),
        _ => None,
    }
}

impl<M: Decode> Decode for DualMorphism<M> {
    fn decode(env: &Envelope) -> Result<Self> {
        let payload: DualPayload = field(&env.payload, "payload")?;
        if !payload.dual {
            return Err(Error::Parse("dual morphism payload must have \"dual\": true".into()));
        }
        let expected = dual_of(payload.inner.category).ok_or_else(|| {
            Error::Parse(format!("category {} has no dual", payload.inner.category))
        })?;
        env.expect(expected)?;
        if env.domain != payload.inner.codomain || env.codomain != payload.inner.domain {
            return Err(Error::InvalidMorphism(
                "dual domain and codomain must be the inner codomain and domain".into(),
            ));
        }
        Ok(DualMorphism::new(M::decode(&payload.inner)?))
    }
}

/// `f* ↦ |f(B)|`, the size of the image of the underlying map (no log).
#[derive(Debug, Clone, Copy, Default)]
pub struct ImageCardinality;

pub fn image_cardinality_info(f: &DualMorphism<FinSetMorphism>) -> usize {
    f.inner.image_size()
}

impl InfoMeasure<Dual<FinSet>> for ImageCardinality {
    fn name(&self) -> String {
        "image_cardinality".into()
    }

    fn exact(&self) -> bool {
        true
    }

    fn eval(&self, f: &DualMorphism<FinSetMorphism>) -> Result<Option<Measured>> {
        Ok(Some(Measured::count(image_cardinality_info(f) as u64)))
    }
}

/// `f* ↦ dim f(W)`, the rank of the underlying linear map.
#[derive(Debug, Clone, Copy, Default)]
pub struct ImageDimension;

pub fn image_dimension_info(f: &DualMorphism<LinearMorphism>) -> usize {
    f.inner.rank()
}

impl InfoMeasure<Dual<FinVect>> for ImageDimension {
    fn name(&self) -> String {
        "image_dimension".into()
    }

    fn exact(&self) -> bool {
        true
    }

    fn eval(&self, f: &DualMorphism<LinearMorphism>) -> Result<Option<Measured>> {
        Ok(Some(Measured::count(image_dimension_info(f) as u64)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrow::verify_iso;
    use crate::field::Field;

    fn d(cod: usize, map: &[usize]) -> DualMorphism<FinSetMorphism> {
        DualMorphism::new(FinSetMorphism::from_map(cod, map.to_vec()).unwrap())
    }

    #[test]
    fn finset_external_product_is_case_split() {
        let star = Dual(FinSet);
        let f = d(1, &[0, 0]);
        let g = d(1, &[0]);
        let p = star.external_product(&f, &g).unwrap().unwrap();
        assert_eq!(p.inner.map(), &[0, 0, 1]);
        assert_eq!((p.inner.domain(), p.inner.codomain()), (3, 2));
        // empty summand
        let e = d(0, &[]);
        let q = star.external_product(&e, &g).unwrap().unwrap();
        assert_eq!(q.inner, g.inner);
    }

    #[test]
    fn finset_internal_product_is_copairing() {
        let star = Dual(FinSet);
        let f = d(2, &[0]);
        let g = d(2, &[1]);
        assert_eq!(star.internal_product(&f, &g).unwrap().unwrap().inner.map(), &[0, 1]);
        let ff = star.internal_product(&f, &f).unwrap().unwrap();
        assert_eq!(ff.inner.map(), &[0, 0]);
        assert_eq!(ff.inner.image_size(), f.inner.image_size());
        assert!(star.internal_product(&f, &d(3, &[0])).is_err());
    }

    #[test]
    fn finvect_products_are_blocks() {
        let star = Dual(FinVect::new(Field::GF2));
        let f = DualMorphism::new(LinearMorphism::from_ints(Field::GF2, 1, 2, &[vec![1, 1]]).unwrap());
        let g = DualMorphism::new(LinearMorphism::from_ints(Field::GF2, 1, 1, &[vec![1]]).unwrap());
        let i = star.internal_product(&f, &g).unwrap().unwrap();
        assert_eq!(i.inner, LinearMorphism::from_ints(Field::GF2, 1, 3, &[vec![1, 1, 1]]).unwrap());
        let e = star.external_product(&f, &g).unwrap().unwrap();
        assert_eq!(e.inner, LinearMorphism::from_ints(Field::GF2, 2, 3, &[vec![1, 1, 0], vec![0, 0, 1]]).unwrap());
    }

    #[test]
    fn composition_reverses() {
        let star = Dual(FinSet);
        let f = d(2, &[0, 0, 1]); // f*: 2 → 3
        let g = d(3, &[2, 1, 0, 0]); // g*: 3 → 4
        let gf = star.compose(&g, &f).unwrap();
        assert_eq!(gf.inner, FinSet.compose(&f.inner, &g.inner).unwrap());
        assert_eq!((star.domain(&gf), star.codomain(&gf)), (2, 4));
    }

    #[test]
    fn terminal_is_empty_set() {
        let star = Dual(FinSet);
        let t = star.terminal_object().unwrap();
        assert_eq!(t, 0);
        for n in 0..4 {
            assert_eq!(star.homs(&n, &t).unwrap().len(), 1);
        }
        assert_eq!(Dual(FinVect::new(Field::GF2)).terminal_object(), Some(0));
    }

    #[test]
    fn measures() {
        assert_eq!(image_cardinality_info(&d(4, &[0, 1, 2, 3])), 4);
        assert_eq!(image_cardinality_info(&d(3, &[1, 1, 1])), 1);
        assert_eq!(image_cardinality_info(&d(2, &[0, 0, 1])), 2);
        let m = LinearMorphism::from_ints(Field::GF2, 3, 3, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        assert_eq!(image_dimension_info(&DualMorphism::new(m)), 2);
        assert_eq!(image_dimension_info(&DualMorphism::new(LinearMorphism::identity(Field::GF3, 3))), 3);
        assert_eq!(image_dimension_info(&DualMorphism::new(LinearMorphism::zero(Field::GF3, 2, 3))), 0);
    }

    #[test]
    fn witnesses_verify() {
        let star = Dual(FinSet);
        let hs = star.homs(&2, &3).unwrap();
        for f in &hs {
            for g in &hs {
                if let Some(w) = star.arrow_isomorphism(f, g).unwrap() {
                    assert!(verify_iso(&star, f, g, &w).unwrap());
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let star = Dual(FinSet);
        let f = d(2, &[0, 0, 1]);
        let env = star.encode(&f);
        assert_eq!(env.category, CategoryId::FinsetDual);
        assert_eq!(env.domain, serde_json::json!({"size": 2}));
        assert_eq!(env.payload["dual"], serde_json::json!(true));
        assert_eq!(DualMorphism::<FinSetMorphism>::decode(&env).unwrap(), f);
    }
}
