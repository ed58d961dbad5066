//! Noisy systems over finite probability spaces: objects `(M, μ)` with a
//! backwards measure preserving surjection `π: (M, μ) → (A, α)`; morphisms
//! are measure preserving maps of noise spaces.
//!
//! Noisy information is `∫ log dρ/d(α×β) dρ`, where `ρ` is the joint law of
//! `(π_A, π_B ∘ f)` under `μ`. On finite spaces the derivative is the ratio
//! of point masses `ρ(a,b) / α(a)β(b)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::{capacity, CapacityResult};
use crate::category::{require_common_domain, require_same, ArrowIso, Category, CategoryId, Enumerate, IsoWitness, ProductCone};
use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::finprob::{check_bmp, finprob_arrow_iso, pushforward, random_weights, FinProb, FinProbMorphism, FinProbObject, MapJson};
use crate::finset::{FinSet, FinSetMorphism};
use crate::json::{field, Decode, Envelope};
use crate::measure::{InfoMeasure, LogBase, Measured};
use crate::noisy::NoisyMorphism;
use crate::rational::{to_f64, Rational};
use crate::sample::{random_map, random_permutation, random_surjection, Sample, SampleParams, TrialRng};
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ObjectJson", into = "ObjectJson")]
pub struct NoisyProbObject {
    space: FinProbObject,
    messages: FinProbObject,
    pi: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectJson {
    m: FinProbObject,
    a: FinProbObject,
    pi: Vec<usize>,
}

impl TryFrom<ObjectJson> for NoisyProbObject {
    type Error = Error;

    fn try_from(j: ObjectJson) -> Result<Self> {
        NoisyProbObject::new(j.m, j.a, j.pi)
    }
}

impl From<NoisyProbObject> for ObjectJson {
    fn from(o: NoisyProbObject) -> Self {
        ObjectJson { m: o.space, a: o.messages, pi: o.pi }
    }
}

impl NoisyProbObject {
    pub fn new(space: FinProbObject, messages: FinProbObject, pi: Vec<usize>) -> Result<Self> {
        let top = FinSetMorphism::new(space.size(), messages.size(), pi.clone())
            .map_err(|e| Error::InvalidObject(e.to_string()))?;
        if top.image_size() != messages.size() {
            return Err(Error::InvalidObject("pi is not surjective".into()));
        }
        if !check_bmp(&pi, space.weights(), messages.weights()) {
            return Err(Error::InvalidObject("pi is not backwards measure preserving".into()));
        }
        Ok(NoisyProbObject { space, messages, pi })
    }

    /// `(M, μ)` with `α = π_*μ`.
    pub fn with_image_measure(space: FinProbObject, a: usize, pi: Vec<usize>) -> Result<Self> {
        FinSetMorphism::new(space.size(), a, pi.clone()).map_err(|e| Error::InvalidObject(e.to_string()))?;
        let messages = FinProbObject::unchecked(pushforward(&pi, space.weights(), a));
        Self::new(space, messages, pi)
    }

    pub fn space(&self) -> &FinProbObject {
        &self.space
    }

    pub fn messages(&self) -> &FinProbObject {
        &self.messages
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NoisyProbMorphism {
    source: NoisyProbObject,
    target: NoisyProbObject,
    map: Vec<usize>,
}

impl NoisyProbMorphism {
    pub fn new(source: NoisyProbObject, target: NoisyProbObject, map: Vec<usize>) -> Result<Self> {
        FinProbMorphism::new(source.space.clone(), target.space.clone(), map.clone())?;
        Ok(NoisyProbMorphism { source, target, map })
    }

    pub fn source(&self) -> &NoisyProbObject {
        &self.source
    }

    pub fn target(&self) -> &NoisyProbObject {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    fn top(&self) -> FinProbMorphism {
        FinProbMorphism::unchecked(self.source.space.clone(), self.target.space.clone(), self.map.clone())
    }

    /// `ρ(a, b) = μ(π_A⁻¹(a) ∩ f⁻¹(π_B⁻¹(b)))`, row-major.
    pub fn joint(&self) -> Vec<Rational> {
        let nb = self.target.messages.size();
        let mut rho = vec![Rational::zero(); self.source.messages.size() * nb];
        for (x, &y) in self.map.iter().enumerate() {
            let (a, b) = (self.source.pi[x], self.target.pi[y]);
            rho[a * nb + b] += &self.source.space.weights()[x];
        }
        rho
    }
}

impl Decode for NoisyProbMorphism {
    fn decode(env: &Envelope) -> Result<Self> {
        env.expect(CategoryId::NoisyFinprob)?;
        let source: NoisyProbObject = field(&env.domain, "domain")?;
        let target: NoisyProbObject = field(&env.codomain, "codomain")?;
        let payload: MapJson = field(&env.payload, "payload")?;
        NoisyProbMorphism::new(source, target, payload.map)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NoisyFinProb;

impl NoisyFinProb {
    fn wrap(&self, source: &NoisyProbObject, target: &NoisyProbObject, map: &[usize]) -> NoisyProbMorphism {
        NoisyProbMorphism { source: source.clone(), target: target.clone(), map: map.to_vec() }
    }
}

impl Category for NoisyFinProb {
    type Object = NoisyProbObject;
    type Morphism = NoisyProbMorphism;

    fn id(&self) -> CategoryId {
        CategoryId::NoisyFinprob
    }

    fn domain(&self, f: &NoisyProbMorphism) -> NoisyProbObject {
        f.source.clone()
    }

    fn codomain(&self, f: &NoisyProbMorphism) -> NoisyProbObject {
        f.target.clone()
    }

    fn identity(&self, obj: &NoisyProbObject) -> Result<NoisyProbMorphism> {
        Ok(self.wrap(obj, obj, &(0..obj.space.size()).collect::<Vec<_>>()))
    }

    fn compose(&self, g: &NoisyProbMorphism, f: &NoisyProbMorphism) -> Result<NoisyProbMorphism> {
        require_same("codomain of f vs domain of g", &f.target, &g.source)?;
        let map: Vec<usize> = f.map.iter().map(|&x| g.map[x]).collect();
        Ok(self.wrap(&f.source, &g.target, &map))
    }

    fn product(&self, x: &NoisyProbObject, y: &NoisyProbObject) -> Option<ProductCone<NoisyProbObject, NoisyProbMorphism>> {
        let space = FinProb.product(&x.space, &y.space)?;
        let messages = FinProb.product(&x.messages, &y.messages)?;
        let (my, ay) = (y.space.size(), y.messages.size());
        let pi = (0..space.apex.size()).map(|k| x.pi[k / my] * ay + y.pi[k % my]).collect();
        let apex = NoisyProbObject { space: space.apex, messages: messages.apex, pi };
        Some(ProductCone {
            first: self.wrap(&apex, x, space.first.map()),
            second: self.wrap(&apex, y, space.second.map()),
            apex,
        })
    }

    fn internal_product(&self, f: &NoisyProbMorphism, g: &NoisyProbMorphism) -> Result<Option<NoisyProbMorphism>> {
        require_common_domain(&f.source, &g.source)?;
        let Some(top) = FinProb.internal_product(&f.top(), &g.top())? else {
            return Ok(None);
        };
        let cone = self.product(&f.target, &g.target).expect("products exist");
        Ok(Some(self.wrap(&f.source, &cone.apex, top.map())))
    }

    fn external_product(&self, f: &NoisyProbMorphism, g: &NoisyProbMorphism) -> Result<Option<NoisyProbMorphism>> {
        let src = self.product(&f.source, &g.source).expect("products exist");
        let dst = self.product(&f.target, &g.target).expect("products exist");
        let top = FinSet
            .external_product(&f.top().top(), &g.top().top())?
            .expect("finite sets have products");
        Ok(Some(self.wrap(&src.apex, &dst.apex, top.map())))
    }

    fn terminal_object(&self) -> Option<NoisyProbObject> {
        let one = FinProb.terminal_object()?;
        Some(NoisyProbObject { space: one.clone(), messages: one, pi: vec![0] })
    }

    fn unique_to_terminal(&self, obj: &NoisyProbObject) -> Result<NoisyProbMorphism> {
        let t = self.terminal_object().expect("terminal object");
        Ok(self.wrap(obj, &t, &vec![0; obj.space.size()]))
    }

    /// Isomorphisms are measure preserving bijections of the noise spaces.
    fn is_arrow_isomorphic(&self, f: &NoisyProbMorphism, g: &NoisyProbMorphism) -> Result<bool> {
        FinProb.is_arrow_isomorphic(&f.top(), &g.top())
    }

    fn arrow_isomorphism(&self, f: &NoisyProbMorphism, g: &NoisyProbMorphism) -> Result<Option<ArrowIso<NoisyProbMorphism>>> {
        let Some((alpha, beta)) = finprob_arrow_iso(&f.top(), &g.top()) else {
            return Ok(None);
        };
        let lift = |p: &[usize], x: &NoisyProbObject, y: &NoisyProbObject| {
            let w = crate::finset::permutation_iso(p);
            IsoWitness { forward: self.wrap(x, y, w.forward.map()), backward: self.wrap(y, x, w.backward.map()) }
        };
        Ok(Some(ArrowIso {
            domain: lift(&alpha, &f.source, &g.source),
            codomain: lift(&beta, &f.target, &g.target),
        }))
    }

    fn section_exists(&self, f: &NoisyProbMorphism, g: &NoisyProbMorphism) -> Result<bool> {
        require_same("codomain of f vs domain of g", &f.target, &g.source)?;
        FinProb.section_exists(&f.top(), &g.top())
    }

    fn encode(&self, f: &NoisyProbMorphism) -> Envelope {
        Envelope::new(CategoryId::NoisyFinprob, &f.source, &f.target, &MapJson { map: f.map.clone() })
    }
}

impl Enumerate for NoisyFinProb {
    fn objects_up_to(&self, _max_size: usize) -> Result<Vec<NoisyProbObject>> {
        Err(Error::InvalidConfig("noisy probability spaces cannot be enumerated".into()))
    }

    fn homs(&self, dom: &NoisyProbObject, cod: &NoisyProbObject) -> Result<Vec<NoisyProbMorphism>> {
        Ok(FinProb
            .homs(&dom.space, &cod.space)?
            .into_iter()
            .map(|m| self.wrap(dom, cod, m.map()))
            .collect())
    }

    fn hom_count(&self, dom: &NoisyProbObject, cod: &NoisyProbObject) -> Option<u128> {
        FinProb.hom_count(&dom.space, &cod.space)
    }
}

fn random_object_on(space: FinProbObject, rng: &mut TrialRng) -> NoisyProbObject {
    let m = space.size();
    let a = rng.random_range(1..=m);
    let pi = random_surjection(m, a, rng);
    let messages = FinProbObject::unchecked(pushforward(&pi, space.weights(), a));
    NoisyProbObject { space, messages, pi }
}

impl Sample for NoisyFinProb {
    fn random_object(&self, rng: &mut TrialRng, p: &SampleParams) -> NoisyProbObject {
        let m = rng.random_range(1..=p.max_size.max(1));
        let space = FinProbObject::unchecked(random_weights(m, rng));
        random_object_on(space, rng)
    }

    fn random_morphism_from(&self, dom: &NoisyProbObject, rng: &mut TrialRng, p: &SampleParams) -> NoisyProbMorphism {
        let n = rng.random_range(1..=p.max_size.max(1));
        let map = random_map(dom.space.size(), n, rng);
        let target = random_object_on(dom.space.pushforward(&map, n), rng);
        self.wrap(dom, &target, &map)
    }

    fn random_iso(&self, obj: &NoisyProbObject, rng: &mut TrialRng, _p: &SampleParams) -> (NoisyProbObject, IsoWitness<NoisyProbMorphism>) {
        let m = obj.space.size();
        let perm = random_permutation(m, rng);
        let other = random_object_on(obj.space.pushforward(&perm, m), rng);
        let w = crate::finset::permutation_iso(&perm);
        let iso = IsoWitness {
            forward: self.wrap(obj, &other, w.forward.map()),
            backward: self.wrap(&other, obj, w.backward.map()),
        };
        (other, iso)
    }
}

/// The noisy finite set `f` with the normalized counting measure on its
/// source; everything else is pushed forward along `f` and the `π`s.
pub fn embed_uniform(f: &NoisyMorphism) -> NoisyProbMorphism {
    let (src, dst) = (f.source(), f.target());
    let mu = FinProbObject::uniform(src.m()).expect("noise spaces are nonempty");
    let nu = mu.pushforward(f.map(), dst.m());
    let source = NoisyProbObject {
        messages: mu.pushforward(src.pi(), src.a()),
        space: mu,
        pi: src.pi().to_vec(),
    };
    let target = NoisyProbObject {
        messages: nu.pushforward(dst.pi(), dst.a()),
        space: nu,
        pi: dst.pi().to_vec(),
    };
    NoisyProbMorphism { source, target, map: f.map().to_vec() }
}

/// `Σ ρ(a,b) log(ρ(a,b) / α(a)β(b))`, or `None` when `ρ` is not absolutely
/// continuous with respect to `α × β`.
pub fn continuous_noisy_information(f: &NoisyProbMorphism, base: LogBase) -> Option<f64> {
    let rho = f.joint();
    let alpha = f.source.messages.weights();
    let beta = pushforward(&f.target.pi, f.target.space.weights(), f.target.messages.size());
    let nb = beta.len();
    let mut terms: Vec<(Rational, Rational)> = Vec::new();
    for (i, r) in rho.iter().enumerate() {
        if r.is_zero() {
            continue;
        }
        let prod = &alpha[i / nb] * &beta[i % nb];
        if prod.is_zero() {
            return None;
        }
        terms.push((r.clone(), r / prod));
    }
    terms.sort();
    let mut sum = 0.0;
    for (r, q) in terms {
        if q != Rational::from_integer(1.into()) {
            sum += to_f64(&r) * base.log(to_f64(&q));
        }
    }
    Some(sum + 0.0)
}

/// `P(b|a) = ρ(a,b) / α(a)`.
pub fn continuous_channel(f: &NoisyProbMorphism) -> Result<Channel> {
    let rho = f.joint();
    let nb = f.target.messages.size();
    let alpha = f.source.messages.weights();
    let mut rows = Vec::with_capacity(alpha.len());
    for (a, w) in alpha.iter().enumerate() {
        if w.is_zero() {
            return Err(Error::ZeroMassFiber(a));
        }
        rows.push(rho[a * nb..(a + 1) * nb].iter().map(|r| to_f64(&(r / w))).collect());
    }
    Channel::new(rows)
}

pub fn continuous_capacity(f: &NoisyProbMorphism, eps: f64) -> Result<CapacityResult> {
    capacity(&continuous_channel(f)?, eps)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ContinuousNoisyInformation {
    pub base: LogBase,
}

impl InfoMeasure<NoisyFinProb> for ContinuousNoisyInformation {
    fn name(&self) -> String {
        "continuous_ni".into()
    }

    fn eval(&self, f: &NoisyProbMorphism) -> Result<Option<Measured>> {
        Ok(continuous_noisy_information(f, self.base).map(Measured::real))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ContinuousCapacity {
    pub eps: f64,
    pub base: LogBase,
}

impl InfoMeasure<NoisyFinProb> for ContinuousCapacity {
    fn name(&self) -> String {
        "continuous_capacity".into()
    }

    /// Undefined when some message has zero mass.
    fn eval(&self, f: &NoisyProbMorphism) -> Result<Option<Measured>> {
        match continuous_capacity(f, self.eps) {
            Ok(r) => Ok(Some(Measured::real(self.base.from_bits(r.capacity)))),
            Err(Error::ZeroMassFiber(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noisy::{noisy_information, NoisyFinSet, NoisyObject};
    use crate::rational::ratio;

    fn two_point(w: (i64, i64)) -> NoisyProbMorphism {
        let space = FinProbObject::new(vec![ratio(w.0, w.1), ratio(w.1 - w.0, w.1)]).unwrap();
        let obj = NoisyProbObject::new(space.clone(), space, vec![0, 1]).unwrap();
        NoisyFinProb.identity(&obj).unwrap()
    }

    #[test]
    fn object_validation() {
        let m = FinProbObject::uniform(2).unwrap();
        let a = FinProbObject::new(vec![ratio(1, 4), ratio(3, 4)]).unwrap();
        assert!(NoisyProbObject::new(m.clone(), a, vec![0, 1]).is_err());
        assert!(NoisyProbObject::new(m.clone(), FinProbObject::uniform(2).unwrap(), vec![0, 0]).is_err());
        let json = r#"{"m":{"size":2,"weights":["1/2","1/2"]},"a":{"size":1,"weights":["1"]},"pi":[0,0]}"#;
        let o: NoisyProbObject = serde_json::from_str(json).unwrap();
        assert_eq!(serde_json::to_string(&o).unwrap(), json);
    }

    #[test]
    fn noiseless_examples() {
        assert_eq!(continuous_noisy_information(&two_point((1, 2)), LogBase::Two), Some(1.0));
        let one = NoisyFinProb.terminal_object().unwrap();
        let id = NoisyFinProb.identity(&one).unwrap();
        assert_eq!(continuous_noisy_information(&id, LogBase::Two), Some(0.0));
        let r = continuous_capacity(&two_point((1, 2)), 1e-9).unwrap();
        assert!((r.capacity - 1.0).abs() <= 1e-9);
        // Capacity does not depend on the prior.
        let r = continuous_capacity(&two_point((1, 5)), 1e-9).unwrap();
        assert!((r.capacity - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn independence_gives_zero() {
        let zero = NoisyMorphism::new(
            NoisyObject::new(4, 2, vec![0, 0, 1, 1]).unwrap(),
            NoisyObject::new(4, 2, vec![0, 1, 0, 1]).unwrap(),
            vec![0, 1, 2, 3],
        )
        .unwrap();
        let e = embed_uniform(&zero);
        assert_eq!(continuous_noisy_information(&e, LogBase::Two), Some(0.0));
        assert!(continuous_capacity(&e, 1e-9).unwrap().capacity.abs() <= 1e-9);
    }

    #[test]
    fn constant_output_has_no_capacity() {
        let space = FinProbObject::new(vec![ratio(1, 3), ratio(2, 3)]).unwrap();
        let src = NoisyProbObject::new(space.clone(), space, vec![0, 1]).unwrap();
        let f = NoisyFinProb.unique_to_terminal(&src).unwrap();
        assert_eq!(continuous_capacity(&f, 1e-9).unwrap().capacity, 0.0);
    }

    #[test]
    fn bsc_through_noise() {
        // M = A × {0..9}; the received bit flips on one noise value in ten.
        let m = 20;
        let pi: Vec<usize> = (0..m).map(|x| x / 10).collect();
        let map: Vec<usize> = (0..m).map(|x| if x % 10 == 0 { 1 - x / 10 } else { x / 10 }).collect();
        let src = NoisyObject::new(m, 2, pi).unwrap();
        let f = NoisyMorphism::new(src, NoisyObject::noiseless(2).unwrap(), map).unwrap();
        let r = continuous_capacity(&embed_uniform(&f), 1e-9).unwrap();
        assert!((r.capacity - 0.531004).abs() < 1e-6);
    }

    #[test]
    fn embedding_matches_counting_definition() {
        let f = NoisyMorphism::new(
            NoisyObject::new(5, 3, vec![0, 1, 2, 2, 1]).unwrap(),
            NoisyObject::new(3, 2, vec![1, 0, 1]).unwrap(),
            vec![0, 0, 2, 1, 2],
        )
        .unwrap();
        let ni = noisy_information(&f, LogBase::Two);
        let c = continuous_noisy_information(&embed_uniform(&f), LogBase::Two).unwrap();
        assert!((ni - c).abs() < 1e-12);
        let id = NoisyFinSet.identity(f.source()).unwrap();
        let e = embed_uniform(&id);
        assert_eq!(NoisyFinProb.identity(e.source()).unwrap(), e);
    }
}
