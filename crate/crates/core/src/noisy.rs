//! Noisy finite sets: an object is a noise space `M` with a surjection
//! `π: M → A` onto the messages; a morphism is any map of noise spaces.
//!
//! Morphisms carry no condition relating `π_A` and `π_B` (noise may corrupt
//! the message), so two objects with the same `|M|` are isomorphic whatever
//! their `π`.

use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::capacity::{capacity, CapacityResult};
use crate::category::{require_common_domain, require_same, ArrowIso, Category, CategoryId, Enumerate, IsoWitness, ProductCone};
use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::finset::{all_maps, first_occurrence_labels, FinSet, FinSetMorphism};
use crate::json::{field, Decode, Envelope};
use crate::measure::{InfoMeasure, LogBase, Measured};
use crate::rational::{ratio, to_f64, Rational};
use crate::sample::{random_map, random_permutation, random_surjection, Sample, SampleParams, TrialRng};
use rand::seq::SliceRandom;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ObjectJson", into = "ObjectJson")]
pub struct NoisyObject {
    m: usize,
    a: usize,
    pi: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectJson {
    m: usize,
    a: usize,
    pi: Vec<usize>,
}

impl TryFrom<ObjectJson> for NoisyObject {
    type Error = Error;

    fn try_from(j: ObjectJson) -> Result<Self> {
        NoisyObject::new(j.m, j.a, j.pi)
    }
}

impl From<NoisyObject> for ObjectJson {
    fn from(o: NoisyObject) -> Self {
        ObjectJson { m: o.m, a: o.a, pi: o.pi }
    }
}

impl NoisyObject {
    pub fn new(m: usize, a: usize, pi: Vec<usize>) -> Result<Self> {
        if a == 0 || a > m {
            return Err(Error::InvalidObject(format!("need 1 <= |A| <= |M|, got |A| = {a}, |M| = {m}")));
        }
        if pi.len() != m {
            return Err(Error::InvalidObject(format!("pi has {} entries, |M| = {m}", pi.len())));
        }
        let mut hit = vec![false; a];
        for &x in &pi {
            if x >= a {
                return Err(Error::InvalidObject(format!("pi entry {x} outside A of size {a}")));
            }
            hit[x] = true;
        }
        if let Some(x) = hit.iter().position(|h| !h) {
            return Err(Error::InvalidObject(format!("pi is not surjective: message {x} has no preimage")));
        }
        Ok(NoisyObject { m, a, pi })
    }

    /// The noiseless object `M = A`, `π = id`.
    pub fn noiseless(n: usize) -> Result<Self> {
        Self::new(n, n, (0..n).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    /// `|π⁻¹(a)|` for each message.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.a];
        for &x in &self.pi {
            sizes[x] += 1;
        }
        sizes
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NoisyMorphism {
    source: NoisyObject,
    target: NoisyObject,
    map: Vec<usize>,
}

impl NoisyMorphism {
    pub fn new(source: NoisyObject, target: NoisyObject, map: Vec<usize>) -> Result<Self> {
        FinSetMorphism::new(source.m, target.m, map.clone())?;
        Ok(NoisyMorphism { source, target, map })
    }

    pub(crate) fn unchecked(source: NoisyObject, target: NoisyObject, map: Vec<usize>) -> Self {
        NoisyMorphism { source, target, map }
    }

    pub fn source(&self) -> &NoisyObject {
        &self.source
    }

    pub fn target(&self) -> &NoisyObject {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn top(&self) -> FinSetMorphism {
        FinSetMorphism::unchecked(self.source.m, self.target.m, self.map.clone())
    }

    /// `π_B ∘ f`, the received message as a function of the noise.
    pub fn received(&self) -> Vec<usize> {
        self.map.iter().map(|&x| self.target.pi[x]).collect()
    }

    /// Counts `|M_a ∩ M_b|` (row-major, `a` major), `|M_a|` and `|M_b|`.
    pub fn joint_counts(&self) -> JointCounts {
        let (na, nb) = (self.source.a, self.target.a);
        let mut joint = vec![0; na * nb];
        let mut row = vec![0; na];
        let mut col = vec![0; nb];
        for (x, b) in self.received().into_iter().enumerate() {
            let a = self.source.pi[x];
            joint[a * nb + b] += 1;
            row[a] += 1;
            col[b] += 1;
        }
        JointCounts { total: self.source.m, rows: na, cols: nb, joint, row, col }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointCounts {
    pub total: usize,
    pub rows: usize,
    pub cols: usize,
    pub joint: Vec<usize>,
    pub row: Vec<usize>,
    pub col: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapJson {
    map: Vec<usize>,
}

impl Decode for NoisyMorphism {
    fn decode(env: &Envelope) -> Result<Self> {
        env.expect(CategoryId::NoisyFinset)?;
        let source: NoisyObject = field(&env.domain, "domain")?;
        let target: NoisyObject = field(&env.codomain, "codomain")?;
        let payload: MapJson = field(&env.payload, "payload")?;
        NoisyMorphism::new(source, target, payload.map)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NoisyFinSet;

impl NoisyFinSet {
    fn wrap(&self, source: &NoisyObject, target: &NoisyObject, top: FinSetMorphism) -> NoisyMorphism {
        NoisyMorphism::unchecked(source.clone(), target.clone(), top.map().to_vec())
    }
}

impl Category for NoisyFinSet {
    type Object = NoisyObject;
    type Morphism = NoisyMorphism;

    fn id(&self) -> CategoryId {
        CategoryId::NoisyFinset
    }

    fn domain(&self, f: &NoisyMorphism) -> NoisyObject {
        f.source.clone()
    }

    fn codomain(&self, f: &NoisyMorphism) -> NoisyObject {
        f.target.clone()
    }

    fn identity(&self, obj: &NoisyObject) -> Result<NoisyMorphism> {
        Ok(NoisyMorphism::unchecked(obj.clone(), obj.clone(), (0..obj.m).collect()))
    }

    fn compose(&self, g: &NoisyMorphism, f: &NoisyMorphism) -> Result<NoisyMorphism> {
        require_same("codomain of f vs domain of g", &f.target, &g.source)?;
        let map = f.map.iter().map(|&x| g.map[x]).collect();
        Ok(NoisyMorphism::unchecked(f.source.clone(), g.target.clone(), map))
    }

    fn product(&self, x: &NoisyObject, y: &NoisyObject) -> Option<ProductCone<NoisyObject, NoisyMorphism>> {
        let cone = FinSet.product(&x.m, &y.m)?;
        let pi = (0..cone.apex).map(|k| x.pi[k / y.m] * y.a + y.pi[k % y.m]).collect();
        let apex = NoisyObject { m: cone.apex, a: x.a * y.a, pi };
        Some(ProductCone {
            first: self.wrap(&apex, x, cone.first),
            second: self.wrap(&apex, y, cone.second),
            apex,
        })
    }

    fn internal_product(&self, f: &NoisyMorphism, g: &NoisyMorphism) -> Result<Option<NoisyMorphism>> {
        require_common_domain(&f.source, &g.source)?;
        let Some(cone) = self.product(&f.target, &g.target) else {
            return Ok(None);
        };
        let top = FinSet.internal_product(&f.top(), &g.top())?.expect("finite sets have products");
        Ok(Some(self.wrap(&f.source, &cone.apex, top)))
    }

    fn external_product(&self, f: &NoisyMorphism, g: &NoisyMorphism) -> Result<Option<NoisyMorphism>> {
        let (Some(src), Some(dst)) = (self.product(&f.source, &g.source), self.product(&f.target, &g.target)) else {
            return Ok(None);
        };
        let top = FinSet.external_product(&f.top(), &g.top())?.expect("finite sets have products");
        Ok(Some(self.wrap(&src.apex, &dst.apex, top)))
    }

    fn terminal_object(&self) -> Option<NoisyObject> {
        Some(NoisyObject { m: 1, a: 1, pi: vec![0] })
    }

    fn unique_to_terminal(&self, obj: &NoisyObject) -> Result<NoisyMorphism> {
        let t = self.terminal_object().expect("terminal object");
        Ok(NoisyMorphism::unchecked(obj.clone(), t, vec![0; obj.m]))
    }

    /// Isomorphisms are bijections of noise spaces, so this is the finite-set
    /// criterion applied to the top maps.
    fn is_arrow_isomorphic(&self, f: &NoisyMorphism, g: &NoisyMorphism) -> Result<bool> {
        FinSet.is_arrow_isomorphic(&f.top(), &g.top())
    }

    fn arrow_isomorphism(&self, f: &NoisyMorphism, g: &NoisyMorphism) -> Result<Option<ArrowIso<NoisyMorphism>>> {
        let Some(iso) = FinSet.arrow_isomorphism(&f.top(), &g.top())? else {
            return Ok(None);
        };
        let lift = |w: IsoWitness<FinSetMorphism>, x: &NoisyObject, y: &NoisyObject| IsoWitness {
            forward: self.wrap(x, y, w.forward),
            backward: self.wrap(y, x, w.backward),
        };
        Ok(Some(ArrowIso {
            domain: lift(iso.domain, &f.source, &g.source),
            codomain: lift(iso.codomain, &f.target, &g.target),
        }))
    }

    fn section_exists(&self, f: &NoisyMorphism, g: &NoisyMorphism) -> Result<bool> {
        require_same("codomain of f vs domain of g", &f.target, &g.source)?;
        FinSet.section_exists(&f.top(), &g.top())
    }

    fn encode(&self, f: &NoisyMorphism) -> Envelope {
        Envelope::new(CategoryId::NoisyFinset, &f.source, &f.target, &MapJson { map: f.map.clone() })
    }
}

/// Objects are listed up to relabeling of the messages: `π` is labeled in
/// order of first occurrence.
impl Enumerate for NoisyFinSet {
    fn objects_up_to(&self, max_size: usize) -> Result<Vec<NoisyObject>> {
        let mut out = Vec::new();
        for m in 1..=max_size {
            for pi in all_maps(m, m) {
                if first_occurrence_labels(&pi, m) == pi {
                    let a = pi.iter().max().map_or(0, |&x| x + 1);
                    out.push(NoisyObject { m, a, pi });
                }
            }
        }
        Ok(out)
    }

    fn homs(&self, dom: &NoisyObject, cod: &NoisyObject) -> Result<Vec<NoisyMorphism>> {
        Ok(FinSet
            .homs(&dom.m, &cod.m)?
            .into_iter()
            .map(|t| self.wrap(dom, cod, t))
            .collect())
    }

    fn hom_count(&self, dom: &NoisyObject, cod: &NoisyObject) -> Option<u128> {
        FinSet.hom_count(&dom.m, &cod.m)
    }
}

fn random_noisy_object(m: usize, rng: &mut TrialRng) -> NoisyObject {
    let a = rng.random_range(1..=m);
    NoisyObject { m, a, pi: random_surjection(m, a, rng) }
}

impl Sample for NoisyFinSet {
    fn random_object(&self, rng: &mut TrialRng, p: &SampleParams) -> NoisyObject {
        let m = rng.random_range(1..=p.max_size.max(1));
        random_noisy_object(m, rng)
    }

    /// With `measure_compatible` set, the top map is a surjection with
    /// fibers of equal size.
    fn random_morphism_from(&self, dom: &NoisyObject, rng: &mut TrialRng, p: &SampleParams) -> NoisyMorphism {
        if p.measure_compatible {
            let divisors: Vec<usize> = (1..=dom.m.min(p.max_size.max(1))).filter(|n| dom.m % n == 0).collect();
            let n = divisors[rng.random_range(0..divisors.len())];
            let target = random_noisy_object(n, rng);
            let mut map: Vec<usize> = (0..dom.m).map(|x| x % n).collect();
            map.shuffle(rng);
            return NoisyMorphism::unchecked(dom.clone(), target, map);
        }
        let n = rng.random_range(1..=p.max_size.max(1));
        let target = random_noisy_object(n, rng);
        let map = random_map(dom.m, n, rng);
        NoisyMorphism::unchecked(dom.clone(), target, map)
    }

    fn random_iso(&self, obj: &NoisyObject, rng: &mut TrialRng, _p: &SampleParams) -> (NoisyObject, IsoWitness<NoisyMorphism>) {
        let other = random_noisy_object(obj.m, rng);
        let perm = crate::finset::permutation_iso(&random_permutation(obj.m, rng));
        let w = IsoWitness {
            forward: self.wrap(obj, &other, perm.forward),
            backward: self.wrap(&other, obj, perm.backward),
        };
        (other, w)
    }
}

/// Definitional noisy information: the mutual information of `π_A` and
/// `π_B ∘ f` under the uniform measure on `M`.
pub fn noisy_information(f: &NoisyMorphism, base: LogBase) -> f64 {
    let jc = f.joint_counts();
    let total = jc.total as u128;
    // log(p(a,b) / p(a)p(b)) = log(c·|M| / (|M_a|·|M_b|)), integer ratio.
    let mut terms: Vec<(usize, usize, usize)> = Vec::new();
    for a in 0..jc.rows {
        for b in 0..jc.cols {
            let c = jc.joint[a * jc.cols + b];
            if c > 0 {
                terms.push((c, jc.row[a], jc.col[b]));
            }
        }
    }
    terms.sort_unstable();
    let mut sum = 0.0;
    for (c, ra, cb) in terms {
        let num = c as u128 * total;
        let den = ra as u128 * cb as u128;
        if num != den {
            sum += (c as f64 / jc.total as f64) * base.log(num as f64 / den as f64);
        }
    }
    sum + 0.0
}

/// The closed form `(1/|M|) Σ |M_a ∩ M_b| log(|M_a ∩ M_b| / |M_b|) − 2|A| log |A|`,
/// evaluated exactly as written, next to the definitional value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormComparison {
    pub closed_form: f64,
    pub definitional: f64,
    pub delta: f64,
}

pub fn closed_form_ni(f: &NoisyMorphism, base: LogBase) -> ClosedFormComparison {
    let jc = f.joint_counts();
    let mut sum = 0.0;
    for a in 0..jc.rows {
        for b in 0..jc.cols {
            let c = jc.joint[a * jc.cols + b];
            if c > 0 {
                sum += c as f64 * base.log(c as f64 / jc.col[b] as f64);
            }
        }
    }
    let na = jc.rows as f64;
    let closed_form = sum / jc.total as f64 - 2.0 * na * base.log(na) + 0.0;
    let definitional = noisy_information(f, base);
    ClosedFormComparison { closed_form, definitional, delta: closed_form - definitional }
}

/// `P(b|a) = |M_a ∩ M_b| / |M_a|` in exact arithmetic.
pub fn channel_exact(f: &NoisyMorphism) -> Vec<Vec<Rational>> {
    let jc = f.joint_counts();
    (0..jc.rows)
        .map(|a| {
            (0..jc.cols)
                .map(|b| ratio(jc.joint[a * jc.cols + b] as i64, jc.row[a] as i64))
                .collect()
        })
        .collect()
}

pub fn channel_of(f: &NoisyMorphism) -> Channel {
    let exact = channel_exact(f);
    debug_assert!(exact.iter().all(|row| row.iter().fold(Rational::zero(), |s, x| s + x) == ratio(1, 1)));
    Channel::new(exact.iter().map(|row| row.iter().map(to_f64).collect()).collect())
        .expect("fiber-count channels are stochastic")
}

pub fn noisy_capacity(f: &NoisyMorphism, eps: f64) -> Result<CapacityResult> {
    capacity(&channel_of(f), eps)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NoisyInformation {
    pub base: LogBase,
}

impl InfoMeasure<NoisyFinSet> for NoisyInformation {
    fn name(&self) -> String {
        "ni".into()
    }

    fn eval(&self, f: &NoisyMorphism) -> Result<Option<Measured>> {
        Ok(Some(Measured::real(noisy_information(f, self.base))))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NoisyCapacity {
    pub eps: f64,
    pub base: LogBase,
}

impl InfoMeasure<NoisyFinSet> for NoisyCapacity {
    fn name(&self) -> String {
        "capacity".into()
    }

    fn eval(&self, f: &NoisyMorphism) -> Result<Option<Measured>> {
        let r = noisy_capacity(f, self.eps)?;
        Ok(Some(Measured::real(self.base.from_bits(r.capacity))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(m: usize, a: usize, pi: &[usize]) -> NoisyObject {
        NoisyObject::new(m, a, pi.to_vec()).unwrap()
    }

    fn zero_info() -> NoisyMorphism {
        NoisyMorphism::new(obj(4, 2, &[0, 0, 1, 1]), obj(4, 2, &[0, 1, 0, 1]), vec![0, 1, 2, 3]).unwrap()
    }

    fn noiseless(n: usize) -> NoisyMorphism {
        NoisyFinSet.identity(&NoisyObject::noiseless(n).unwrap()).unwrap()
    }

    #[test]
    fn object_validation() {
        assert!(NoisyObject::new(3, 2, vec![0, 0, 0]).is_err());
        assert!(NoisyObject::new(2, 3, vec![0, 1]).is_err());
        assert!(NoisyObject::new(2, 2, vec![0, 2]).is_err());
        assert!(NoisyObject::new(0, 0, vec![]).is_err());
        let o: NoisyObject = serde_json::from_str(r#"{"m": 3, "a": 2, "pi": [0, 1, 1]}"#).unwrap();
        assert_eq!(o.fiber_sizes(), vec![1, 2]);
    }

    #[test]
    fn identity_is_top_identity() {
        let id = NoisyFinSet.identity(&obj(4, 2, &[0, 0, 1, 1])).unwrap();
        assert_eq!(id.map(), &[0, 1, 2, 3]);
    }

    #[test]
    fn ni_examples() {
        assert_eq!(noisy_information(&noiseless(4), LogBase::Two), 2.0);
        assert_eq!(noisy_information(&zero_info(), LogBase::Two), 0.0);
        let to_one = NoisyMorphism::new(obj(3, 2, &[0, 1, 1]), obj(2, 1, &[0, 0]), vec![0, 1, 0]).unwrap();
        assert_eq!(noisy_information(&to_one, LogBase::Two), 0.0);
    }

    #[test]
    fn closed_form_is_reported_not_substituted() {
        let c = closed_form_ni(&noiseless(4), LogBase::Two);
        assert_eq!(c.definitional, 2.0);
        assert_eq!(c.closed_form, -16.0);
        assert_eq!(c.delta, -18.0);
        let c = closed_form_ni(&noiseless(1), LogBase::Two);
        assert_eq!((c.closed_form, c.definitional), (0.0, 0.0));
        let c = closed_form_ni(&zero_info(), LogBase::Two);
        assert_eq!(c.definitional, 0.0);
        assert_eq!(c.closed_form, -5.0);
    }

    #[test]
    fn channel_examples() {
        let id = channel_of(&noiseless(3));
        assert_eq!(id, Channel::identity(3).unwrap());
        assert_eq!(channel_of(&zero_info()).matrix(), vec![vec![0.5, 0.5], vec![0.5, 0.5]]);
        let f = NoisyMorphism::new(obj(4, 2, &[0, 0, 1, 1]), obj(2, 2, &[0, 1]), vec![0, 1, 1, 1]).unwrap();
        assert_eq!(channel_exact(&f), vec![vec![ratio(1, 2), ratio(1, 2)], vec![ratio(0, 1), ratio(1, 1)]]);
    }

    #[test]
    fn capacity_examples() {
        assert!((noisy_capacity(&noiseless(4), 1e-9).unwrap().capacity - 2.0).abs() <= 1e-9);
        assert!(noisy_capacity(&zero_info(), 1e-9).unwrap().capacity.abs() <= 1e-9);
    }

    #[test]
    fn products() {
        let x = obj(2, 2, &[0, 1]);
        let y = obj(3, 2, &[0, 1, 1]);
        let cone = NoisyFinSet.product(&x, &y).unwrap();
        assert_eq!(cone.apex.pi(), &[0, 1, 1, 2, 3, 3]);
        let f = zero_info();
        let p = NoisyFinSet.internal_product(&f, &f).unwrap().unwrap();
        assert_eq!(NoisyFinSet.compose(&cone_first(&f), &p).unwrap(), f);
    }

    fn cone_first(f: &NoisyMorphism) -> NoisyMorphism {
        NoisyFinSet.product(f.target(), f.target()).unwrap().first
    }

    #[test]
    fn isomorphism_ignores_pi() {
        let f = NoisyFinSet.identity(&obj(2, 2, &[0, 1])).unwrap();
        let g = NoisyFinSet.identity(&obj(2, 1, &[0, 0])).unwrap();
        assert!(NoisyFinSet.is_arrow_isomorphic(&f, &g).unwrap());
        let w = NoisyFinSet.arrow_isomorphism(&f, &g).unwrap().unwrap();
        assert!(crate::arrow::verify_iso(&NoisyFinSet, &f, &g, &w).unwrap());
        // ... which is why NI is not invariant.
        assert_ne!(noisy_information(&f, LogBase::Two), noisy_information(&g, LogBase::Two));
    }

    #[test]
    fn object_corpus_is_up_to_message_relabeling() {
        let objs = NoisyFinSet.objects_up_to(4).unwrap();
        // Bell numbers 1, 2, 5, 15
        assert_eq!(objs.len(), 23);
    }
}
