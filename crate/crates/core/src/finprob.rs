//! Finite probability spaces with exact rational weights, and backwards
//! measure preserving maps: `μ(f⁻¹(y)) = ν(y)` for every point `y`.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::category::{require_common_domain, require_same, ArrowIso, Category, CategoryId, Enumerate, IsoWitness, ProductCone};
use crate::error::{Error, Result};
use crate::finset::{FinSet, FinSetMorphism};
use crate::json::{field, Decode, Envelope};
use crate::rational::{integer, serde_vec, Rational};
use crate::sample::{random_map, random_permutation, trial_rng, Sample, SampleParams, TrialRng};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ObjectJson", into = "ObjectJson")]
pub struct FinProbObject {
    weights: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectJson {
    size: usize,
    #[serde(with = "serde_vec")]
    weights: Vec<Rational>,
}

impl TryFrom<ObjectJson> for FinProbObject {
    type Error = Error;

    fn try_from(j: ObjectJson) -> Result<Self> {
        if j.size != j.weights.len() {
            return Err(Error::InvalidObject(format!("size {} but {} weights", j.size, j.weights.len())));
        }
        FinProbObject::new(j.weights)
    }
}

impl From<FinProbObject> for ObjectJson {
    fn from(o: FinProbObject) -> Self {
        ObjectJson { size: o.weights.len(), weights: o.weights }
    }
}

impl FinProbObject {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::InvalidObject(format!("negative weight {w}")));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidObject(format!("weights sum to {total}, not 1")));
        }
        Ok(FinProbObject { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidObject("a probability space cannot be empty".into()));
        }
        Ok(FinProbObject { weights: vec![Rational::new(1.into(), n.into()); n] })
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// The image measure `map_*(self)` on a space of `size` points.
    pub fn pushforward(&self, map: &[usize], size: usize) -> FinProbObject {
        FinProbObject { weights: pushforward(map, &self.weights, size) }
    }

    pub(crate) fn unchecked(weights: Vec<Rational>) -> Self {
        FinProbObject { weights }
    }
}

pub(crate) fn pushforward(map: &[usize], mu: &[Rational], size: usize) -> Vec<Rational> {
    let mut nu = vec![Rational::zero(); size];
    for (x, &y) in map.iter().enumerate() {
        nu[y] += &mu[x];
    }
    nu
}

/// Whether `map` is backwards measure preserving from `mu` to `nu`, checked
/// on every singleton.
pub fn check_bmp(map: &[usize], mu: &[Rational], nu: &[Rational]) -> bool {
    if map.len() != mu.len() || map.iter().any(|&y| y >= nu.len()) {
        return false;
    }
    pushforward(map, mu, nu.len()) == nu
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinProbMorphism {
    domain: FinProbObject,
    codomain: FinProbObject,
    map: Vec<usize>,
}

impl FinProbMorphism {
    pub fn new(domain: FinProbObject, codomain: FinProbObject, map: Vec<usize>) -> Result<Self> {
        FinSetMorphism::new(domain.size(), codomain.size(), map.clone())?;
        if !check_bmp(&map, &domain.weights, &codomain.weights) {
            return Err(Error::InvalidMorphism("map is not backwards measure preserving".into()));
        }
        Ok(FinProbMorphism { domain, codomain, map })
    }

    /// `map` with the image measure as codomain.
    pub fn pushing_forward(domain: FinProbObject, codomain_size: usize, map: Vec<usize>) -> Result<Self> {
        FinSetMorphism::new(domain.size(), codomain_size, map.clone())?;
        let codomain = domain.pushforward(&map, codomain_size);
        Ok(FinProbMorphism { domain, codomain, map })
    }

    pub(crate) fn unchecked(domain: FinProbObject, codomain: FinProbObject, map: Vec<usize>) -> Self {
        FinProbMorphism { domain, codomain, map }
    }

    pub fn domain(&self) -> &FinProbObject {
        &self.domain
    }

    pub fn codomain(&self) -> &FinProbObject {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn top(&self) -> FinSetMorphism {
        FinSetMorphism::unchecked(self.domain.size(), self.codomain.size(), self.map.clone())
    }

    /// For each codomain point, the weights of its fiber in ascending order.
    fn fiber_weights(&self) -> Vec<Vec<Rational>> {
        let mut fibers = vec![Vec::new(); self.codomain.size()];
        for (x, &y) in self.map.iter().enumerate() {
            fibers[y].push(self.domain.weights[x].clone());
        }
        for f in &mut fibers {
            f.sort();
        }
        fibers
    }

    /// Complete invariant of the arrow-isomorphism class.
    pub fn iso_invariant(&self) -> Vec<Vec<Rational>> {
        let mut fibers = self.fiber_weights();
        fibers.sort();
        fibers
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct MapJson {
    pub map: Vec<usize>,
}

impl Decode for FinProbMorphism {
    fn decode(env: &Envelope) -> Result<Self> {
        env.expect(CategoryId::Finprob)?;
        let dom: FinProbObject = field(&env.domain, "domain")?;
        let cod: FinProbObject = field(&env.codomain, "codomain")?;
        let payload: MapJson = field(&env.payload, "payload")?;
        FinProbMorphism::new(dom, cod, payload.map)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FinProb;

fn product_weights(x: &FinProbObject, y: &FinProbObject) -> FinProbObject {
    let mut w = Vec::with_capacity(x.size() * y.size());
    for a in &x.weights {
        for b in &y.weights {
            w.push(a * b);
        }
    }
    FinProbObject { weights: w }
}

/// The measure-preserving bijection between two spaces given by `perm`.
fn permutation_iso(x: &FinProbObject, y: &FinProbObject, perm: &[usize]) -> IsoWitness<FinProbMorphism> {
    let w = crate::finset::permutation_iso(perm);
    IsoWitness {
        forward: FinProbMorphism::unchecked(x.clone(), y.clone(), w.forward.map().to_vec()),
        backward: FinProbMorphism::unchecked(y.clone(), x.clone(), w.backward.map().to_vec()),
    }
}

/// Pairs up the points of two spaces so that matched points carry the same
/// weight, given that the weight lists of `f`'s and `g`'s fibers agree.
pub(crate) fn finprob_arrow_iso(f: &FinProbMorphism, g: &FinProbMorphism) -> Option<(Vec<usize>, Vec<usize>)> {
    if f.domain.size() != g.domain.size() || f.codomain.size() != g.codomain.size() {
        return None;
    }
    if f.iso_invariant() != g.iso_invariant() {
        return None;
    }
    let fibers = |h: &FinProbMorphism| {
        let mut fib: Vec<Vec<usize>> = vec![Vec::new(); h.codomain.size()];
        for (x, &y) in h.map.iter().enumerate() {
            fib[y].push(x);
        }
        for pts in &mut fib {
            pts.sort_by(|&p, &q| h.domain.weights[p].cmp(&h.domain.weights[q]).then(p.cmp(&q)));
        }
        fib
    };
    let (ff, fg) = (fibers(f), fibers(g));
    let order = |h: &FinProbMorphism| {
        let fw = h.fiber_weights();
        let mut pts: Vec<usize> = (0..h.codomain.size()).collect();
        pts.sort_by(|&p, &q| fw[p].cmp(&fw[q]).then(p.cmp(&q)));
        pts
    };
    let mut alpha = vec![0; f.domain.size()];
    let mut beta = vec![0; f.codomain.size()];
    for (&y, &y2) in order(f).iter().zip(&order(g)) {
        beta[y] = y2;
        for (&x, &x2) in ff[y].iter().zip(&fg[y2]) {
            alpha[x] = x2;
        }
    }
    Some((alpha, beta))
}

impl Category for FinProb {
    type Object = FinProbObject;
    type Morphism = FinProbMorphism;

    fn id(&self) -> CategoryId {
        CategoryId::Finprob
    }

    fn domain(&self, f: &FinProbMorphism) -> FinProbObject {
        f.domain.clone()
    }

    fn codomain(&self, f: &FinProbMorphism) -> FinProbObject {
        f.codomain.clone()
    }

    fn identity(&self, obj: &FinProbObject) -> Result<FinProbMorphism> {
        Ok(FinProbMorphism::unchecked(obj.clone(), obj.clone(), (0..obj.size()).collect()))
    }

    fn compose(&self, g: &FinProbMorphism, f: &FinProbMorphism) -> Result<FinProbMorphism> {
        require_same("codomain of f vs domain of g", &f.codomain, &g.domain)?;
        let map = f.map.iter().map(|&x| g.map[x]).collect();
        Ok(FinProbMorphism::unchecked(f.domain.clone(), g.codomain.clone(), map))
    }

    fn product(&self, x: &FinProbObject, y: &FinProbObject) -> Option<ProductCone<FinProbObject, FinProbMorphism>> {
        let cone = FinSet.product(&x.size(), &y.size())?;
        let apex = product_weights(x, y);
        Some(ProductCone {
            first: FinProbMorphism::unchecked(apex.clone(), x.clone(), cone.first.map().to_vec()),
            second: FinProbMorphism::unchecked(apex.clone(), y.clone(), cone.second.map().to_vec()),
            apex,
        })
    }

    /// The pairing `x ↦ (f(x), g(x))` into the product space, when it is
    /// backwards measure preserving, i.e. when `f` and `g` are independent.
    fn internal_product(&self, f: &FinProbMorphism, g: &FinProbMorphism) -> Result<Option<FinProbMorphism>> {
        require_common_domain(&f.domain, &g.domain)?;
        let apex = product_weights(&f.codomain, &g.codomain);
        let top = FinSet.internal_product(&f.top(), &g.top())?.expect("finite sets have products");
        if !check_bmp(top.map(), &f.domain.weights, &apex.weights) {
            return Ok(None);
        }
        Ok(Some(FinProbMorphism::unchecked(f.domain.clone(), apex, top.map().to_vec())))
    }

    fn external_product(&self, f: &FinProbMorphism, g: &FinProbMorphism) -> Result<Option<FinProbMorphism>> {
        let top = FinSet.external_product(&f.top(), &g.top())?.expect("finite sets have products");
        Ok(Some(FinProbMorphism::unchecked(
            product_weights(&f.domain, &g.domain),
            product_weights(&f.codomain, &g.codomain),
            top.map().to_vec(),
        )))
    }

    fn terminal_object(&self) -> Option<FinProbObject> {
        Some(FinProbObject { weights: vec![Rational::one()] })
    }

    fn unique_to_terminal(&self, obj: &FinProbObject) -> Result<FinProbMorphism> {
        Ok(FinProbMorphism::unchecked(obj.clone(), self.terminal_object().expect("terminal"), vec![0; obj.size()]))
    }

    /// Equal multisets (over codomain points) of fiber weight multisets.
    fn is_arrow_isomorphic(&self, f: &FinProbMorphism, g: &FinProbMorphism) -> Result<bool> {
        Ok(f.domain.size() == g.domain.size()
            && f.codomain.size() == g.codomain.size()
            && f.iso_invariant() == g.iso_invariant())
    }

    fn arrow_isomorphism(&self, f: &FinProbMorphism, g: &FinProbMorphism) -> Result<Option<ArrowIso<FinProbMorphism>>> {
        Ok(finprob_arrow_iso(f, g).map(|(alpha, beta)| ArrowIso {
            domain: permutation_iso(&f.domain, &g.domain, &alpha),
            codomain: permutation_iso(&f.codomain, &g.codomain, &beta),
        }))
    }

    /// As for finite sets: `g` injective on the image of `f`. Points of the
    /// codomain of `g` outside the image of `g ∘ f` have mass zero, so the
    /// section may send them anywhere.
    fn section_exists(&self, f: &FinProbMorphism, g: &FinProbMorphism) -> Result<bool> {
        require_same("codomain of f vs domain of g", &f.codomain, &g.domain)?;
        FinSet.section_exists(&f.top(), &g.top())
    }

    fn encode(&self, f: &FinProbMorphism) -> Envelope {
        Envelope::new(CategoryId::Finprob, &f.domain, &f.codomain, &MapJson { map: f.map.clone() })
    }
}

/// Hom-sets only: objects carry arbitrary rational weights, so there is no
/// finite list of objects to enumerate.
impl Enumerate for FinProb {
    fn objects_up_to(&self, _max_size: usize) -> Result<Vec<FinProbObject>> {
        Err(Error::InvalidConfig("finite probability spaces cannot be enumerated".into()))
    }

    fn homs(&self, dom: &FinProbObject, cod: &FinProbObject) -> Result<Vec<FinProbMorphism>> {
        let maps = FinSet.homs(&dom.size(), &cod.size())?;
        Ok(maps
            .into_iter()
            .filter(|m| check_bmp(m.map(), &dom.weights, &cod.weights))
            .map(|m| FinProbMorphism::unchecked(dom.clone(), cod.clone(), m.map().to_vec()))
            .collect())
    }

    fn hom_count(&self, dom: &FinProbObject, cod: &FinProbObject) -> Option<u128> {
        FinSet.hom_count(&dom.size(), &cod.size())
    }
}

/// Small-denominator weights: independent integers in `0..=4`, normalized.
pub(crate) fn random_weights(n: usize, rng: &mut TrialRng) -> Vec<Rational> {
    let mut k: Vec<i64> = (0..n).map(|_| rng.random_range(0..=4)).collect();
    if k.iter().all(|&x| x == 0) {
        let i = rng.random_range(0..n);
        k[i] = 1;
    }
    let total = integer(k.iter().sum());
    k.into_iter().map(|x| integer(x) / &total).collect()
}

impl Sample for FinProb {
    fn random_object(&self, rng: &mut TrialRng, p: &SampleParams) -> FinProbObject {
        let n = rng.random_range(1..=p.max_size.max(1));
        FinProbObject { weights: random_weights(n, rng) }
    }

    fn random_morphism_from(&self, dom: &FinProbObject, rng: &mut TrialRng, p: &SampleParams) -> FinProbMorphism {
        let n = rng.random_range(1..=p.max_size.max(1));
        let map = random_map(dom.size(), n, rng);
        let cod = dom.pushforward(&map, n);
        FinProbMorphism::unchecked(dom.clone(), cod, map)
    }

    fn random_iso(&self, obj: &FinProbObject, rng: &mut TrialRng, _p: &SampleParams) -> (FinProbObject, IsoWitness<FinProbMorphism>) {
        let perm = random_permutation(obj.size(), rng);
        let other = obj.pushforward(&perm, obj.size());
        let w = permutation_iso(obj, &other, &perm);
        (other, w)
    }
}

/// How often the canonical internal product exists for random pairs of
/// morphisms out of a common random space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExistenceStudy {
    pub seed: u64,
    pub trials: u64,
    pub existing: u64,
    pub rate: f64,
    /// A pair `(f, g)` whose internal product exists, as JSON envelopes.
    pub example_exists: Option<(serde_json::Value, serde_json::Value)>,
    pub example_missing: Option<(serde_json::Value, serde_json::Value)>,
}

pub fn internal_product_existence(seed: u64, trials: u64, max_size: usize) -> Result<ExistenceStudy> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let params = SampleParams { max_size, measure_compatible: false };
    let mut existing = 0;
    let (mut yes, mut no) = (None, None);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let a = FinProb.random_object(&mut rng, &params);
        let f = FinProb.random_morphism_from(&a, &mut rng, &params);
        let g = FinProb.random_morphism_from(&a, &mut rng, &params);
        let pair = || (FinProb.to_json(&f), FinProb.to_json(&g));
        if FinProb.internal_product(&f, &g)?.is_some() {
            existing += 1;
            yes.get_or_insert_with(pair);
        } else {
            no.get_or_insert_with(pair);
        }
    }
    Ok(ExistenceStudy {
        seed,
        trials,
        existing,
        rate: existing as f64 / trials as f64,
        example_exists: yes,
        example_missing: no,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn space(w: &[(i64, i64)]) -> FinProbObject {
        FinProbObject::new(w.iter().map(|&(p, q)| ratio(p, q)).collect()).unwrap()
    }

    #[test]
    fn bmp_examples() {
        let half = [ratio(1, 2), ratio(1, 2)];
        assert!(check_bmp(&[0, 1], &half, &half));
        assert!(check_bmp(&[0, 0], &half, &[ratio(1, 1)]));
        assert!(!check_bmp(&[0, 0], &[ratio(1, 3), ratio(2, 3)], &half));
    }

    #[test]
    fn object_validation() {
        assert!(FinProbObject::new(vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(FinProbObject::new(vec![ratio(3, 2), ratio(-1, 2)]).is_err());
        let o: FinProbObject = serde_json::from_str(r#"{"size":3,"weights":["1/2","1/4","1/4"]}"#).unwrap();
        assert_eq!(o.size(), 3);
        assert!(serde_json::from_str::<FinProbObject>(r#"{"size":2,"weights":["1/2","1/4","1/4"]}"#).is_err());
        assert_eq!(
            serde_json::to_string(&o).unwrap(),
            r#"{"size":3,"weights":["1/2","1/4","1/4"]}"#
        );
    }

    #[test]
    fn morphism_validation() {
        let x = space(&[(1, 3), (2, 3)]);
        let y = space(&[(1, 2), (1, 2)]);
        assert!(FinProbMorphism::new(x.clone(), y, vec![0, 1]).is_err());
        assert!(FinProbMorphism::new(x.clone(), x, vec![0, 1]).is_ok());
    }

    #[test]
    fn internal_product_needs_independence() {
        let a = FinProbObject::uniform(4).unwrap();
        let f = FinProbMorphism::pushing_forward(a.clone(), 2, vec![0, 0, 1, 1]).unwrap();
        let g = FinProbMorphism::pushing_forward(a.clone(), 2, vec![0, 1, 0, 1]).unwrap();
        assert!(FinProb.internal_product(&f, &g).unwrap().is_some());
        // f with itself is perfectly correlated.
        assert!(FinProb.internal_product(&f, &f).unwrap().is_none());
        let t = FinProb.unique_to_terminal(&a).unwrap();
        assert!(FinProb.internal_product(&f, &t).unwrap().is_some());
    }

    #[test]
    fn external_products_always_exist() {
        let x = space(&[(1, 3), (2, 3)]);
        let f = FinProbMorphism::pushing_forward(x.clone(), 1, vec![0, 0]).unwrap();
        let g = FinProb.identity(&x).unwrap();
        let p = FinProb.external_product(&f, &g).unwrap().unwrap();
        assert!(check_bmp(p.map(), p.domain().weights(), p.codomain().weights()));
    }

    #[test]
    fn arrow_iso_respects_weights() {
        let x = space(&[(1, 3), (2, 3)]);
        let y = space(&[(2, 3), (1, 3)]);
        let f = FinProb.identity(&x).unwrap();
        let g = FinProb.identity(&y).unwrap();
        assert!(FinProb.is_arrow_isomorphic(&f, &g).unwrap());
        let w = FinProb.arrow_isomorphism(&f, &g).unwrap().unwrap();
        assert!(crate::arrow::verify_iso(&FinProb, &f, &g, &w).unwrap());
        let h = FinProb.identity(&FinProbObject::uniform(2).unwrap()).unwrap();
        assert!(!FinProb.is_arrow_isomorphic(&f, &h).unwrap());
    }

    #[test]
    fn existence_study_finds_both_outcomes() {
        let s = internal_product_existence(7, 300, 4).unwrap();
        assert!(s.existing > 0 && s.existing < s.trials);
        assert!(s.example_exists.is_some() && s.example_missing.is_some());
        assert_eq!(s, internal_product_existence(7, 300, 4).unwrap());
    }
}
