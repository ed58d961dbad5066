//! Finite sets and maps, with Hartley and Shannon entropy.
//!
//! An object is a size `n` (elements `0..n`). The product of `X` and `Y` is
//! `X·Y` with `(i, j) ↦ i·|Y| + j`.

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::category::{
    require_common_domain, require_same, ArrowIso, Category, CategoryId, Enumerate, IsoWitness, ProductCone,
};
use crate::dual::Cocartesian;
use crate::error::{Error, Result};
use crate::json::{field, Decode, Envelope};
use crate::measure::{entropy_of_counts, InfoMeasure, LogBase, Measured};
use crate::sample::{invert_permutation, random_map, random_permutation, Sample, SampleInto, SampleParams, TrialRng};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinSetMorphism {
    domain: usize,
    codomain: usize,
    map: Vec<usize>,
}

impl FinSetMorphism {
    pub fn new(domain: usize, codomain: usize, map: Vec<usize>) -> Result<Self> {
        if map.len() != domain {
            return Err(Error::InvalidMorphism(format!(
                "map has {} entries but the domain has {domain} elements",
                map.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&b| b >= codomain) {
            return Err(Error::InvalidMorphism(format!("entry {bad} outside codomain of size {codomain}")));
        }
        Ok(FinSetMorphism { domain, codomain, map })
    }

    /// Shorthand for a map whose domain is `map.len()`.
    pub fn from_map(codomain: usize, map: Vec<usize>) -> Result<Self> {
        Self::new(map.len(), codomain, map)
    }

    pub(crate) fn unchecked(domain: usize, codomain: usize, map: Vec<usize>) -> Self {
        debug_assert!(map.len() == domain && map.iter().all(|&b| b < codomain));
        FinSetMorphism { domain, codomain, map }
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// `|f⁻¹(b)|` for each `b` in the codomain.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut counts = vec![0; self.codomain];
        for &b in &self.map {
            counts[b] += 1;
        }
        counts
    }

    /// Nonzero fiber sizes, ascending.
    pub fn fiber_multiset(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.fiber_sizes().into_iter().filter(|&k| k > 0).collect();
        sizes.sort_unstable();
        sizes
    }

    pub fn image_size(&self) -> usize {
        self.fiber_sizes().iter().filter(|&&k| k > 0).count()
    }

    pub fn is_injective_on(&self, points: impl IntoIterator<Item = usize>) -> bool {
        let mut hit = vec![false; self.codomain];
        for b in points {
            let c = self.map[b];
            if hit[c] {
                return false;
            }
            hit[c] = true;
        }
        true
    }

    /// The image as a sorted, duplicate-free list.
    pub fn image(&self) -> Vec<usize> {
        let mut seen = vec![false; self.codomain];
        for &b in &self.map {
            seen[b] = true;
        }
        (0..self.codomain).filter(|&b| seen[b]).collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct SizeJson {
    pub size: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct MapJson {
    pub map: Vec<usize>,
}

impl Decode for FinSetMorphism {
    fn decode(env: &Envelope) -> Result<Self> {
        env.expect(CategoryId::Finset)?;
        let dom: SizeJson = field(&env.domain, "domain")?;
        let cod: SizeJson = field(&env.codomain, "codomain")?;
        let payload: MapJson = field(&env.payload, "payload")?;
        FinSetMorphism::new(dom.size, cod.size, payload.map)
    }
}

/// The category of finite sets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FinSet;

impl Category for FinSet {
    type Object = usize;
    type Morphism = FinSetMorphism;

    fn id(&self) -> CategoryId {
        CategoryId::Finset
    }

    fn domain(&self, f: &FinSetMorphism) -> usize {
        f.domain
    }

    fn codomain(&self, f: &FinSetMorphism) -> usize {
        f.codomain
    }

    fn identity(&self, n: &usize) -> Result<FinSetMorphism> {
        Ok(FinSetMorphism::unchecked(*n, *n, (0..*n).collect()))
    }

    fn compose(&self, g: &FinSetMorphism, f: &FinSetMorphism) -> Result<FinSetMorphism> {
        require_same("codomain of f vs domain of g", &f.codomain, &g.domain)?;
        Ok(FinSetMorphism::unchecked(f.domain, g.codomain, f.map.iter().map(|&b| g.map[b]).collect()))
    }

    fn product(&self, x: &usize, y: &usize) -> Option<ProductCone<usize, FinSetMorphism>> {
        let n = x * y;
        Some(ProductCone {
            apex: n,
            first: FinSetMorphism::unchecked(n, *x, (0..n).map(|k| k / y).collect()),
            second: FinSetMorphism::unchecked(n, *y, (0..n).map(|k| k % y).collect()),
        })
    }

    fn internal_product(&self, f: &FinSetMorphism, g: &FinSetMorphism) -> Result<Option<FinSetMorphism>> {
        require_common_domain(&f.domain, &g.domain)?;
        let w = g.codomain;
        let map = f.map.iter().zip(&g.map).map(|(&x, &y)| x * w + y).collect();
        Ok(Some(FinSetMorphism::unchecked(f.domain, f.codomain * w, map)))
    }

    fn external_product(&self, f: &FinSetMorphism, g: &FinSetMorphism) -> Result<Option<FinSetMorphism>> {
        let w = g.codomain;
        let mut map = Vec::with_capacity(f.domain * g.domain);
        for &x in &f.map {
            for &y in &g.map {
                map.push(x * w + y);
            }
        }
        Ok(Some(FinSetMorphism::unchecked(f.domain * g.domain, f.codomain * w, map)))
    }

    fn terminal_object(&self) -> Option<usize> {
        Some(1)
    }

    fn unique_to_terminal(&self, n: &usize) -> Result<FinSetMorphism> {
        Ok(FinSetMorphism::unchecked(*n, 1, vec![0; *n]))
    }

    /// `f ≅ g` iff the domains and codomains have equal sizes and the
    /// multisets of nonzero fiber sizes agree.
    fn is_arrow_isomorphic(&self, f: &FinSetMorphism, g: &FinSetMorphism) -> Result<bool> {
        Ok(f.domain == g.domain && f.codomain == g.codomain && f.fiber_multiset() == g.fiber_multiset())
    }

    fn arrow_isomorphism(&self, f: &FinSetMorphism, g: &FinSetMorphism) -> Result<Option<ArrowIso<FinSetMorphism>>> {
        if !self.is_arrow_isomorphic(f, g)? {
            return Ok(None);
        }
        // Pair codomain points by fiber size, then pair the fibers elementwise.
        let order = |h: &FinSetMorphism| {
            let sizes = h.fiber_sizes();
            let mut pts: Vec<usize> = (0..h.codomain).collect();
            pts.sort_by_key(|&b| (std::cmp::Reverse(sizes[b]), b));
            pts
        };
        let fibers = |h: &FinSetMorphism| {
            let mut fib = vec![Vec::new(); h.codomain];
            for (a, &b) in h.map.iter().enumerate() {
                fib[b].push(a);
            }
            fib
        };
        let (of, og) = (order(f), order(g));
        let (ff, fg) = (fibers(f), fibers(g));
        let mut beta = vec![0; f.codomain];
        let mut alpha = vec![0; f.domain];
        for (&y, &y2) in of.iter().zip(&og) {
            beta[y] = y2;
            for (&x, &x2) in ff[y].iter().zip(&fg[y2]) {
                alpha[x] = x2;
            }
        }
        Ok(Some(ArrowIso {
            domain: permutation_iso(&alpha),
            codomain: permutation_iso(&beta),
        }))
    }

    /// A section exists iff `g` is injective on the image of `f`.
    fn section_exists(&self, f: &FinSetMorphism, g: &FinSetMorphism) -> Result<bool> {
        require_same("codomain of f vs domain of g", &f.codomain, &g.domain)?;
        Ok(g.is_injective_on(f.image()))
    }

    fn encode(&self, f: &FinSetMorphism) -> Envelope {
        Envelope::new(
            CategoryId::Finset,
            &SizeJson { size: f.domain },
            &SizeJson { size: f.codomain },
            &MapJson { map: f.map.clone() },
        )
    }
}

pub(crate) fn permutation_iso(p: &[usize]) -> IsoWitness<FinSetMorphism> {
    let n = p.len();
    IsoWitness {
        forward: FinSetMorphism::unchecked(n, n, p.to_vec()),
        backward: FinSetMorphism::unchecked(n, n, invert_permutation(p)),
    }
}

/// All maps `dom → cod` in lexicographic order (first entry most significant).
pub(crate) fn all_maps(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    if cod == 0 {
        return if dom == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let total = cod.pow(dom as u32);
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0; dom];
    loop {
        out.push(cur.clone());
        let mut i = dom;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < cod {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Relabels the values of `map` in order of first occurrence.
pub(crate) fn first_occurrence_labels(map: &[usize], cod: usize) -> Vec<usize> {
    let mut label = vec![usize::MAX; cod];
    let mut next = 0;
    map.iter()
        .map(|&b| {
            if label[b] == usize::MAX {
                label[b] = next;
                next += 1;
            }
            label[b]
        })
        .collect()
}

impl Enumerate for FinSet {
    fn objects_up_to(&self, max_size: usize) -> Result<Vec<usize>> {
        Ok((1..=max_size).collect())
    }

    fn homs(&self, dom: &usize, cod: &usize) -> Result<Vec<FinSetMorphism>> {
        if let Some(n) = self.hom_count(dom, cod) {
            if n > 10_000_000 {
                return Err(Error::EnumerationBudgetExceeded(format!("{cod}^{dom} maps")));
            }
        }
        Ok(all_maps(*dom, *cod)
            .into_iter()
            .map(|m| FinSetMorphism::unchecked(*dom, *cod, m))
            .collect())
    }

    fn hom_count(&self, dom: &usize, cod: &usize) -> Option<u128> {
        (*cod as u128).checked_pow(*dom as u32)
    }

    fn arrow_canonical(&self, f: &FinSetMorphism) -> Option<FinSetMorphism> {
        let mut sizes = f.fiber_multiset();
        sizes.reverse();
        let map = sizes.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat_n(b, k)).collect();
        Some(FinSetMorphism::unchecked(f.domain, f.codomain, map))
    }

    fn coslice_canonical(&self, f: &FinSetMorphism) -> Option<FinSetMorphism> {
        Some(FinSetMorphism::unchecked(f.domain, f.codomain, first_occurrence_labels(&f.map, f.codomain)))
    }

    fn precompose_canonical(&self, f: &FinSetMorphism) -> Option<FinSetMorphism> {
        let mut map = f.map.clone();
        map.sort_unstable();
        Some(FinSetMorphism::unchecked(f.domain, f.codomain, map))
    }
}

impl Sample for FinSet {
    fn random_object(&self, rng: &mut TrialRng, p: &SampleParams) -> usize {
        rng.random_range(1..=p.max_size.max(1))
    }

    fn random_morphism_from(&self, dom: &usize, rng: &mut TrialRng, p: &SampleParams) -> FinSetMorphism {
        let cod = rng.random_range(1..=p.max_size.max(1));
        FinSetMorphism::unchecked(*dom, cod, random_map(*dom, cod, rng))
    }

    fn random_iso(&self, n: &usize, rng: &mut TrialRng, _p: &SampleParams) -> (usize, IsoWitness<FinSetMorphism>) {
        (*n, permutation_iso(&random_permutation(*n, rng)))
    }
}

impl SampleInto for FinSet {
    fn random_morphism_into(&self, cod: &usize, rng: &mut TrialRng, p: &SampleParams) -> FinSetMorphism {
        let dom = if *cod == 0 { 0 } else { rng.random_range(0..=p.max_size) };
        FinSetMorphism::unchecked(dom, *cod, random_map(dom, *cod, rng))
    }
}

impl Cocartesian for FinSet {
    fn dual_id(&self) -> CategoryId {
        CategoryId::FinsetDual
    }

    fn coproduct(&self, x: &usize, y: &usize) -> (usize, FinSetMorphism, FinSetMorphism) {
        let n = x + y;
        (
            n,
            FinSetMorphism::unchecked(*x, n, (0..*x).collect()),
            FinSetMorphism::unchecked(*y, n, (*x..n).collect()),
        )
    }

    fn copair(&self, f: &FinSetMorphism, g: &FinSetMorphism) -> Result<FinSetMorphism> {
        require_same("common codomain", &f.codomain, &g.codomain)
            .map_err(|e| Error::DomainMismatch(e.to_string()))?;
        let map = f.map.iter().chain(&g.map).copied().collect();
        Ok(FinSetMorphism::unchecked(f.domain + g.domain, f.codomain, map))
    }

    fn initial_object(&self) -> usize {
        0
    }

    fn unique_from_initial(&self, n: &usize) -> FinSetMorphism {
        FinSetMorphism::unchecked(0, *n, Vec::new())
    }

    /// `s` with `f ∘ g ∘ s = f` exists iff `im(f ∘ g) ⊇ im f`.
    fn cosection_exists(&self, f: &FinSetMorphism, g: &FinSetMorphism) -> Result<bool> {
        let fg = self.compose(f, g)?;
        let reached = fg.fiber_sizes();
        Ok(f.map.iter().all(|&a| reached[a] > 0))
    }
}

/// Hartley entropy `log |f(A)|`. Undefined on the empty domain.
pub fn hartley(f: &FinSetMorphism, base: LogBase) -> Option<f64> {
    if f.domain == 0 {
        return None;
    }
    Some(base.log(f.image_size() as f64) + 0.0)
}

/// Shannon entropy of the fiber-size distribution under the uniform
/// measure on the domain. Undefined on the empty domain.
pub fn shannon(f: &FinSetMorphism, base: LogBase) -> Option<f64> {
    if f.domain == 0 {
        return None;
    }
    Some(entropy_of_counts(&f.fiber_multiset(), f.domain, base))
}

/// Nonzero fiber sizes, ascending, divided by their gcd: two maps have the
/// same key iff their fiber distributions are equal.
fn distribution_key(f: &FinSetMorphism) -> Vec<u64> {
    let sizes = f.fiber_multiset();
    let g = sizes.iter().fold(0usize, |acc, &k| acc.gcd(&k)).max(1);
    sizes.into_iter().map(|k| (k / g) as u64).collect()
}

/// Whether a section `s` with `s ∘ g ∘ f = f` exists.
pub fn section_exists(f: &FinSetMorphism, g: &FinSetMorphism) -> Result<bool> {
    FinSet.section_exists(f, g)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Shannon {
    pub base: LogBase,
}

impl InfoMeasure<FinSet> for Shannon {
    fn name(&self) -> String {
        "shannon".into()
    }

    fn eval(&self, f: &FinSetMorphism) -> Result<Option<Measured>> {
        Ok(shannon(f, self.base).map(|h| Measured::keyed(h, distribution_key(f))))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Hartley {
    pub base: LogBase,
}

impl InfoMeasure<FinSet> for Hartley {
    fn name(&self) -> String {
        "hartley".into()
    }

    fn eval(&self, f: &FinSetMorphism) -> Result<Option<Measured>> {
        Ok(hartley(f, self.base).map(|h| Measured::keyed(h, vec![f.image_size() as u64])))
    }
}

/// `f ↦ λ·H(f) + μ·H₀(f)` with `λ, μ ≥ 0`.
#[derive(Debug, Clone, Copy)]
pub struct AfnCombination {
    lambda: f64,
    mu: f64,
    base: LogBase,
}

pub fn afn_combination(lambda: f64, mu: f64) -> Result<AfnCombination> {
    AfnCombination::new(lambda, mu, LogBase::Two)
}

impl AfnCombination {
    pub fn new(lambda: f64, mu: f64, base: LogBase) -> Result<Self> {
        for c in [lambda, mu] {
            if !(c >= 0.0) || !c.is_finite() {
                return Err(Error::NegativeCoefficient(c));
            }
        }
        Ok(AfnCombination { lambda, mu, base })
    }
}

impl InfoMeasure<FinSet> for AfnCombination {
    fn name(&self) -> String {
        format!("afn:{},{}", self.lambda, self.mu)
    }

    fn eval(&self, f: &FinSetMorphism) -> Result<Option<Measured>> {
        let (Some(h), Some(h0)) = (shannon(f, self.base), hartley(f, self.base)) else {
            return Ok(None);
        };
        let value = self.lambda * h + self.mu * h0;
        // Shannon's key determines the image size as well.
        let key = if self.lambda > 0.0 {
            distribution_key(f)
        } else if self.mu > 0.0 {
            vec![f.image_size() as u64]
        } else {
            Vec::new()
        };
        Ok(Some(Measured::keyed(value, key)))
    }
}

/// `f ↦ |dom f|`. Not an information function; used to check that the
/// audit catches violations.
#[derive(Debug, Clone, Copy, Default)]
pub struct SourceSize;

impl InfoMeasure<FinSet> for SourceSize {
    fn name(&self) -> String {
        "source_size".into()
    }

    fn exact(&self) -> bool {
        true
    }

    fn eval(&self, f: &FinSetMorphism) -> Result<Option<Measured>> {
        Ok(Some(Measured::count(f.domain as u64)))
    }
}

/// `f ↦ c` for a constant `c > 0`. Not an information function.
#[derive(Debug, Clone, Copy)]
pub struct Constant(pub u64);

impl InfoMeasure<FinSet> for Constant {
    fn name(&self) -> String {
        "constant".into()
    }

    fn exact(&self) -> bool {
        true
    }

    fn eval(&self, _f: &FinSetMorphism) -> Result<Option<Measured>> {
        Ok(Some(Measured::count(self.0)))
    }
}
