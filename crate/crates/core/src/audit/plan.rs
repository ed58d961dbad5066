//! Which tuples each check runs on.
//!
//! Exhaustive mode lists every morphism between objects up to the size
//! bound and forms tuples of the shape the check needs. A tuple space larger
//! than the budget is replaced by tuples of isomorphism-class
//! representatives; every check is invariant under the isomorphisms used,
//! provided the measure is.

use std::collections::HashSet;

use serde_json::json;

use super::report::Finding;
use crate::category::Enumerate;
use crate::error::{Error, Result};
use crate::sample::{Sample, SampleParams, TrialRng};

/// Total morphisms an exhaustive corpus may hold.
pub const ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    /// `f`.
    Unary,
    /// `f, g` unrelated.
    PairAny,
    /// `f, g` out of a common domain.
    PairCommon,
    /// `f, g, h` out of a common domain.
    TripleCommon,
    /// `f: A → B`, `g: B → C`.
    Composable,
}

impl Shape {
    pub fn arity(self) -> usize {
        match self {
            Shape::Unary => 1,
            Shape::TripleCommon => 3,
            _ => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Shape::Unary => "single morphisms",
            Shape::PairAny => "pairs",
            Shape::PairCommon => "pairs with a common domain",
            Shape::TripleCommon => "triples with a common domain",
            Shape::Composable => "composable pairs",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Axiom,
    Proposition,
}

macro_rules! checks {
    ($($var:ident => $id:literal, $shape:ident, $group:ident;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum Check {
            $($var,)*
        }

        impl Check {
            pub const ALL: &'static [Check] = &[$(Check::$var,)*];

            pub fn id(self) -> &'static str {
                match self {
                    $(Check::$var => $id,)*
                }
            }

            pub fn shape(self) -> Shape {
                match self {
                    $(Check::$var => Shape::$shape,)*
                }
            }

            pub fn group(self) -> Group {
                match self {
                    $(Check::$var => Group::$group,)*
                }
            }
        }
    };
}

checks! {
    Invariance => "axiom1.invariance", Unary, Axiom;
    ExternalAdditivity => "axiom2.external_additivity", PairAny, Axiom;
    InternalSsa => "axiom3.internal_ssa", TripleCommon, Axiom;
    Monotonicity => "axiom4.monotonicity", Composable, Axiom;
    DestinationMatching => "axiom5.destination_matching", Unary, Axiom;
    IsoComposition => "prop1.composition", Composable, Proposition;
    IsoCosliceComposition => "prop1.coslice_composition", Composable, Proposition;
    IsoExternalProduct => "prop1.external_product", PairAny, Proposition;
    IsoInternalProduct => "prop1.internal_product", PairCommon, Proposition;
    SourceMatching => "prop2.source_matching", Unary, Proposition;
    InternalMonotonicity => "prop3.internal_monotonicity", PairCommon, Proposition;
    Idempotence => "prop3.idempotence", Unary, Proposition;
    TerminalObject => "prop4.terminal_object", Unary, Proposition;
    TerminalExternal => "prop4.terminal_external", Unary, Proposition;
    TerminalInternal => "prop4.terminal_internal", Unary, Proposition;
    Projection => "prop4.projection", PairAny, Proposition;
    TrivialExternal => "cor.a.external", Unary, Proposition;
    TrivialInternal => "cor.a.internal", Unary, Proposition;
    TerminalZero => "cor.b.terminal_zero", Unary, Proposition;
    Subadditivity => "cor.c.subadditivity", PairCommon, Proposition;
    ProjectionIrrelevance => "cor.d.projection_irrelevance", PairAny, Proposition;
}

impl Check {
    pub fn from_id(id: &str) -> Option<Check> {
        Check::ALL.iter().copied().find(|c| c.id() == id)
    }

    pub fn in_group(group: Group) -> Vec<Check> {
        Check::ALL.iter().copied().filter(|c| c.group() == group).collect()
    }
}

/// Every morphism between objects up to the size bound, tagged with the
/// positions of its domain and codomain in the object list.
pub(crate) struct Corpus<M> {
    pub morphisms: Vec<M>,
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
    pub objects: usize,
}

pub(crate) fn corpus<C: Enumerate>(cat: &C, max_size: usize) -> Result<Corpus<C::Morphism>> {
    let objs = cat.objects_up_to(max_size)?;
    let mut total: u128 = 0;
    for d in &objs {
        for c in &objs {
            total += cat.hom_count(d, c).unwrap_or(0);
        }
    }
    if total > ENUMERATION_CAP {
        return Err(Error::EnumerationBudgetExceeded(format!(
            "{total} morphisms between objects of size at most {max_size}"
        )));
    }
    let mut out = Corpus { morphisms: Vec::new(), dom: Vec::new(), cod: Vec::new(), objects: objs.len() };
    for (i, d) in objs.iter().enumerate() {
        for (j, c) in objs.iter().enumerate() {
            for f in cat.homs(d, c)? {
                out.morphisms.push(f);
                out.dom.push(i);
                out.cod.push(j);
                if out.morphisms.len() as u128 > ENUMERATION_CAP {
                    return Err(Error::EnumerationBudgetExceeded(format!("more than {ENUMERATION_CAP} morphisms")));
                }
            }
        }
    }
    Ok(out)
}

/// The exhaustive tuples of one shape, as indices into `pool`.
pub(crate) struct Space<M> {
    pub pool: Vec<M>,
    pub tuples: Vec<[u32; 3]>,
    pub finding: Option<Finding>,
}

impl<M: Clone> Space<M> {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn tuple(&self, i: usize, arity: usize) -> Vec<M> {
        self.tuples[i][..arity].iter().map(|&k| self.pool[k as usize].clone()).collect()
    }
}

/// Distinct values of `canon` over `items`, in order of first appearance.
fn representatives<C: Enumerate>(
    items: &[&C::Morphism],
    canon: impl Fn(&C::Morphism) -> Option<C::Morphism>,
    over: &str,
) -> Result<Vec<C::Morphism>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for f in items {
        let r = canon(f).ok_or_else(|| {
            Error::EnumerationBudgetExceeded(format!("{over}, and the category has no canonical forms to reduce them"))
        })?;
        if seen.insert(r.clone()) {
            out.push(r);
        }
    }
    Ok(out)
}

struct Builder<M> {
    pool: Vec<M>,
    tuples: Vec<[u32; 3]>,
}

impl<M> Builder<M> {
    fn add(&mut self, items: Vec<M>) -> Vec<u32> {
        let start = self.pool.len() as u32;
        self.pool.extend(items);
        (start..self.pool.len() as u32).collect()
    }
}

pub(crate) fn space<C: Enumerate>(
    cat: &C,
    corpus: &Corpus<C::Morphism>,
    shape: Shape,
    budget: u64,
) -> Result<Space<C::Morphism>> {
    let n = corpus.morphisms.len();
    let by = |key: &[usize], k: usize| -> Vec<&C::Morphism> {
        (0..n).filter(|&i| key[i] == k).map(|i| &corpus.morphisms[i]).collect()
    };
    let full: u128 = match shape {
        Shape::Unary => n as u128,
        Shape::PairAny => (n as u128).pow(2),
        Shape::PairCommon | Shape::TripleCommon => {
            let e = shape.arity() as u32;
            (0..corpus.objects).map(|k| (by(&corpus.dom, k).len() as u128).pow(e)).sum()
        }
        Shape::Composable => (0..corpus.objects)
            .map(|k| by(&corpus.cod, k).len() as u128 * by(&corpus.dom, k).len() as u128)
            .sum(),
    };
    let reduce = full > budget as u128;
    let over = format!("{full} {} exceed the tuple budget of {budget}", shape.name());
    let mut b = Builder { pool: Vec::new(), tuples: Vec::new() };
    match shape {
        Shape::Unary => {
            let ids = b.add(corpus.morphisms.clone());
            b.tuples = ids.into_iter().map(|i| [i, 0, 0]).collect();
        }
        Shape::PairAny => {
            let all: Vec<&C::Morphism> = corpus.morphisms.iter().collect();
            let items = if reduce {
                representatives::<C>(&all, |f| cat.arrow_canonical(f), &over)?
            } else {
                corpus.morphisms.clone()
            };
            let ids = b.add(items);
            for &i in &ids {
                for &j in &ids {
                    b.tuples.push([i, j, 0]);
                }
            }
        }
        Shape::PairCommon | Shape::TripleCommon => {
            for k in 0..corpus.objects {
                let group = by(&corpus.dom, k);
                let items = if reduce {
                    representatives::<C>(&group, |f| cat.coslice_canonical(f), &over)?
                } else {
                    group.into_iter().cloned().collect()
                };
                let ids = b.add(items);
                for &i in &ids {
                    for &j in &ids {
                        if shape == Shape::PairCommon {
                            b.tuples.push([i, j, 0]);
                        } else {
                            for &l in &ids {
                                b.tuples.push([i, j, l]);
                            }
                        }
                    }
                }
                check_budget(b.tuples.len(), budget, shape)?;
            }
        }
        Shape::Composable => {
            for k in 0..corpus.objects {
                let (ins, outs) = (by(&corpus.cod, k), by(&corpus.dom, k));
                let (ins, outs) = if reduce {
                    (
                        representatives::<C>(&ins, |f| cat.precompose_canonical(f), &over)?,
                        representatives::<C>(&outs, |f| cat.coslice_canonical(f), &over)?,
                    )
                } else {
                    (ins.into_iter().cloned().collect(), outs.into_iter().cloned().collect())
                };
                let (ins, outs) = (b.add(ins), b.add(outs));
                for &i in &ins {
                    for &j in &outs {
                        b.tuples.push([i, j, 0]);
                    }
                }
                check_budget(b.tuples.len(), budget, shape)?;
            }
        }
    }
    check_budget(b.tuples.len(), budget, shape)?;
    let finding = reduce.then(|| Finding {
        topic: "reduction".into(),
        message: format!("{over}; evaluated {} tuples of isomorphism-class representatives instead", b.tuples.len()),
        data: json!({ "shape": format!("{shape:?}"), "full": full.to_string(), "evaluated": b.tuples.len() }),
    });
    Ok(Space { pool: b.pool, tuples: b.tuples, finding })
}

fn check_budget(len: usize, budget: u64, shape: Shape) -> Result<()> {
    if len as u64 > budget {
        return Err(Error::EnumerationBudgetExceeded(format!(
            "{len} {} remain after reduction, over the budget of {budget}",
            shape.name()
        )));
    }
    Ok(())
}

/// A random tuple of the given shape.
pub(crate) fn draw<C: Sample>(cat: &C, shape: Shape, rng: &mut TrialRng, p: &SampleParams) -> Vec<C::Morphism> {
    match shape {
        Shape::Unary => {
            let a = cat.random_object(rng, p);
            vec![cat.random_morphism_from(&a, rng, p)]
        }
        Shape::PairAny => {
            let a = cat.random_object(rng, p);
            let f = cat.random_morphism_from(&a, rng, p);
            let b = cat.random_object(rng, p);
            vec![f, cat.random_morphism_from(&b, rng, p)]
        }
        Shape::PairCommon | Shape::TripleCommon => {
            let a = cat.random_object(rng, p);
            (0..shape.arity()).map(|_| cat.random_morphism_from(&a, rng, p)).collect()
        }
        Shape::Composable => {
            let a = cat.random_object(rng, p);
            let f = cat.random_morphism_from(&a, rng, p);
            let g = cat.random_morphism_from(&cat.codomain(&f), rng, p);
            vec![f, g]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSet;

    #[test]
    fn check_ids_are_unique() {
        let ids: HashSet<&str> = Check::ALL.iter().map(|c| c.id()).collect();
        assert_eq!(ids.len(), Check::ALL.len());
        assert_eq!(Check::from_id("axiom3.internal_ssa"), Some(Check::InternalSsa));
    }

    #[test]
    fn finset_space_sizes() {
        let c = corpus(&FinSet, 2).unwrap();
        // 1 + 2 + 1 + 4 maps between {1, 2}
        assert_eq!(c.morphisms.len(), 8);
        let pairs = space(&FinSet, &c, Shape::PairAny, u64::MAX).unwrap();
        assert_eq!(pairs.len(), 64);
        let common = space(&FinSet, &c, Shape::PairCommon, u64::MAX).unwrap();
        assert_eq!(common.len(), 3 * 3 + 5 * 5);
        let comp = space(&FinSet, &c, Shape::Composable, u64::MAX).unwrap();
        // into 1: 1 + 1, out of 1: 1 + 2; into 2: 2 + 4, out of 2: 1 + 4
        assert_eq!(comp.len(), 2 * 3 + 6 * 5);
        assert!(comp.finding.is_none());
    }

    #[test]
    fn reduction_keeps_one_tuple_per_class() {
        let c = corpus(&FinSet, 3).unwrap();
        let full = space(&FinSet, &c, Shape::TripleCommon, u64::MAX).unwrap();
        let reduced = space(&FinSet, &c, Shape::TripleCommon, 2000).unwrap();
        assert!(reduced.len() < full.len());
        assert!(reduced.finding.is_some());
        // classes out of 1, 2, 3 points: 3, 1 + 2 + 2, 1 + 4 + 5
        assert_eq!(reduced.len(), 27 + 125 + 1000);
    }
}
