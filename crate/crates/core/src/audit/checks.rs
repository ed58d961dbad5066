//! Evaluation of a single check on a single tuple.

use super::plan::Check;
use super::report::ViolationKind;
use crate::category::{Enumerate, IsoWitness};
use crate::error::Result;
use crate::measure::{InfoMeasure, Measured};
use crate::sample::{Sample, SampleParams, TrialRng};

pub(crate) struct Ctx<'a, C: Enumerate + Sample> {
    pub cat: &'a C,
    pub measure: &'a dyn InfoMeasure<C>,
    /// Zero for exact measures.
    pub tol: f64,
    pub exact: bool,
    pub params: SampleParams,
}

#[derive(Debug, Clone)]
pub(crate) struct Failure<M> {
    pub kind: ViolationKind,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub delta: Option<f64>,
    pub note: Option<String>,
    /// Derived morphisms worth showing next to the tuple.
    pub extra: Vec<M>,
}

#[derive(Debug, Clone)]
pub(crate) enum Outcome<M> {
    Pass,
    Skip,
    Fail(Vec<Failure<M>>),
}

enum Verdict {
    Pass,
    Skip,
    Fail(ViolationKind, Option<f64>, Option<f64>, Option<f64>, Option<String>),
}

/// Collects the verdicts of the parts of one check.
struct Tally<M> {
    any_ran: bool,
    failures: Vec<Failure<M>>,
}

impl<M: Clone> Tally<M> {
    fn new() -> Self {
        Tally { any_ran: false, failures: Vec::new() }
    }

    fn push(&mut self, v: Verdict, extra: &[M]) {
        match v {
            Verdict::Skip => {}
            Verdict::Pass => self.any_ran = true,
            Verdict::Fail(kind, lhs, rhs, delta, note) => {
                self.any_ran = true;
                self.failures.push(Failure { kind, lhs, rhs, delta, note, extra: extra.to_vec() });
            }
        }
    }

    fn structure(&mut self, holds: bool, what: &str, extra: &[M]) {
        let v = if holds {
            Verdict::Pass
        } else {
            Verdict::Fail(ViolationKind::Structure, None, None, None, Some(what.to_string()))
        };
        self.push(v, extra);
    }

    fn finish(self) -> Outcome<M> {
        if !self.failures.is_empty() {
            Outcome::Fail(self.failures)
        } else if self.any_ran {
            Outcome::Pass
        } else {
            Outcome::Skip
        }
    }
}

impl<C: Enumerate + Sample> Ctx<'_, C> {
    fn m(&self, f: &C::Morphism) -> Result<Option<Measured>> {
        self.measure.eval(f)
    }

    fn values_equal(&self, a: f64, b: f64) -> bool {
        if self.exact {
            a == b
        } else {
            (a - b).abs() <= self.tol
        }
    }

    /// Structural keys decide when both sides carry one.
    fn measured_equal(&self, a: &Measured, b: &Measured) -> bool {
        match (&a.key, &b.key) {
            (Some(x), Some(y)) => x == y,
            _ => self.values_equal(a.value, b.value),
        }
    }

    /// Checks are restricted to tuples on which every value involved is
    /// defined; anything else is a skip.
    fn equal(&self, a: Option<Measured>, b: Option<Measured>) -> Verdict {
        match (a, b) {
            (Some(a), Some(b)) if self.measured_equal(&a, &b) => Verdict::Pass,
            (Some(a), Some(b)) => Verdict::Fail(ViolationKind::Equality, Some(a.value), Some(b.value), Some((a.value - b.value).abs()), None),
            _ => Verdict::Skip,
        }
    }

    fn equal_values(&self, a: Option<f64>, b: Option<f64>) -> Verdict {
        match (a, b) {
            (Some(x), Some(y)) if self.values_equal(x, y) => Verdict::Pass,
            (Some(x), Some(y)) => Verdict::Fail(ViolationKind::Equality, Some(x), Some(y), Some((x - y).abs()), None),
            _ => Verdict::Skip,
        }
    }

    /// `a ≤ b` up to tolerance.
    fn leq(&self, a: Option<f64>, b: Option<f64>) -> Verdict {
        match (a, b) {
            (Some(x), Some(y)) if x <= y + self.tol => Verdict::Pass,
            (Some(x), Some(y)) => Verdict::Fail(ViolationKind::Inequality, Some(x), Some(y), Some(x - y), None),
            _ => Verdict::Skip,
        }
    }

    fn conjugate(&self, f: &C::Morphism, rng: &mut TrialRng) -> Result<(C::Morphism, IsoWitness<C::Morphism>, IsoWitness<C::Morphism>)> {
        let (_, alpha) = self.cat.random_iso(&self.cat.domain(f), rng, &self.params);
        let (_, beta) = self.cat.random_iso(&self.cat.codomain(f), rng, &self.params);
        let g = self.cat.compose(&beta.forward, &self.cat.compose(f, &alpha.backward)?)?;
        Ok((g, alpha, beta))
    }

    /// Whether the first projection `X × T → X` is invertible, with inverse
    /// the pairing of `id_X` and `X → T`.
    fn first_projection_invertible(&self, x: &C::Object) -> Result<bool> {
        let cat = self.cat;
        let Some(t) = cat.terminal_object() else { return Ok(false) };
        let Some(cone) = cat.product(x, &t) else { return Ok(false) };
        let Some(e) = cat.internal_product(&cat.identity(x)?, &cat.unique_to_terminal(x)?)? else {
            return Ok(false);
        };
        Ok(cat.compose(&cone.first, &e)? == cat.identity(x)?
            && cat.compose(&e, &cone.first)? == cat.identity(&cone.apex)?)
    }
}

fn sum(terms: &[(f64, &Option<Measured>)]) -> Option<f64> {
    let mut s = 0.0;
    for (c, m) in terms {
        s += c * m.as_ref()?.value;
    }
    Some(s)
}

fn value(m: &Option<Measured>) -> Option<f64> {
    m.as_ref().map(|m| m.value)
}

pub(crate) fn evaluate<C: Enumerate + Sample>(
    ctx: &Ctx<'_, C>,
    check: Check,
    tuple: &[C::Morphism],
    rng: &mut TrialRng,
) -> Result<Outcome<C::Morphism>> {
    let cat = ctx.cat;
    let mut tally = Tally::new();
    let f = &tuple[0];
    let (a, b) = (cat.domain(f), cat.codomain(f));
    match check {
        Check::Invariance => {
            let (g, _, _) = ctx.conjugate(f, rng)?;
            tally.push(ctx.equal(ctx.m(f)?, ctx.m(&g)?), &[g]);
        }
        Check::DestinationMatching => {
            tally.push(ctx.leq(value(&ctx.m(f)?), value(&ctx.m(&cat.identity(&b)?)?)), &[]);
        }
        Check::SourceMatching => {
            tally.push(ctx.leq(value(&ctx.m(f)?), value(&ctx.m(&cat.identity(&a)?)?)), &[]);
        }
        Check::Idempotence => {
            if let Some(ff) = cat.internal_product(f, f)? {
                tally.push(ctx.equal(ctx.m(&ff)?, ctx.m(f)?), &[ff]);
            }
        }
        Check::TerminalObject => {
            let t = cat.terminal_object().expect("audited categories have terminal objects");
            let homs = cat.homs(&a, &t)?;
            let unique = cat.unique_to_terminal(&a)?;
            tally.structure(
                homs.len() == 1 && homs[0] == unique,
                &format!("{} morphisms from the domain to the terminal object", homs.len()),
                &homs,
            );
        }
        Check::TerminalExternal => {
            let t = cat.terminal_object().expect("terminal object");
            if let Some(p) = cat.external_product(f, &cat.identity(&t)?)? {
                let (pa, pb) = (cat.product(&a, &t), cat.product(&b, &t));
                let square = match (pa, pb) {
                    (Some(pa), Some(pb)) => cat.compose(&pb.first, &p)? == cat.compose(f, &pa.first)?,
                    _ => false,
                };
                let holds = square && ctx.first_projection_invertible(&a)? && ctx.first_projection_invertible(&b)?;
                tally.structure(holds, "the projections do not form an isomorphism f ×̂ id_T ≅ f", &[p]);
            }
        }
        Check::TerminalInternal => {
            let t = cat.unique_to_terminal(&a)?;
            if let Some(p) = cat.internal_product(f, &t)? {
                let tt = cat.terminal_object().expect("terminal object");
                let holds = match cat.product(&b, &tt) {
                    Some(cone) => cat.compose(&cone.first, &p)? == *f && ctx.first_projection_invertible(&b)?,
                    None => false,
                };
                tally.structure(holds, "the first projection is not a coslice isomorphism f ×_A t ≅ f", &[p]);
            }
        }
        Check::TrivialExternal => {
            let t = cat.terminal_object().expect("terminal object");
            if let Some(p) = cat.external_product(f, &cat.identity(&t)?)? {
                tally.push(ctx.equal(ctx.m(&p)?, ctx.m(f)?), &[p]);
            }
        }
        Check::TrivialInternal => {
            let t = cat.unique_to_terminal(&a)?;
            if let Some(p) = cat.internal_product(f, &t)? {
                tally.push(ctx.equal(ctx.m(&p)?, ctx.m(f)?), &[p]);
            }
        }
        Check::TerminalZero => {
            let t = cat.terminal_object().expect("terminal object");
            let id_t = cat.identity(&t)?;
            tally.push(ctx.equal_values(value(&ctx.m(&id_t)?), Some(0.0)), &[id_t]);
            let to_t = cat.unique_to_terminal(&a)?;
            tally.push(ctx.equal_values(value(&ctx.m(&to_t)?), Some(0.0)), &[to_t]);
        }
        Check::ExternalAdditivity => {
            let g = &tuple[1];
            if let Some(p) = cat.external_product(f, g)? {
                let rhs = sum(&[(1.0, &ctx.m(f)?), (1.0, &ctx.m(g)?)]);
                tally.push(ctx.equal_values(value(&ctx.m(&p)?), rhs), &[p]);
            }
        }
        Check::IsoExternalProduct => {
            let g = &tuple[1];
            let (f2, a1, b1) = ctx.conjugate(f, rng)?;
            let (g2, a2, b2) = ctx.conjugate(g, rng)?;
            let (p, p2) = (cat.external_product(f, g)?, cat.external_product(&f2, &g2)?);
            let alpha = cat.external_product(&a1.forward, &a2.forward)?;
            let beta = cat.external_product(&b1.forward, &b2.forward)?;
            match (p, p2, alpha, beta) {
                (None, None, _, _) => {}
                (Some(p), Some(p2), Some(alpha), Some(beta)) => {
                    let holds = cat.compose(&beta, &p)? == cat.compose(&p2, &alpha)?;
                    tally.structure(holds, "(β₁ ×̂ β₂) ∘ (f ×̂ g) differs from (f' ×̂ g') ∘ (α₁ ×̂ α₂)", &[f2, g2, p, p2]);
                }
                _ => tally.structure(false, "external product exists on one side of the isomorphism only", &[f2, g2]),
            }
        }
        Check::Projection => {
            let g = &tuple[1];
            let b2 = cat.domain(g);
            let t = cat.terminal_object().expect("terminal object");
            if let (Some(cone), Some(tb)) = (cat.product(&a, &b2), cat.product(&t, &b2)) {
                let lhs = cat.external_product(&cat.unique_to_terminal(&a)?, &cat.identity(&b2)?)?;
                let e = cat.internal_product(&cat.unique_to_terminal(&b2)?, &cat.identity(&b2)?)?;
                let holds = match (&lhs, &e) {
                    (Some(lhs), Some(e)) => {
                        cat.compose(e, &cone.second)? == *lhs
                            && cat.compose(&tb.second, e)? == cat.identity(&b2)?
                            && cat.compose(e, &tb.second)? == cat.identity(&tb.apex)?
                    }
                    _ => false,
                };
                let shown: Vec<C::Morphism> = [Some(cone.second), lhs].into_iter().flatten().collect();
                tally.structure(holds, "π_B is not coslice isomorphic to t ×̂ id_B", &shown);
            }
        }
        Check::ProjectionIrrelevance => {
            let b2 = cat.domain(&tuple[1]);
            if let Some(cone) = cat.product(&a, &b2) {
                let fp = cat.compose(f, &cone.first)?;
                tally.push(ctx.equal(ctx.m(&fp)?, ctx.m(f)?), &[fp]);
            }
        }
        Check::IsoInternalProduct => {
            let g = &tuple[1];
            let (_, k1) = cat.random_iso(&b, rng, &ctx.params);
            let (_, k2) = cat.random_iso(&cat.codomain(g), rng, &ctx.params);
            let (f2, g2) = (cat.compose(&k1.forward, f)?, cat.compose(&k2.forward, g)?);
            let (p, p2) = (cat.internal_product(f, g)?, cat.internal_product(&f2, &g2)?);
            match (p, p2) {
                (None, None) => {}
                (Some(p), Some(p2)) => {
                    let holds = match cat.external_product(&k1.forward, &k2.forward)? {
                        Some(k) => cat.compose(&k, &p)? == p2,
                        None => false,
                    };
                    tally.structure(holds, "(k₁ ×̂ k₂) ∘ (f ×_A g) differs from k₁f ×_A k₂g", &[f2, g2, p, p2]);
                }
                _ => tally.structure(false, "internal product exists on one side of the isomorphism only", &[f2, g2]),
            }
        }
        Check::InternalMonotonicity => {
            if let Some(p) = cat.internal_product(f, &tuple[1])? {
                tally.push(ctx.leq(value(&ctx.m(f)?), value(&ctx.m(&p)?)), &[p]);
            }
        }
        Check::Subadditivity => {
            let g = &tuple[1];
            if let Some(p) = cat.internal_product(f, g)? {
                let rhs = sum(&[(1.0, &ctx.m(f)?), (1.0, &ctx.m(g)?)]);
                tally.push(ctx.leq(value(&ctx.m(&p)?), rhs), &[p]);
            }
        }
        Check::InternalSsa => {
            let (g, h) = (&tuple[1], &tuple[2]);
            if let (Some(fg), Some(gh)) = (cat.internal_product(f, g)?, cat.internal_product(g, h)?) {
                if let Some(fgh) = cat.internal_product(&fg, h)? {
                    let rhs = sum(&[(1.0, &ctx.m(&fg)?), (1.0, &ctx.m(&gh)?), (-1.0, &ctx.m(g)?)]);
                    tally.push(ctx.leq(value(&ctx.m(&fgh)?), rhs), &[fg, gh, fgh]);
                }
            }
        }
        Check::Monotonicity => {
            let g = &tuple[1];
            let gf = cat.compose(g, f)?;
            let (x, y) = (ctx.m(&gf)?, ctx.m(f)?);
            tally.push(ctx.leq(value(&x), value(&y)), &[gf.clone()]);
            // The equality case must match the existence of a section.
            if let (Some(x), Some(y)) = (x, y) {
                let equal = ctx.measured_equal(&x, &y);
                let section = cat.section_exists(f, g)?;
                if equal != section {
                    let note = if section {
                        "a section exists but I(g ∘ f) < I(f)"
                    } else {
                        "I(g ∘ f) = I(f) but no section exists"
                    };
                    let v = Verdict::Fail(ViolationKind::Iff, Some(x.value), Some(y.value), Some(x.value - y.value), Some(note.into()));
                    tally.push(v, &[gf]);
                }
            }
        }
        Check::IsoComposition => {
            let g = &tuple[1];
            let p = &ctx.params;
            let (_, alpha) = cat.random_iso(&a, rng, p);
            let (_, beta) = cat.random_iso(&b, rng, p);
            let (_, gamma) = cat.random_iso(&cat.codomain(g), rng, p);
            let f2 = cat.compose(&beta.forward, &cat.compose(f, &alpha.backward)?)?;
            let g2 = cat.compose(&gamma.forward, &cat.compose(g, &beta.backward)?)?;
            let lhs = cat.compose(&gamma.forward, &cat.compose(g, f)?)?;
            let rhs = cat.compose(&cat.compose(&g2, &f2)?, &alpha.forward)?;
            tally.structure(lhs == rhs, "γ ∘ (g ∘ f) differs from (g' ∘ f') ∘ α", &[f2, g2]);
        }
        Check::IsoCosliceComposition => {
            let g = &tuple[1];
            let (_, k) = cat.random_iso(&b, rng, &ctx.params);
            let (_, beta) = cat.random_iso(&cat.codomain(g), rng, &ctx.params);
            let e2 = cat.compose(&k.forward, f)?;
            let a2 = cat.compose(&beta.forward, &cat.compose(g, &k.backward)?)?;
            let lhs = cat.compose(&beta.forward, &cat.compose(g, f)?)?;
            let rhs = cat.compose(&a2, &e2)?;
            tally.structure(lhs == rhs, "β ∘ (a ∘ e) differs from a' ∘ e'", &[e2, a2]);
        }
    }
    Ok(tally.finish())
}
