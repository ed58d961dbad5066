//! The arrow category `Ĉ` of a category `C`.
//!
//! Objects of `Ĉ` are morphisms of `C`; a morphism `h₁ → h₂` is a commuting
//! square `h₂ ∘ top = bottom ∘ h₁`. External products are products here.

use crate::category::{ArrowIso, Category, Enumerate};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Square<M> {
    pub top: M,
    pub bottom: M,
}

pub fn is_square<C: Category>(cat: &C, h1: &C::Morphism, h2: &C::Morphism, sq: &Square<C::Morphism>) -> Result<bool> {
    if cat.domain(&sq.top) != cat.domain(h1)
        || cat.codomain(&sq.top) != cat.domain(h2)
        || cat.domain(&sq.bottom) != cat.codomain(h1)
        || cat.codomain(&sq.bottom) != cat.codomain(h2)
    {
        return Ok(false);
    }
    Ok(cat.compose(h2, &sq.top)? == cat.compose(&sq.bottom, h1)?)
}

pub fn identity_square<C: Category>(cat: &C, h: &C::Morphism) -> Result<Square<C::Morphism>> {
    Ok(Square {
        top: cat.identity(&cat.domain(h))?,
        bottom: cat.identity(&cat.codomain(h))?,
    })
}

/// `outer ∘ inner`, pasting two squares side by side.
pub fn compose_squares<C: Category>(
    cat: &C,
    outer: &Square<C::Morphism>,
    inner: &Square<C::Morphism>,
) -> Result<Square<C::Morphism>> {
    Ok(Square {
        top: cat.compose(&outer.top, &inner.top)?,
        bottom: cat.compose(&outer.bottom, &inner.bottom)?,
    })
}

/// `f ×̂ g` together with its two projection squares onto `f` and `g`.
pub fn external_product_cone<C: Category>(
    cat: &C,
    f: &C::Morphism,
    g: &C::Morphism,
) -> Result<Option<(C::Morphism, Square<C::Morphism>, Square<C::Morphism>)>> {
    let Some(prod) = cat.external_product(f, g)? else {
        return Ok(None);
    };
    let (Some(src), Some(dst)) = (
        cat.product(&cat.domain(f), &cat.domain(g)),
        cat.product(&cat.codomain(f), &cat.codomain(g)),
    ) else {
        return Ok(None);
    };
    let p1 = Square { top: src.first, bottom: dst.first };
    let p2 = Square { top: src.second, bottom: dst.second };
    Ok(Some((prod, p1, p2)))
}

/// Checks that a claimed witness really is an arrow isomorphism `f ≅ g`.
pub fn verify_iso<C: Category>(cat: &C, f: &C::Morphism, g: &C::Morphism, iso: &ArrowIso<C::Morphism>) -> Result<bool> {
    for w in [&iso.domain, &iso.codomain] {
        let src = cat.domain(&w.forward);
        let dst = cat.codomain(&w.forward);
        if cat.domain(&w.backward) != dst || cat.codomain(&w.backward) != src {
            return Ok(false);
        }
        if cat.compose(&w.backward, &w.forward)? != cat.identity(&src)?
            || cat.compose(&w.forward, &w.backward)? != cat.identity(&dst)?
        {
            return Ok(false);
        }
    }
    let sq = Square { top: iso.domain.forward.clone(), bottom: iso.codomain.forward.clone() };
    is_square(cat, f, g, &sq)
}

/// All squares `h → f ×̂ g` whose composites with the two projections are
/// `s1` and `s2`. The universal property says there is exactly one.
pub fn mediating_squares<C: Enumerate>(
    cat: &C,
    f: &C::Morphism,
    g: &C::Morphism,
    h: &C::Morphism,
    s1: &Square<C::Morphism>,
    s2: &Square<C::Morphism>,
) -> Result<Vec<Square<C::Morphism>>> {
    let Some((prod, p1, p2)) = external_product_cone(cat, f, g)? else {
        return Ok(Vec::new());
    };
    let tops = cat.homs(&cat.domain(h), &cat.domain(&prod))?;
    let bottoms = cat.homs(&cat.codomain(h), &cat.codomain(&prod))?;
    let mut found = Vec::new();
    for top in &tops {
        if cat.compose(&p1.top, top)? != s1.top || cat.compose(&p2.top, top)? != s2.top {
            continue;
        }
        for bottom in &bottoms {
            let sq = Square { top: top.clone(), bottom: bottom.clone() };
            if cat.compose(&p1.bottom, bottom)? == s1.bottom
                && cat.compose(&p2.bottom, bottom)? == s2.bottom
                && is_square(cat, h, &prod, &sq)?
            {
                found.push(sq);
            }
        }
    }
    Ok(found)
}
