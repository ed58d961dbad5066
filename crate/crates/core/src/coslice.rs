//! The coslice category `C_A` of morphisms out of a fixed object `A`.
//!
//! A morphism `h₁ → h₂` of `C_A` is a `k: cod h₁ → cod h₂` with
//! `k ∘ h₁ = h₂`. Internal products are products here; the projections of
//! `f ×_A g` are the object projections of `cod f × cod g`.

use crate::category::{Category, Enumerate};
use crate::error::Result;

pub fn is_triangle<C: Category>(cat: &C, h1: &C::Morphism, h2: &C::Morphism, k: &C::Morphism) -> Result<bool> {
    if cat.domain(h1) != cat.domain(h2)
        || cat.domain(k) != cat.codomain(h1)
        || cat.codomain(k) != cat.codomain(h2)
    {
        return Ok(false);
    }
    Ok(cat.compose(k, h1)? == *h2)
}

/// `f ×_A g` with its projections onto `f` and `g`.
pub fn internal_product_cone<C: Category>(
    cat: &C,
    f: &C::Morphism,
    g: &C::Morphism,
) -> Result<Option<(C::Morphism, C::Morphism, C::Morphism)>> {
    let Some(prod) = cat.internal_product(f, g)? else {
        return Ok(None);
    };
    let Some(cone) = cat.product(&cat.codomain(f), &cat.codomain(g)) else {
        return Ok(None);
    };
    Ok(Some((prod, cone.first, cone.second)))
}

/// All `u: cod h → cod(f ×_A g)` mediating the cone `(k1, k2)` over `h`,
/// i.e. `u ∘ h = f ×_A g`, `π₁ ∘ u = k1`, `π₂ ∘ u = k2`.
pub fn mediating_morphisms<C: Enumerate>(
    cat: &C,
    f: &C::Morphism,
    g: &C::Morphism,
    h: &C::Morphism,
    k1: &C::Morphism,
    k2: &C::Morphism,
) -> Result<Vec<C::Morphism>> {
    let Some((prod, p1, p2)) = internal_product_cone(cat, f, g)? else {
        return Ok(Vec::new());
    };
    let mut found = Vec::new();
    for u in cat.homs(&cat.codomain(h), &cat.codomain(&prod))? {
        if cat.compose(&u, h)? == prod
            && cat.compose(&p1, &u)? == *k1
            && cat.compose(&p2, &u)? == *k2
        {
            found.push(u);
        }
    }
    Ok(found)
}
