use proptest::prelude::*;

use infocat::category::{Category, Enumerate};
use infocat::dual::{image_cardinality_info, image_dimension_info, Dual, DualMorphism};
use infocat::field::Field;
use infocat::finset::{FinSet, FinSetMorphism};
use infocat::finvect::{FinVect, LinearMorphism};

fn star(cod: usize, map: &[usize]) -> DualMorphism<FinSetMorphism> {
    DualMorphism::new(FinSetMorphism::from_map(cod, map.to_vec()).unwrap())
}

#[test]
fn composition_reverses() {
    let d = Dual(FinSet);
    // f: 3 → 2 in the base is f*: 2 → 3 in the dual.
    let f = star(2, &[0, 1, 1]);
    let g = star(3, &[2, 0]);
    assert_eq!(d.domain(&f), 2);
    assert_eq!(d.codomain(&f), 3);
    let gf = d.compose(&g, &f).unwrap();
    assert_eq!(gf.inner, FinSet.compose(&f.inner, &g.inner).unwrap());
}

#[test]
fn products_are_coproducts() {
    let d = Dual(FinSet);
    assert_eq!(d.product(&2, &3).unwrap().apex, 5);
    assert_eq!(d.terminal_object(), Some(0));
    // f* ×_A g* is the case split B ⊔ C → A.
    let f = star(2, &[0, 1, 1]);
    let g = star(2, &[1]);
    let p = d.internal_product(&f, &g).unwrap().unwrap();
    assert_eq!(p.inner.map(), &[0, 1, 1, 1]);
    assert_eq!(image_cardinality_info(&p), 2);
}

#[test]
fn image_measures() {
    assert_eq!(image_cardinality_info(&star(4, &[3, 3, 0])), 2);
    let v = LinearMorphism::from_ints(Field::GF2, 2, 3, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
    assert_eq!(image_dimension_info(&DualMorphism::new(v)), 2);
}

#[test]
fn homs_are_base_homs_reversed() {
    let d = Dual(FinSet);
    for a in 1..=3 {
        for b in 1..=3 {
            let dual: Vec<_> = d.homs(&a, &b).unwrap().into_iter().map(|m| m.inner).collect();
            assert_eq!(dual, FinSet.homs(&b, &a).unwrap());
        }
    }
}

fn chain() -> impl Strategy<Value = (DualMorphism<FinSetMorphism>, DualMorphism<FinSetMorphism>, DualMorphism<FinSetMorphism>)> {
    (1..=4usize, 1..=4usize, 1..=4usize, 1..=4usize).prop_flat_map(|(a, b, c, d)| {
        (
            proptest::collection::vec(0..a, b),
            proptest::collection::vec(0..b, c),
            proptest::collection::vec(0..c, d),
        )
            .prop_map(move |(f, g, h)| (star(a, &f), star(b, &g), star(c, &h)))
    })
}

proptest! {
    #[test]
    fn dual_composition_is_associative((f, g, h) in chain()) {
        let d = Dual(FinSet);
        let l = d.compose(&h, &d.compose(&g, &f).unwrap()).unwrap();
        let r = d.compose(&d.compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn image_cardinality_is_monotone((f, g, _) in chain()) {
        let d = Dual(FinSet);
        let gf = d.compose(&g, &f).unwrap();
        prop_assert!(image_cardinality_info(&gf) <= image_cardinality_info(&f));
        prop_assert_eq!(image_cardinality_info(&gf) == image_cardinality_info(&f), d.section_exists(&f, &g).unwrap());
    }

    #[test]
    fn linear_dual_products(rows in proptest::collection::vec(proptest::collection::vec(0i64..2, 3), 0..=3),
                           more in proptest::collection::vec(proptest::collection::vec(0i64..2, 3), 0..=3)) {
        let k = Dual(FinVect::new(Field::GF2));
        let f = DualMorphism::new(LinearMorphism::from_ints(Field::GF2, 3, rows.len(), &transpose(&rows, 3)).unwrap());
        let g = DualMorphism::new(LinearMorphism::from_ints(Field::GF2, 3, more.len(), &transpose(&more, 3)).unwrap());
        let p = k.internal_product(&f, &g).unwrap().unwrap();
        prop_assert_eq!(&p.inner, &f.inner.hstack(&g.inner));
        let ext = k.external_product(&f, &g).unwrap().unwrap();
        prop_assert_eq!(image_dimension_info(&ext), image_dimension_info(&f) + image_dimension_info(&g));
    }
}

fn transpose(cols: &[Vec<i64>], rows: usize) -> Vec<Vec<i64>> {
    (0..rows).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}
