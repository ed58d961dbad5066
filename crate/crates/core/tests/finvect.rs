use proptest::prelude::*;

use infocat::category::{Category, Enumerate};
use infocat::field::{Entries, Field};
use infocat::finvect::{rank_info, section_exists_linear, FinVect, LinearMorphism};
use infocat::rational::ratio;
use infocat::Error;

fn gf(p: u32, rows: usize, cols: usize, data: &[Vec<i64>]) -> LinearMorphism {
    LinearMorphism::from_ints(Field::prime(p).unwrap(), rows, cols, data).unwrap()
}

/// Rank by counting the image: `|im| = p^rank`.
fn rank_by_image(p: u32, f: &LinearMorphism) -> usize {
    let Entries::Mod(e) = f.entries() else { unreachable!() };
    let (r, c) = (f.rows(), f.cols());
    let mut image = std::collections::BTreeSet::new();
    for k in 0..(p as usize).pow(c as u32) {
        let v: Vec<u32> = (0..c).map(|j| ((k / (p as usize).pow(j as u32)) % p as usize) as u32).collect();
        let w: Vec<u32> = (0..r).map(|i| (0..c).map(|j| e[i * c + j] * v[j]).sum::<u32>() % p).collect();
        image.insert(w);
    }
    let mut rank = 0;
    while (p as usize).pow(rank as u32) < image.len() {
        rank += 1;
    }
    rank
}

#[test]
fn entries_are_reduced() {
    let f = gf(3, 1, 3, &[vec![4, -1, 3]]);
    assert_eq!(f.entries(), &Entries::Mod(vec![1, 2, 0]));
    assert!(matches!(LinearMorphism::from_ints(Field::GF2, 2, 2, &[vec![1, 0]]), Err(Error::InvalidMorphism(_))));
    assert!(Field::prime(4).is_err());
}

#[test]
fn rank_depends_on_the_field() {
    // det = 3, singular only in characteristic 3.
    let rows = [vec![1, 1], vec![-1, 2]];
    assert_eq!(gf(2, 2, 2, &rows).rank(), 2);
    assert_eq!(gf(3, 2, 2, &rows).rank(), 1);
    let q = LinearMorphism::from_rationals(2, 2, vec![vec![ratio(1, 1), ratio(1, 1)], vec![ratio(-1, 1), ratio(2, 1)]]).unwrap();
    assert_eq!(rank_info(&q), 2);
    assert!(q.inverse().is_some());
    assert!(gf(3, 2, 2, &rows).inverse().is_none());
}

#[test]
fn zero_dimensional_spaces() {
    let k = FinVect::new(Field::GF2);
    let z = LinearMorphism::zero(Field::GF2, 0, 3);
    assert_eq!(z.rank(), 0);
    let t = k.terminal_object().unwrap();
    assert_eq!(k.unique_to_terminal(&3).unwrap(), z);
    assert_eq!(t, 0);
}

#[test]
fn sections_over_gf2() {
    let f = gf(2, 2, 1, &[vec![1], vec![1]]);
    // g kills the image of f.
    let g = gf(2, 1, 2, &[vec![1, 1]]);
    assert!(!section_exists_linear(&f, &g).unwrap());
    let g = gf(2, 1, 2, &[vec![1, 0]]);
    assert!(section_exists_linear(&f, &g).unwrap());
}

#[test]
fn every_gf3_map_of_small_dimension_has_rank_of_its_image() {
    let k = FinVect::new(Field::GF3);
    for r in 0..=2 {
        for c in 0..=2 {
            for f in k.homs(&c, &r).unwrap() {
                assert_eq!(f.rank(), rank_by_image(3, &f));
            }
        }
    }
}

fn matrix(p: u32, r: usize, c: usize) -> impl Strategy<Value = LinearMorphism> {
    proptest::collection::vec(proptest::collection::vec(0..p as i64, c), r).prop_map(move |rows| gf(p, r, c, &rows))
}

fn chain(p: u32) -> impl Strategy<Value = (LinearMorphism, LinearMorphism, LinearMorphism)> {
    (0..=3usize, 0..=3usize, 0..=3usize, 0..=3usize).prop_flat_map(move |(a, b, c, d)| (matrix(p, b, a), matrix(p, c, b), matrix(p, d, c)))
}

proptest! {
    #[test]
    fn composition_is_associative((f, g, h) in chain(3)) {
        let k = FinVect::new(Field::GF3);
        let l = k.compose(&h, &k.compose(&g, &f).unwrap()).unwrap();
        let r = k.compose(&k.compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn rank_matches_image_count(f in (0..=3usize, 0..=3usize).prop_flat_map(|(r, c)| matrix(2, r, c))) {
        prop_assert_eq!(f.rank(), rank_by_image(2, &f));
        prop_assert_eq!(f.rank(), f.transpose().rank());
        prop_assert_eq!(f.rref().rank(), f.rank());
    }

    #[test]
    fn rank_is_monotone_under_composition((f, g, _) in chain(2)) {
        let k = FinVect::new(Field::GF2);
        let gf = k.compose(&g, &f).unwrap();
        prop_assert!(gf.rank() <= f.rank().min(g.rank()));
        // Equality exactly when a section exists.
        prop_assert_eq!(gf.rank() == f.rank(), section_exists_linear(&f, &g).unwrap());
    }

    #[test]
    fn products_are_direct_sums((f, g) in (0..=2usize, 0..=2usize, 0..=2usize).prop_flat_map(|(a, b, c)| (matrix(3, b, a), matrix(3, c, a)))) {
        let k = FinVect::new(Field::GF3);
        let fg = k.internal_product(&f, &g).unwrap().unwrap();
        prop_assert_eq!(&fg, &f.vstack(&g));
        let ext = k.external_product(&f, &g).unwrap().unwrap();
        prop_assert_eq!(ext.rank(), f.rank() + g.rank());
        let cone = k.product(&f.rows(), &g.rows()).unwrap();
        prop_assert_eq!(k.compose(&cone.first, &fg).unwrap(), f);
        prop_assert_eq!(k.compose(&cone.second, &fg).unwrap(), g);
    }

    #[test]
    fn json_round_trip(f in (0..=3usize, 0..=3usize).prop_flat_map(|(r, c)| matrix(3, r, c))) {
        let env = FinVect::new(Field::GF3).encode(&f);
        prop_assert_eq!(<LinearMorphism as infocat::json::Decode>::decode(&env).unwrap(), f);
    }
}
