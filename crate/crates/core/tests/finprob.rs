use proptest::prelude::*;

use infocat::category::{Category, Enumerate};
use infocat::finprob::{check_bmp, internal_product_existence, FinProb, FinProbMorphism, FinProbObject};
use infocat::measure::LogBase;
use infocat::noisy::{noisy_information, NoisyMorphism, NoisyObject};
use infocat::noisy_prob::{continuous_capacity, continuous_noisy_information, embed_uniform, NoisyProbMorphism, NoisyProbObject};
use infocat::rational::{ratio, Rational};
use infocat::Error;

fn space(w: &[(i64, i64)]) -> FinProbObject {
    FinProbObject::new(w.iter().map(|&(p, q)| ratio(p, q)).collect()).unwrap()
}

#[test]
fn morphisms_must_preserve_measure() {
    let x = space(&[(1, 4), (1, 4), (1, 2)]);
    let y = space(&[(1, 2), (1, 2)]);
    assert!(FinProbMorphism::new(x.clone(), y.clone(), vec![0, 0, 1]).is_ok());
    assert!(matches!(FinProbMorphism::new(x.clone(), y, vec![0, 1, 1]), Err(Error::InvalidMorphism(_))));
    let pushed = FinProbMorphism::pushing_forward(x, 2, vec![0, 1, 1]).unwrap();
    assert_eq!(pushed.codomain().weights(), &[ratio(1, 4), ratio(3, 4)]);
}

#[test]
fn composition_preserves_measure() {
    let x = space(&[(1, 4), (1, 4), (1, 2)]);
    let f = FinProbMorphism::pushing_forward(x, 2, vec![0, 0, 1]).unwrap();
    let g = FinProbMorphism::pushing_forward(f.codomain().clone(), 1, vec![0, 0]).unwrap();
    let gf = FinProb.compose(&g, &f).unwrap();
    assert!(check_bmp(gf.map(), gf.domain().weights(), gf.codomain().weights()));
}

/// The pairing of two measure-preserving maps is measure-preserving into the
/// product measure only when the two maps are independent.
#[test]
fn internal_products_exist_exactly_for_independent_pairs() {
    let x = space(&[(1, 4), (1, 4), (1, 4), (1, 4)]);
    let f = FinProbMorphism::pushing_forward(x.clone(), 2, vec![0, 0, 1, 1]).unwrap();
    let g = FinProbMorphism::pushing_forward(x.clone(), 2, vec![0, 1, 0, 1]).unwrap();
    assert!(FinProb.internal_product(&f, &g).unwrap().is_some());
    assert!(FinProb.internal_product(&f, &f).unwrap().is_none());
}

#[test]
fn existence_study_is_seeded() {
    let a = internal_product_existence(3, 200, 4).unwrap();
    let b = internal_product_existence(3, 200, 4).unwrap();
    assert_eq!(a, b);
    assert!(a.existing <= a.trials);
    assert_eq!(a.rate, a.existing as f64 / 200.0);
    assert!(matches!(internal_product_existence(3, 0, 4), Err(Error::InvalidArgument(_))));
}

#[test]
fn homs_are_the_measure_preserving_maps() {
    let x = space(&[(1, 2), (1, 4), (1, 4)]);
    let y = space(&[(1, 2), (1, 2)]);
    let homs = FinProb.homs(&x, &y).unwrap();
    let brute: Vec<_> = (0..8usize)
        .map(|k| vec![k & 1, (k >> 1) & 1, (k >> 2) & 1])
        .filter(|m| check_bmp(m, x.weights(), y.weights()))
        .collect();
    assert_eq!(homs.len(), brute.len());
    assert_eq!(homs.len(), 2);
}

#[test]
fn zero_mass_messages() {
    let space = space(&[(1, 2), (1, 2), (0, 1)]);
    let msgs = FinProbObject::new(vec![ratio(1, 1), ratio(0, 1)]).unwrap();
    assert!(NoisyProbObject::new(space.clone(), msgs.clone(), vec![0, 0, 0]).is_err());
    let src = NoisyProbObject::new(space, msgs, vec![0, 0, 1]).unwrap();
    let f = NoisyProbMorphism::new(src.clone(), src, vec![0, 1, 2]).unwrap();
    assert_eq!(continuous_noisy_information(&f, LogBase::Two), Some(0.0));
    // The channel has no row for a message of probability zero.
    assert_eq!(continuous_capacity(&f, 1e-9), Err(Error::ZeroMassFiber(1)));
}

#[test]
fn uniform_embedding_of_a_noiseless_identity() {
    let x = NoisyObject::noiseless(4).unwrap();
    let f = NoisyMorphism::new(x.clone(), x, vec![0, 1, 2, 3]).unwrap();
    let e = embed_uniform(&f);
    assert_eq!(continuous_noisy_information(&e, LogBase::Two), Some(2.0));
    assert!((continuous_capacity(&e, 1e-9).unwrap().capacity - 2.0).abs() < 1e-12);
    let w: Vec<Rational> = e.source().space().weights().to_vec();
    assert!(w.iter().all(|x| *x == ratio(1, 4)));
}

fn noisy(max: usize) -> impl Strategy<Value = NoisyMorphism> {
    let object = (1..=max).prop_flat_map(|m| {
        (1..=m).prop_flat_map(move |a| {
            proptest::collection::vec(0..a, m - a).prop_map(move |rest| {
                let pi: Vec<usize> = (0..a).chain(rest).collect();
                NoisyObject::new(m, a, pi).unwrap()
            })
        })
    });
    (object.clone(), object).prop_flat_map(|(s, t)| {
        let n = t.m();
        proptest::collection::vec(0..n, s.m()).prop_map(move |map| NoisyMorphism::new(s.clone(), t.clone(), map).unwrap())
    })
}

proptest! {
    #[test]
    fn uniform_embedding_preserves_information(f in noisy(8)) {
        let e = embed_uniform(&f);
        let c = continuous_noisy_information(&e, LogBase::Two).unwrap();
        prop_assert!((c - noisy_information(&f, LogBase::Two)).abs() < 1e-9);
    }

    #[test]
    fn pushforward_is_always_measure_preserving(
        (w, map, n) in (1..=5usize, 1..=4usize).prop_flat_map(|(d, c)| (
            proptest::collection::vec(1i64..10, d),
            proptest::collection::vec(0..c, d),
            Just(c),
        ))
    ) {
        let total: i64 = w.iter().sum();
        let x = FinProbObject::new(w.iter().map(|&k| ratio(k, total)).collect()).unwrap();
        let f = FinProbMorphism::pushing_forward(x, n, map).unwrap();
        prop_assert!(check_bmp(f.map(), f.domain().weights(), f.codomain().weights()));
        let id = FinProb.identity(f.codomain()).unwrap();
        prop_assert_eq!(FinProb.compose(&id, &f).unwrap(), f);
    }
}
