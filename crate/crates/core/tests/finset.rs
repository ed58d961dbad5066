use proptest::prelude::*;

use infocat::arrow::{is_square, mediating_squares, verify_iso, Square};
use infocat::category::{Category, Enumerate};
use infocat::coslice::{internal_product_cone, mediating_morphisms};
use infocat::finset::{afn_combination, hartley, shannon, FinSet, FinSetMorphism, Shannon};
use infocat::measure::{InfoMeasure, LogBase};
use infocat::sample::{trial_rng, Sample, SampleParams};
use infocat::Error;

fn m(cod: usize, map: &[usize]) -> FinSetMorphism {
    FinSetMorphism::from_map(cod, map.to_vec()).unwrap()
}

/// Entropy of a fiber-size histogram, straight from the definition.
fn entropy_oracle(fibers: &[usize]) -> f64 {
    let n: usize = fibers.iter().sum();
    fibers.iter().filter(|&&c| c > 0).map(|&c| c as f64 / n as f64).map(|p| -p * p.log2()).sum()
}

#[test]
fn known_values() {
    assert_eq!(shannon(&m(4, &[0, 1, 2, 3]), LogBase::Two), Some(2.0));
    assert_eq!(shannon(&m(1, &[0, 0, 0]), LogBase::Two), Some(0.0));
    assert_eq!(hartley(&m(5, &[0, 0, 3]), LogBase::Two), Some(1.0));
    let h = shannon(&m(2, &[0, 0, 1]), LogBase::Two).unwrap();
    assert!((h - entropy_oracle(&[2, 1])).abs() < 1e-15);
    let nats = shannon(&m(2, &[0, 1]), LogBase::E).unwrap();
    assert!((nats - std::f64::consts::LN_2).abs() < 1e-15);
}

#[test]
fn empty_domain_is_undefined_for_entropy() {
    let f = m(2, &[]);
    assert_eq!(shannon(&f, LogBase::Two), None);
    assert_eq!(Shannon { base: LogBase::Two }.value(&f).unwrap(), None);
}

#[test]
fn invalid_maps_are_rejected() {
    assert!(matches!(FinSetMorphism::new(2, 2, vec![0, 2]), Err(Error::InvalidMorphism(_))));
    assert!(matches!(FinSetMorphism::new(3, 2, vec![0, 1]), Err(Error::InvalidMorphism(_))));
    assert!(matches!(FinSet.compose(&m(2, &[0, 1]), &m(3, &[0, 1])), Err(Error::ObjectMismatch(_))));
}

#[test]
fn negative_combination_coefficients_are_rejected() {
    assert!(matches!(afn_combination(-1.0, 1.0), Err(Error::NegativeCoefficient(_))));
    assert!(afn_combination(0.0, 0.0).is_ok());
}

#[test]
fn products() {
    let p = FinSet.product(&2, &3).unwrap();
    assert_eq!(p.apex, 6);
    assert_eq!(FinSet.terminal_object(), Some(1));
    let f = m(2, &[0, 1, 1]);
    let g = m(3, &[2, 2, 0]);
    let (fg, p1, p2) = internal_product_cone(&FinSet, &f, &g).unwrap().unwrap();
    assert_eq!(FinSet.compose(&p1, &fg).unwrap(), f);
    assert_eq!(FinSet.compose(&p2, &fg).unwrap(), g);
    assert!(matches!(FinSet.internal_product(&f, &m(2, &[0, 1])), Err(Error::DomainMismatch(_))));
}

#[test]
fn sections() {
    // g collapses the image of f: no section.
    let f = m(2, &[0, 1]);
    let g = m(1, &[0, 0]);
    assert!(!FinSet.section_exists(&f, &g).unwrap());
    // g injective on the image of f.
    let g = m(3, &[2, 0]);
    assert!(FinSet.section_exists(&f, &g).unwrap());
}

/// Brute-force check that the internal product is a product in the coslice
/// category: every cone over `h` factors through it exactly once.
#[test]
fn internal_product_universal_property() {
    let objs = FinSet.objects_up_to(2).unwrap();
    for &a in &objs {
        let out: Vec<_> = objs.iter().flat_map(|b| FinSet.homs(&a, b).unwrap()).collect();
        for f in &out {
            for g in &out {
                for h in &out {
                    let ks1: Vec<_> = FinSet.homs(&h.codomain(), &f.codomain()).unwrap();
                    let ks2: Vec<_> = FinSet.homs(&h.codomain(), &g.codomain()).unwrap();
                    for k1 in ks1.iter().filter(|k| FinSet.compose(k, h).unwrap() == *f) {
                        for k2 in ks2.iter().filter(|k| FinSet.compose(k, h).unwrap() == *g) {
                            let us = mediating_morphisms(&FinSet, f, g, h, k1, k2).unwrap();
                            assert_eq!(us.len(), 1, "{f:?} {g:?} {h:?}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn external_product_universal_property() {
    let objs = FinSet.objects_up_to(2).unwrap();
    let all: Vec<_> = objs.iter().flat_map(|a| objs.iter().flat_map(move |b| FinSet.homs(a, b).unwrap())).collect();
    let squares = |x: &FinSetMorphism, y: &FinSetMorphism| -> Vec<Square<FinSetMorphism>> {
        let tops = FinSet.homs(&x.domain(), &y.domain()).unwrap();
        let bottoms = FinSet.homs(&x.codomain(), &y.codomain()).unwrap();
        let mut out = Vec::new();
        for t in &tops {
            for b in &bottoms {
                let sq = Square { top: t.clone(), bottom: b.clone() };
                if is_square(&FinSet, x, y, &sq).unwrap() {
                    out.push(sq);
                }
            }
        }
        out
    };
    for f in all.iter().take(6) {
        for g in all.iter().take(6) {
            for h in all.iter().take(6) {
                for s1 in squares(h, f) {
                    for s2 in squares(h, g) {
                        assert_eq!(mediating_squares(&FinSet, f, g, h, &s1, &s2).unwrap().len(), 1);
                    }
                }
            }
        }
    }
}

fn morphism(max: usize) -> impl Strategy<Value = FinSetMorphism> {
    (1..=max, 1..=max).prop_flat_map(|(d, c)| proptest::collection::vec(0..c, d).prop_map(move |map| m(c, &map)))
}

/// A composable chain `h ∘ g ∘ f`.
fn chain() -> impl Strategy<Value = (FinSetMorphism, FinSetMorphism, FinSetMorphism)> {
    (1..=5usize, 1..=5usize, 1..=5usize, 1..=5usize).prop_flat_map(|(a, b, c, d)| {
        (
            proptest::collection::vec(0..b, a),
            proptest::collection::vec(0..c, b),
            proptest::collection::vec(0..d, c),
        )
            .prop_map(move |(f, g, h)| (m(b, &f), m(c, &g), m(d, &h)))
    })
}

proptest! {
    #[test]
    fn composition_is_associative((f, g, h) in chain()) {
        let left = FinSet.compose(&h, &FinSet.compose(&g, &f).unwrap()).unwrap();
        let right = FinSet.compose(&FinSet.compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identities_are_neutral(f in morphism(6)) {
        let l = FinSet.compose(&FinSet.identity(&f.codomain()).unwrap(), &f).unwrap();
        let r = FinSet.compose(&f, &FinSet.identity(&f.domain()).unwrap()).unwrap();
        prop_assert_eq!(&l, &f);
        prop_assert_eq!(&r, &f);
    }

    #[test]
    fn shannon_matches_the_fiber_oracle(f in morphism(8)) {
        let h = shannon(&f, LogBase::Two).unwrap();
        prop_assert!((h - entropy_oracle(&f.fiber_sizes())).abs() < 1e-12);
    }

    #[test]
    fn random_isomorphic_copies_are_isomorphic_with_equal_information(f in morphism(5), seed in 0u64..1000) {
        let mut rng = trial_rng(seed, 0);
        let p = SampleParams { max_size: 5, measure_compatible: false };
        let (_, d) = FinSet.random_iso(&f.domain(), &mut rng, &p);
        let (_, c) = FinSet.random_iso(&f.codomain(), &mut rng, &p);
        let g = FinSet.compose(&c.forward, &FinSet.compose(&f, &d.backward).unwrap()).unwrap();
        let iso = FinSet.arrow_isomorphism(&f, &g).unwrap().expect("conjugates are isomorphic");
        prop_assert!(verify_iso(&FinSet, &f, &g, &iso).unwrap());
        let (a, b) = (shannon(&f, LogBase::Two).unwrap(), shannon(&g, LogBase::Two).unwrap());
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn projections_recover_the_factors(
        (f, g) in (1..=5usize, 1..=4usize, 1..=4usize).prop_flat_map(|(a, b, c)| (
            proptest::collection::vec(0..b, a).prop_map(move |v| m(b, &v)),
            proptest::collection::vec(0..c, a).prop_map(move |v| m(c, &v)),
        ))
    ) {
        let (fg, p1, p2) = internal_product_cone(&FinSet, &f, &g).unwrap().unwrap();
        prop_assert_eq!(FinSet.compose(&p1, &fg).unwrap(), f.clone());
        prop_assert_eq!(FinSet.compose(&p2, &fg).unwrap(), g.clone());
        let ext = FinSet.external_product(&f, &g).unwrap().unwrap();
        prop_assert_eq!(ext.domain(), f.domain() * g.domain());
        let hf = shannon(&f, LogBase::Two).unwrap();
        let hg = shannon(&g, LogBase::Two).unwrap();
        let he = shannon(&ext, LogBase::Two).unwrap();
        prop_assert!((he - hf - hg).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip(f in morphism(6)) {
        let env = FinSet.encode(&f);
        let back = <FinSetMorphism as infocat::json::Decode>::decode(&env).unwrap();
        prop_assert_eq!(back, f);
    }
}
