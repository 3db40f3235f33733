use std::collections::BTreeSet;

use proptest::prelude::*;

use dimer_core::catalog;
use dimer_core::charts::analyze_fixed_points;
use dimer_core::heights::{char_poly, default_reference, newton_polygon};
use dimer_core::io::{model_to_json, parse_model};
use dimer_core::lattice::torus_dimension;
use dimer_core::quiver::quiver_of;
use dimer_core::stability::{generic_theta, Theta};

fn zero_sets(name: &str, theta: &Theta) -> (BTreeSet<Vec<usize>>, bool) {
    let m = catalog::named(name).unwrap();
    let d0 = default_reference(&m).unwrap();
    let polygon = newton_polygon(&char_poly(&m, &d0).unwrap());
    let a = analyze_fixed_points(&m, theta, &d0, &polygon).unwrap();
    let q = quiver_of(&m);
    let sets = a
        .fixed_points
        .iter()
        .map(|f| f.candidate.zero_arrows(&q))
        .collect();
    (sets, a.certificate.passed())
}

#[test]
fn conifold_chambers_are_related_by_a_flop() {
    let m = catalog::conifold();
    let q = quiver_of(&m);
    let theta = generic_theta(&m, &q, &default_reference(&m).unwrap(), 0, 100)
        .unwrap()
        .theta;
    let flipped = theta.scaled((-1).into());
    let (a, pa) = zero_sets("conifold", &theta);
    let (b, pb) = zero_sets("conifold", &flipped);
    assert!(pa && pb);
    assert_eq!(a.len(), 2);
    assert_eq!(b.len(), 2);
    assert!(a.is_disjoint(&b), "the two small resolutions use different fixed points");
}

#[test]
fn every_fixture_has_rank_two_or_three() {
    for (name, m) in catalog::all() {
        let r = torus_dimension(&quiver_of(&m)).unwrap();
        assert!(r == 2 || r == 3, "{name}: {r}");
    }
}

#[test]
fn documents_round_trip_through_the_whole_pipeline() {
    for (name, m) in catalog::all() {
        let back = parse_model(&model_to_json(&m)).unwrap();
        let d0 = default_reference(&m).unwrap();
        assert_eq!(
            char_poly(&m, &d0).unwrap(),
            char_poly(&back, &default_reference(&back).unwrap()).unwrap(),
            "{name}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// For any seed the number of fixed points is the normalized area of the polygon.
    #[test]
    fn fixed_points_count_the_area(seed in 0u64..10_000, which in 0usize..4) {
        let name = ["conifold", "honeycomb", "c3-z3", "conifold-z2"][which];
        let m = catalog::named(name).unwrap();
        let q = quiver_of(&m);
        let d0 = default_reference(&m).unwrap();
        let theta = generic_theta(&m, &q, &d0, seed, 100).unwrap().theta;
        let polygon = newton_polygon(&char_poly(&m, &d0).unwrap());
        let a = analyze_fixed_points(&m, &theta, &d0, &polygon).unwrap();
        prop_assert_eq!(a.fixed_points.len() as i64, polygon.area2());
        prop_assert!(a.certificate.passed());
        prop_assert!(a.product_character_shared());
        prop_assert!(a.transitions.iter().all(|t| t.det == 1));
    }
}
