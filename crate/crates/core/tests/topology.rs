use num_rational::Ratio;
use proptest::prelude::*;
use so3ir_core::topology::{
    pontrjagin_factor, pontrjagin_relation, pontrjagin_relation_for, semicharacteristics, spin_split_obstruction,
    split_conditions, sw_classes_s20, sw_total_s20, uniform_intersection_solutions, wu_check, IntersectionSolution,
    Mod2Poly,
};

#[test]
fn stiefel_whitney_classes() {
    let w = sw_classes_s20();
    assert_eq!(w.len(), 6);
    assert_eq!(w[0], Mod2Poly::one());
    assert!(w[1].is_zero() && w[4].is_zero() && w[5].is_zero());
    assert_eq!(w[2], Mod2Poly::e2());
    assert_eq!(w[3], Mod2Poly::e3());
    assert!(sw_total_s20().constant_term());
    assert_eq!(sw_total_s20().to_string(), "1 + w2 + w3");
}

#[test]
fn wu_relations() {
    let c = wu_check();
    assert!(c.agree_below_4);
    assert!(c.sq1_w2_is_w3);
    assert!(c.forces_w2_squared_zero);
}

#[test]
fn pontrjagin() {
    let r = pontrjagin_relation();
    assert_eq!(r.factor, 5);
    assert!(r.identity_holds);
    assert_eq!(pontrjagin_factor(&[1, 0]), 1);
    assert!(pontrjagin_relation_for(&[1, 0]).identity_holds);
}

#[test]
fn semicharacteristic_examples() {
    let su3 = semicharacteristics([1, 0, 0], [1, 0, 1], 1);
    assert_eq!((su3.k, su3.chi_hat2), (1, 0));
    assert!(su3.lmp_consistent);
    assert!(!semicharacteristics([1, 0, 0], [1, 0, 1], 0).lmp_consistent);
    let s5 = semicharacteristics([1, 0, 0], [1, 0, 0], 0);
    assert_eq!((s5.k, s5.chi_hat2, s5.lmp_consistent), (1, 1, true));
    let z = semicharacteristics([0; 3], [0; 3], 0);
    assert_eq!((z.k, z.chi_hat2, z.lmp_consistent), (0, 0, true));
}

#[test]
fn split_examples() {
    let c = split_conditions(24, 20, 12);
    assert!(c.cond2 && c.cond3 && c.equivalent);
    let c = split_conditions(4, 0, 2);
    assert!(!c.cond3 && c.equivalent);
    let c = split_conditions(0, 0, 0);
    assert!(c.cond2 && c.cond3);
}

#[test]
fn spin_obstruction() {
    let o = spin_split_obstruction(3);
    assert_eq!(o.q, Ratio::from_integer(5));
    assert!(o.violates_11_8);
    let o = spin_split_obstruction(0);
    assert_eq!(o.q, Ratio::new(5, 4));
    assert!(o.violates_11_8);
}

#[test]
fn intersection_solutions() {
    let sols = uniform_intersection_solutions(20, 20, 60);
    for (s, t, a, b) in [(21, 1, 1, 3), (43, 3, 3, 11), (197, 17, 15, 51)] {
        assert!(sols.contains(&IntersectionSolution { s, t, a, b }));
    }
    assert!(sols.iter().all(IntersectionSolution::satisfies));
    assert!(sols.windows(2).all(|w| (w[0].t, w[0].a, w[0].b) < (w[1].t, w[1].a, w[1].b)));
    assert!(uniform_intersection_solutions(0, 1, 1).is_empty());
    assert_eq!(sols, uniform_intersection_solutions(20, 20, 60));
}

#[test]
fn intersection_scan_is_exhaustive() {
    let fast = uniform_intersection_solutions(12, 15, 45);
    let mut brute = Vec::new();
    for t in 0..=12u64 {
        let s = 10 + 11 * t;
        for a in (1..=15u64).step_by(2) {
            for b in (1..=45u64).step_by(2) {
                if (s * a * a) as i64 - (t * b * b) as i64 == 6 + 6 * t as i64 {
                    brute.push(IntersectionSolution { s, t, a, b });
                }
            }
        }
    }
    assert_eq!(fast, brute);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn split_conditions_are_equivalent(chi in -1000i64..1000, sigma in -1000i64..1000, csq in -1000i64..1000) {
        prop_assert!(split_conditions(chi, sigma, csq).equivalent);
        let c = 2 * csq;
        prop_assert!(split_conditions(c, 5 * csq / 3, csq).equivalent);
    }

    #[test]
    fn spin_split_always_obstructed(p in 0u64..1_000_000_000) {
        prop_assert!(spin_split_obstruction(p).violates_11_8);
    }
}
