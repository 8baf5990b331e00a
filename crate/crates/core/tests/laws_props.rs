mod common;

use meadowlab::algebra::{
    enlarge, make_int_direct_division, make_int_inverse_division, make_rational_cm, make_three_level_lattice,
    make_zn_inverse_division, render_value, TotalAlgebra, Valuation,
};
use meadowlab::laws::{check_at, check_law, check_suite, Law, LawSet, Mode, Verdict};
use meadowlab::term::{ConditionalEquation, Equation};
use proptest::prelude::*;

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn law(name: &str) -> Law {
    LawSet::all_builtin().get(name).unwrap().clone()
}

/// Reads a verdict's counterexample back into elements of `alg`.
fn witness<A: TotalAlgebra>(alg: &A, v: &Verdict) -> Valuation<A::Elem> {
    let cx = v.counterexample.as_ref().expect("a counterexample");
    cx.iter().map(|(k, e)| (k.clone(), alg.decode(&render_value(e)).unwrap())).collect()
}

fn rechecks<A: TotalAlgebra>(alg: &A, l: &Law, v: &Verdict) {
    assert!(!v.holds);
    let again = check_at(alg, l, &witness(alg, v)).unwrap();
    assert!(!again.holds, "{} in {}: {v} does not re-check", l.name, alg.name());
    assert_eq!(again.values, v.values);
}

#[test]
fn shipped_counterexamples_recheck() {
    for n in [4, 6, 8, 9, 10, 12] {
        let z = make_zn_inverse_division(n).unwrap();
        rechecks(&z, &law("avl"), &check_law(&z, &law("avl"), Mode::Exhaustive).unwrap());
    }
    let ii = enlarge(make_int_inverse_division()).unwrap();
    rechecks(&ii, &law("avl"), &check_law(&ii, &law("avl"), Mode::fuzz(10_000)).unwrap());
    let id = enlarge(make_int_direct_division()).unwrap();
    rechecks(&id, &law("div_mul"), &check_law(&id, &law("div_mul"), Mode::fuzz(10_000)).unwrap());
    let l3 = make_three_level_lattice();
    rechecks(&l3, &law("phi_235"), &check_law(&l3, &law("phi_235"), Mode::fuzz(1)).unwrap());
}

#[test]
fn axioms_hold_in_every_zn_up_to_twenty() {
    let set = LawSet::e_ftc_cm();
    assert_eq!(set.len(), 16);
    for n in 2..=20 {
        let z = make_zn_inverse_division(n).unwrap();
        let r = check_suite(&z, &set, Mode::Exhaustive).unwrap();
        assert_eq!(r.holding(), 16, "{r}");
    }
}

#[test]
fn laws_of_all_rings_hold_in_all_fields() {
    let rings: Vec<u64> = (2..=12).collect();
    let mut shared = 0;
    for l in LawSet::derived().iter() {
        let in_rings = rings.iter().all(|&n| {
            check_law(&make_zn_inverse_division(n).unwrap(), l, Mode::Exhaustive).unwrap().holds
        });
        if in_rings {
            shared += 1;
            for p in PRIMES {
                let v = check_law(&make_zn_inverse_division(p).unwrap(), l, Mode::Exhaustive).unwrap();
                assert!(v.holds, "{v}");
            }
        }
    }
    assert!(shared > 0);
}

#[test]
fn phi_235_separates_lattice3() {
    let phi = law("phi_235");
    for p in PRIMES {
        assert!(check_law(&make_zn_inverse_division(p).unwrap(), &phi, Mode::Exhaustive).unwrap().holds);
    }
    assert!(check_law(&make_rational_cm(), &phi, Mode::fuzz(1)).unwrap().holds);
    assert!(!check_law(&make_three_level_lattice(), &phi, Mode::fuzz(1)).unwrap().holds);
}

#[test]
fn nvl_holds_and_avl_fails_in_integers() {
    let nvl = law("nvl");
    for n in 2..=12 {
        assert!(check_law(&make_zn_inverse_division(n).unwrap(), &nvl, Mode::Exhaustive).unwrap().holds);
    }
    let ii = enlarge(make_int_inverse_division()).unwrap();
    assert!(check_law(&ii, &nvl, Mode::fuzz(10_000)).unwrap().holds);
    let at_two = Valuation::from([("x".to_string(), ii.decode("2").unwrap())]);
    assert!(!check_at(&ii, &law("avl"), &at_two).unwrap().holds);
}

#[test]
fn div_mul_fails_for_direct_division_at_the_known_point() {
    let id = enlarge(make_int_direct_division()).unwrap();
    let v: Valuation<_> =
        [("x", "1"), ("y", "3"), ("u", "3"), ("v", "1")].iter().map(|(k, e)| (k.to_string(), id.decode(e).unwrap())).collect();
    let r = check_at(&id, &law("div_mul"), &v).unwrap();
    assert!(!r.holds);
    let sides = r.values.unwrap();
    assert_eq!((render_value(&sides.lhs), render_value(&sides.rhs)), ("bot".to_string(), "1".to_string()));
}

const XY: &[&str] = &["x", "y"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Whatever an exhaustive check reports about a random equation, its
    /// counterexample fails again on its own.
    #[test]
    fn random_counterexamples_recheck(
        lhs in common::term(XY, 3, true, true),
        rhs in common::term(XY, 3, true, true),
        n in 2u64..=8,
    ) {
        let l = Law::new("random", ConditionalEquation::from(Equation::new(lhs, rhs)));
        let z = make_zn_inverse_division(n).unwrap();
        let v = check_law(&z, &l, Mode::Exhaustive).unwrap();
        if !v.holds {
            let again = check_at(&z, &l, &witness(&z, &v)).unwrap();
            prop_assert!(!again.holds);
        }
    }
}
