use meadowlab::algebra::{make_zn_inverse_division, TableAlgebra, TotalAlgebra, SHIPPED_TABLES};
use meadowlab::homs::{
    detect_bot_splitting, map_rho, quotient_by, saturate_table, HomError, HomMap, QuotientMode,
};
use meadowlab::laws::{check_law, check_suite, LawSet, Mode};

fn tables() -> Vec<TableAlgebra> {
    SHIPPED_TABLES.iter().map(|n| TableAlgebra::shipped(n).unwrap()).collect()
}

fn zn_tables(ns: impl IntoIterator<Item = u64>) -> Vec<TableAlgebra> {
    ns.into_iter().map(|n| TableAlgebra::from_algebra(&make_zn_inverse_division(n).unwrap()).unwrap().0).collect()
}

fn avl_holds(t: &TableAlgebra) -> bool {
    let avl = LawSet::builtin("avl").unwrap();
    check_law(t, &avl.laws()[0], Mode::Exhaustive).unwrap().holds
}

fn non_bot(t: &TableAlgebra) -> impl Iterator<Item = usize> + '_ {
    (0..t.size()).filter(move |&i| i != t.bot())
}

fn verified(h: &HomMap) {
    if let Err(f) = h.verify() {
        panic!("{} -> {}: {f}", h.source.name(), h.target.name());
    }
    assert_eq!(h.apply(h.source.zero()), h.target.zero());
    assert_eq!(h.apply(h.source.one()), h.target.one());
    assert_eq!(h.apply(h.source.bot()), h.target.bot());
}

#[test]
fn every_returned_map_is_a_homomorphism() {
    let mut all = tables();
    all.extend(zn_tables(2..=12));
    let mut seen = 0;
    for t in &all {
        let rho = map_rho(t).unwrap();
        verified(&rho);
        verified(&HomMap::identity(t).then(&rho));
        for a in non_bot(t) {
            for mode in [QuotientMode::Standard, QuotientMode::Prime] {
                match quotient_by(t, &a, mode) {
                    Ok(q) => {
                        verified(&q.hom);
                        seen += 1;
                    }
                    Err(HomError::ZeroLevel(_) | HomError::Postcondition { .. }) => {}
                    Err(e) => panic!("{} by {}: {e}", t.name(), t.label(a)),
                }
            }
        }
    }
    assert!(seen > 100);
}

#[test]
fn standard_quotients_keep_avl() {
    let mut all = tables();
    all.extend(zn_tables([2, 3, 5, 7, 11, 13]));
    for t in all.iter().filter(|t| avl_holds(t)) {
        for a in non_bot(t) {
            let q = quotient_by(t, &a, QuotientMode::Standard).unwrap();
            assert!(avl_holds(&q.hom.target), "{}", q.hom.target.name());
        }
    }
}

#[test]
fn a_reciprocal_times_its_base_is_one_up_to_zero_of_a() {
    let mut all = tables();
    all.extend(zn_tables(2..=12));
    for t in &all {
        for b in 0..t.size() {
            let a = t.div(&t.one(), &b);
            let za = t.mul(&t.zero(), &a);
            assert_eq!(t.add(&t.mul(&a, &b), &za), t.add(&t.one(), &za), "{} at b={}", t.name(), t.label(b));
        }
    }
}

#[test]
fn zero_divisors_split_reciprocals_in_z6_split() {
    let t = TableAlgebra::shipped("z6-split").unwrap();
    assert!(avl_holds(&t));
    let e = |s: &str| t.decode(s).unwrap();
    let (half, third) = (t.div(&t.one(), &e("2")), t.div(&t.one(), &e("3")));
    assert_ne!(half, t.bot());
    assert_ne!(third, t.bot());
    assert_eq!(t.add(&half, &third), t.bot());
    let (a, b) = detect_bot_splitting(&t).unwrap().unwrap();
    assert_eq!(t.add(&a, &b), t.bot());
}

#[test]
fn the_prime_quotient_can_lose_avl() {
    let t = TableAlgebra::shipped("z6-split").unwrap();
    let q = quotient_by(&t, &t.decode("t1").unwrap(), QuotientMode::Prime).unwrap();
    verified(&q.hom);
    assert!(!avl_holds(&q.hom.target));
}

#[test]
fn saturation_reaches_a_common_meadow_and_spares_the_avoided_element() {
    let set = LawSet::resolve("e-ftc-cm+avl+nvl").unwrap();
    for t in tables() {
        for avoid in std::iter::once(None).chain(non_bot(&t).map(Some)) {
            let s = saturate_table(&t, avoid).unwrap();
            verified(&s.hom);
            let r = check_suite(&s.hom.target, &set, Mode::Exhaustive).unwrap();
            assert!(r.all_hold(), "{r}");
            if let Some(a) = avoid {
                assert_ne!(s.hom.apply(a), s.hom.target.bot(), "{} avoiding {}", t.name(), t.label(a));
            }
        }
    }
}
