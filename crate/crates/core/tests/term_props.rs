mod common;

use meadowlab::term::{parse, Substitution, Term};
use proptest::prelude::*;

const VARS: &[&str] = &["x", "y", "z", "u"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn render_then_parse_is_identity(t in common::term(VARS, 8, true, true)) {
        prop_assert_eq!(parse(&t.render()).unwrap(), t);
    }

    #[test]
    fn json_ast_round_trips(t in common::term(VARS, 6, true, true)) {
        prop_assert_eq!(Term::from_json(&t.to_json()).unwrap(), t);
    }

    /// With `s1` over {x, y} and `s2` over {z, u}, and neither introducing
    /// variables of the other's domain, applying them in turn is applying
    /// the composite.
    #[test]
    fn substitution_composes(
        t in common::term(VARS, 5, true, false),
        a in common::term(&["z", "w"], 3, false, false),
        b in common::term(&["z", "w"], 3, false, false),
        c in common::term(&["v"], 3, false, false),
        d in common::term(&["v"], 3, false, false),
    ) {
        let s1 = Substitution::new().with("x", a).with("y", b);
        let s2 = Substitution::new().with("z", c).with("u", d);
        prop_assert_eq!(t.substitute(&s1).substitute(&s2), t.substitute(&s1.then(&s2)));
    }

    #[test]
    fn a_term_matches_its_own_instances(
        pattern in common::term(&["x", "y"], 4, true, false),
        a in common::term(&["z"], 3, true, false),
        b in common::term(&["z"], 3, true, false),
    ) {
        let s = Substitution::new().with("x", a).with("y", b);
        let inst = pattern.substitute(&s);
        let mut found = Substitution::new();
        prop_assert!(pattern.match_onto(&inst, &mut found));
        prop_assert_eq!(pattern.substitute(&found), inst);
    }

    #[test]
    fn every_position_is_addressable(t in common::term(VARS, 6, true, true)) {
        for p in t.positions() {
            let sub = t.subterm(&p).unwrap().clone();
            prop_assert_eq!(t.replace_at(&p, sub).unwrap(), t.clone());
        }
    }
}
