#![allow(dead_code)]

use meadowlab::term::Term;
use proptest::prelude::*;

fn leaf(vars: &'static [&'static str], with_bot: bool) -> BoxedStrategy<Term> {
    let var = proptest::sample::select(vars).prop_map(Term::var);
    if with_bot {
        prop_oneof![6 => var, 1 => Just(Term::Zero), 1 => Just(Term::One), 1 => Just(Term::Bot)].boxed()
    } else {
        prop_oneof![6 => var, 1 => Just(Term::Zero), 1 => Just(Term::One)].boxed()
    }
}

/// Terms over `vars` at most `depth` levels deep. Each level stops at a leaf
/// with probability 1/4, so sizes spread out instead of collapsing to leaves.
pub fn term(vars: &'static [&'static str], depth: u32, with_bot: bool, with_cond: bool) -> BoxedStrategy<Term> {
    if depth == 0 {
        return leaf(vars, with_bot);
    }
    let sub = || term(vars, depth - 1, with_bot, with_cond);
    let binary = (0..3u8, sub(), sub()).prop_map(|(op, a, b)| match op {
        0 => Term::add(a, b),
        1 => Term::mul(a, b),
        _ => Term::div(a, b),
    });
    let mut node = prop_oneof![6 => binary, 1 => sub().prop_map(Term::neg)].boxed();
    if with_cond {
        node = prop_oneof![8 => node, 1 => (sub(), sub(), sub()).prop_map(|(x, y, z)| Term::cond(x, y, z))].boxed();
    }
    prop_oneof![1 => leaf(vars, with_bot), 3 => node].boxed()
}
