#![allow(dead_code)]

use proptest::prelude::*;

use ltlf_core::semantics::{LassoWord, Symbol};
use ltlf_core::syntax::Formula;

pub const APS: [&str; 2] = ["p", "q"];

pub fn aps() -> Vec<String> {
    APS.iter().map(|s| s.to_string()).collect()
}

fn pnf_leaf() -> BoxedStrategy<Formula> {
    prop_oneof![
        1 => Just(Formula::True),
        1 => Just(Formula::False),
        6 => prop::sample::select(APS.to_vec()).prop_flat_map(|a| {
            prop_oneof![Just(Formula::atom(a)), Just(Formula::not(Formula::atom(a)))]
        }),
    ]
    .boxed()
}

fn grow(inner: BoxedStrategy<Formula>) -> BoxedStrategy<Formula> {
    prop_oneof![
        inner.clone().prop_map(Formula::next),
        inner.clone().prop_map(Formula::eventually),
        inner.clone().prop_map(Formula::always),
        (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
        (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
        (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::until(a, b)),
        (inner.clone(), inner).prop_map(|(a, b)| Formula::release(a, b)),
    ]
    .boxed()
}

/// PNF formulas over `p`, `q` with at most `depth` nested operators.
pub fn pnf(depth: u32) -> BoxedStrategy<Formula> {
    pnf_leaf().prop_recursive(depth, 24, 2, grow).boxed()
}

/// Arbitrary formulas, negation allowed anywhere.
pub fn formula(depth: u32) -> BoxedStrategy<Formula> {
    pnf_leaf()
        .prop_recursive(depth, 24, 2, |inner| {
            prop_oneof![1 => inner.clone().prop_map(Formula::not), 7 => grow(inner)]
        })
        .boxed()
}

pub fn symbol() -> impl Strategy<Value = Symbol> {
    prop::sample::subsequence(APS.to_vec(), 0..=APS.len()).prop_map(Symbol::new)
}

pub fn lasso() -> impl Strategy<Value = LassoWord> {
    (prop::collection::vec(symbol(), 0..=3), prop::collection::vec(symbol(), 1..=4))
        .prop_map(|(u, v)| LassoWord::new(u, v).expect("loop is non-empty"))
}

/// PNF formulas not rooted in `&` or `|`, the elements of a conjunction.
pub fn temporal(depth: u32) -> BoxedStrategy<Formula> {
    pnf(depth).prop_filter("conjunction element", Formula::is_temporal).boxed()
}
