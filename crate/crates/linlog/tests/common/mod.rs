#![allow(dead_code)]

use linlog::formula::{bang, lit, lolli, par, plus, tensor, with, Formula, Sequent};
use linlog::normalized::{NormalizedFormula, NormalizedSequent};
use linlog::product::SimpleProduct;
use proptest::prelude::*;

pub fn formula(literals: u32, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        (1..=literals).prop_map(lit),
        Just(Formula::One),
        Just(Formula::Bottom),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| tensor(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| par(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| lolli(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| with(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| plus(a, b)),
            inner.prop_map(bang),
        ]
    })
}

/// Formulas over `⊥` and `1` without `!`.
pub fn bot_formula(depth: u32) -> impl Strategy<Value = Formula> {
    prop_oneof![Just(Formula::Bottom), Just(Formula::One)].prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| tensor(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| par(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| lolli(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| with(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| plus(a, b)),
        ]
    })
}

pub fn product(literals: u32, max_len: usize) -> impl Strategy<Value = SimpleProduct> {
    prop::collection::vec(1..=literals, 1..=max_len).prop_map(|v| SimpleProduct::new(v).unwrap())
}

pub fn normalized_formula(literals: u32, max_len: usize) -> impl Strategy<Value = NormalizedFormula> {
    let p = move || product(literals, max_len);
    prop_oneof![
        (p(), p()).prop_map(|(x, y)| NormalizedFormula::Horn(x, y)),
        (p(), p(), p()).prop_map(|(x, y1, y2)| NormalizedFormula::PlusHorn(x, y1, y2)),
        (p(), p(), p(), p()).prop_map(|(x1, y1, x2, y2)| NormalizedFormula::WithHorn(x1, y1, x2, y2)),
        (p(), p(), p()).prop_map(|(u, v, y)| NormalizedFormula::Embedded(u, v, y)),
    ]
}

pub fn normalized_sequent(literals: u32, max_len: usize, max_delta: usize, max_gamma: usize) -> impl Strategy<Value = NormalizedSequent> {
    (
        product(literals, max_len),
        prop::collection::vec(normalized_formula(literals, max_len), 0..=max_delta),
        prop::collection::vec(normalized_formula(literals, max_len), 0..=max_gamma),
        product(literals, max_len),
    )
        .prop_map(|(w, d, g, z)| NormalizedSequent::new(w, d, g, z))
}

/// Sequents over literals and `⊗`, `⊸`, `⅋`, `&`, `⊕`, `⊥`, `1` without `!`.
pub fn bang_free_sequent(literals: u32, depth: u32, max_side: usize) -> impl Strategy<Value = Sequent> {
    let f = move || {
        let leaf = prop_oneof![(1..=literals).prop_map(lit), Just(Formula::One), Just(Formula::Bottom)];
        leaf.prop_recursive(depth, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| tensor(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| par(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| lolli(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| with(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| plus(a, b)),
            ]
        })
    };
    (prop::collection::vec(f(), 0..=max_side), prop::collection::vec(f(), 0..=max_side))
        .prop_map(|(l, r)| Sequent::new(l, r))
}
