mod common;

use linlog::formula::{bang, lit, lolli, par, plus, tensor, with, Formula};
use linlog::normalized::{classify_normalized, NormalizedSequent};
use linlog::parse::{parse_formula, parse_sequent};
use linlog::product::{product_of_multiset, SimpleProduct};
use proptest::prelude::*;

/// Every formula of depth at most `depth` over `p1..=p{literals}`, `1`, `⊥`.
fn all_formulas(literals: u32, depth: usize) -> Vec<Formula> {
    let mut levels: Vec<Vec<Formula>> = vec![(1..=literals).map(lit).chain([Formula::One, Formula::Bottom]).collect()];
    for d in 1..=depth {
        let below: Vec<Formula> = levels.iter().flatten().cloned().collect();
        let prev = &levels[d - 1];
        let mut next = vec![];
        for a in &below {
            for b in &below {
                if !prev.contains(a) && !prev.contains(b) {
                    continue;
                }
                for node in [tensor, par, lolli, with, plus] {
                    next.push(node(a.clone(), b.clone()));
                }
            }
        }
        next.extend(prev.iter().cloned().map(bang));
        levels.push(next);
    }
    levels.into_iter().flatten().collect()
}

#[test]
fn print_parse_identity_exhaustive() {
    let all = all_formulas(3, 2);
    assert!(all.len() > 50_000);
    for f in all {
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }
}

proptest! {
    #[test]
    fn print_parse_identity(f in common::formula(3, 6)) {
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn sequent_print_parse(lhs in prop::collection::vec(common::formula(3, 3), 0..4),
                           rhs in prop::collection::vec(common::formula(3, 3), 0..3)) {
        let s = linlog::formula::Sequent::new(lhs, rhs);
        prop_assert_eq!(parse_sequent(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn product_multiset_identity(x in common::product(4, 5)) {
        let (y, f) = product_of_multiset(x.literals()).unwrap();
        prop_assert_eq!(&y, &x);
        prop_assert_eq!(SimpleProduct::from_formula(&f).unwrap(), x);
    }

    #[test]
    fn product_equivalence_ignores_order(mut v in prop::collection::vec(1u32..5, 1..6)) {
        let a = SimpleProduct::new(v.clone()).unwrap();
        v.reverse();
        prop_assert!(linlog::product::product_equiv(&a, &SimpleProduct::new(v).unwrap()));
    }

    #[test]
    fn normalized_constructors_classify(a in common::normalized_formula(3, 3)) {
        prop_assert_eq!(classify_normalized(&a.to_formula()).unwrap(), a);
    }

    #[test]
    fn other_top_levels_rejected(a in common::formula(3, 3), b in common::formula(3, 3)) {
        for f in [par(a.clone(), b.clone()), bang(a.clone()), Formula::One, Formula::Bottom] {
            prop_assert!(classify_normalized(&f).is_err(), "{}", f);
        }
    }

    #[test]
    fn normalized_sequents_round_trip(s in common::normalized_sequent(3, 2, 2, 1)) {
        let back = NormalizedSequent::from_sequent(&s.to_sequent()).unwrap();
        prop_assert!(back.to_sequent().same_multisets(&s.to_sequent()));
    }
}
