mod common;

use linlog::formula::{lit, lolli, tensor, Formula, Sequent};
use linlog::proof::check_proof;
use linlog::search::{prove, SearchBudget, SearchResult};
use proptest::prelude::*;

fn two_literal_formulas(depth: usize) -> Vec<Formula> {
    let mut all: Vec<Formula> = vec![lit(1), lit(2)];
    for _ in 0..depth {
        let prev = all.clone();
        for a in &prev {
            for b in &prev {
                for node in [tensor, lolli] {
                    let f = node(a.clone(), b.clone());
                    if !all.contains(&f) {
                        all.push(f);
                    }
                }
            }
        }
    }
    all
}

fn multisets(pool: &[Formula], max: usize) -> Vec<Vec<Formula>> {
    fn grow(pool: &[Formula], from: usize, left: usize, acc: &mut Vec<Formula>, out: &mut Vec<Vec<Formula>>) {
        out.push(acc.clone());
        if left == 0 {
            return;
        }
        for i in from..pool.len() {
            acc.push(pool[i].clone());
            grow(pool, i, left - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = vec![];
    grow(pool, 0, max, &mut vec![], &mut out);
    out
}

#[test]
fn pruning_agrees_with_plain_search() {
    let lhs_pool = two_literal_formulas(1);
    let rhs_pool = two_literal_formulas(2);
    let on = SearchBudget::with_depth(15);
    let off = SearchBudget { balance_pruning: false, ..on };
    let mut count = 0;
    for lhs in multisets(&lhs_pool, 3) {
        for r in &rhs_pool {
            let s = Sequent::new(lhs.clone(), vec![r.clone()]);
            let (a, b) = (prove(&s, &on), prove(&s, &off));
            assert_eq!(a.label(), b.label(), "{s}");
            assert_ne!(a, SearchResult::BudgetExhausted, "{s}");
            count += 1;
        }
    }
    assert!(count > 5_000);
}

/// A depth bound above the rank of any cut-free proof: every rule removes a
/// connective or a unit.
fn decisive(s: &Sequent) -> SearchBudget {
    let size: usize = s.formulas().map(Formula::size).sum();
    SearchBudget { max_depth: size + s.lhs.len(), max_steps: usize::MAX, ..SearchBudget::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn proved_means_checked(s in common::bang_free_sequent(3, 2, 2)) {
        if let SearchResult::Proved(d) = prove(&s, &SearchBudget::with_depth(15)) {
            prop_assert!(check_proof(&d).is_ok());
            prop_assert!(d.conclusion.same_multisets(&s));
        }
    }

    #[test]
    fn bang_free_search_decides(s in common::bang_free_sequent(3, 2, 2)) {
        let r = prove(&s, &decisive(&s));
        prop_assert_ne!(r, SearchResult::BudgetExhausted, "{}", s);
    }

    #[test]
    fn search_is_deterministic(s in common::bang_free_sequent(3, 2, 2)) {
        let b = SearchBudget::with_depth(12);
        prop_assert_eq!(prove(&s, &b), prove(&s, &b));
    }

    #[test]
    fn normalized_proofs_check(s in common::normalized_sequent(3, 2, 2, 1)) {
        let b = SearchBudget { max_steps: 20_000, ..SearchBudget::with_depth(15) };
        if let SearchResult::Proved(d) = prove(&s.to_sequent(), &b) {
            prop_assert!(check_proof(&d).is_ok());
        }
    }
}
