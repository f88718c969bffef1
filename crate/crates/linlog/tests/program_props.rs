mod common;

use linlog::compile::program_to_proof;
use linlog::product::SimpleProduct;
use linlog::program::{check_strong_solution, find_strong_solution, run_strong, EdgeLabel, EnumBounds, Program, Vertex};
use linlog::proof::{check_proof, proof_from_sexp};
use linlog::search::{prove, SearchBudget, SearchResult};
use proptest::prelude::*;

fn label() -> impl Strategy<Value = EdgeLabel> {
    let p = || common::product(3, 2);
    prop_oneof![
        (p(), p()).prop_map(|(x, y)| EdgeLabel::Horn(x, y)),
        (p(), prop::collection::vec(1u32..=3, 0..=2), p()).prop_map(|(y1, mut x2, y2)| {
            x2.sort();
            EdgeLabel::Push(y1, x2, y2)
        }),
        p().prop_map(EdgeLabel::Pop),
    ]
}

fn vertex() -> impl Strategy<Value = Vertex> {
    Just(Vertex::leaf()).prop_recursive(4, 6, 2, |inner| {
        prop_oneof![
            (label(), inner.clone()).prop_map(|(l, t)| Vertex::step(l, t)),
            (label(), inner.clone(), label(), inner).prop_map(|(l1, t1, l2, t2)| Vertex::fork(l1, t1, l2, t2)),
        ]
    })
}

fn size(b: &[u32]) -> i64 {
    b.len() as i64
}

fn check_conservation(v: &Vertex, t: &linlog::program::ExecutionTrace) -> Result<(), TestCaseError> {
    for e in &v.edges {
        let w = e.target.id;
        if let (Some(before), Some(after)) = (&t.out[v.id], &t.out[w]) {
            let total = |out: &[u32], stack: &[Vec<u32>]| size(out) + stack.iter().map(|s| size(s)).sum::<i64>();
            let delta = total(after, &t.stack[w]) - total(before, &t.stack[v.id]);
            let expected = match &e.label {
                EdgeLabel::Horn(x, y) => {
                    prop_assert_eq!(&t.stack[w], &t.stack[v.id]);
                    y.len() as i64 - x.len() as i64
                }
                EdgeLabel::Push(y1, x2, y2) => {
                    prop_assert_eq!(t.stack[w].len(), t.stack[v.id].len() + 1);
                    prop_assert_eq!(size(after), size(x2) + y2.len() as i64);
                    y1.len() as i64 + y2.len() as i64
                }
                EdgeLabel::Pop(p) => -(p.len() as i64),
            };
            prop_assert_eq!(delta, expected, "{}", e.label);
        }
        check_conservation(&e.target, t)?;
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn run_strong_is_deterministic(v in vertex(), w in common::product(3, 3)) {
        let p = Program::unchecked(v);
        prop_assert_eq!(run_strong(&p, &w), run_strong(&p, &w));
    }

    #[test]
    fn tokens_are_conserved(v in vertex(), w in common::product(3, 3)) {
        let p = Program::unchecked(v);
        let t = run_strong(&p, &w);
        prop_assert_eq!(t.out[0].as_deref(), Some(w.literals()));
        check_conservation(&p.root, &t)?;
    }

    #[test]
    fn undefined_is_inherited(v in vertex(), w in common::product(3, 3)) {
        let p = Program::unchecked(v);
        let t = run_strong(&p, &w);
        fn walk(v: &Vertex, t: &linlog::program::ExecutionTrace) -> bool {
            v.edges.iter().all(|e| (t.out[v.id].is_some() || t.out[e.target.id].is_none()) && walk(&e.target, t))
        }
        prop_assert!(walk(&p.root, &t));
    }

    #[test]
    fn program_sexp_round_trip(v in vertex()) {
        let p = Program::unchecked(v);
        if p.validate().is_ok() {
            prop_assert_eq!(Program::from_sexp(&p.to_sexp()).unwrap(), p);
        }
    }

    #[test]
    fn enumerated_solutions_rederive(s in common::normalized_sequent(3, 2, 2, 1)) {
        if let Some(p) = find_strong_solution(&s, EnumBounds::default()) {
            prop_assert!(check_strong_solution(&p, &s));
            let d = program_to_proof(&p, &s).unwrap();
            prop_assert!(check_proof(&d).is_ok());
            prop_assert!(d.conclusion.same_multisets(&s.to_sequent()));
        }
    }

    #[test]
    fn proof_sexp_round_trip(s in common::normalized_sequent(3, 2, 2, 1)) {
        let b = SearchBudget { max_steps: 20_000, ..SearchBudget::with_depth(15) };
        if let SearchResult::Proved(d) = prove(&s.to_sequent(), &b) {
            let text = d.to_sexp();
            let back = proof_from_sexp(&text).unwrap();
            prop_assert_eq!(back.to_sexp(), text);
            prop_assert_eq!(back, d);
        }
    }
}

#[test]
fn horn_example_trace() {
    let prod = |v: &[u32]| SimpleProduct::new(v.to_vec()).unwrap();
    let p = Program::new(Vertex::step(EdgeLabel::Horn(prod(&[1]), prod(&[3])), Vertex::leaf())).unwrap();
    let t = run_strong(&p, &prod(&[1, 2]));
    assert_eq!(t.out[1].as_deref(), Some(&[2, 3][..]));
    assert!(t.stack[1].is_empty());
}
