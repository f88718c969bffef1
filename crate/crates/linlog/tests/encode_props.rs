mod common;

use linlog::balance::{bot_count, BotCount};
use linlog::compile::program_to_proof;
use linlog::encode::{census, encode_sequent, Encoder, EncodingParams, Target};
use linlog::extract::{extract_program, ttobot_transform};
use linlog::formula::{plus, tensor, with, Formula};
use linlog::proof::check_proof;
use linlog::program::check_strong_solution;
use linlog::search::{prove, SearchBudget, SearchResult};
use proptest::prelude::*;

proptest! {
    #[test]
    fn bot_count_is_a_fold(a in common::bot_formula(5)) {
        prop_assert_eq!(bot_count(&tensor(a.clone(), a.clone())).unwrap(), 2 * bot_count(&a).unwrap());
    }

    #[test]
    fn with_below_plus(a in common::bot_formula(4), b in common::bot_formula(4)) {
        prop_assert!(bot_count(&with(a.clone(), b.clone())).unwrap() <= bot_count(&plus(a, b)).unwrap());
    }

    #[test]
    fn bang_is_rejected(a in common::formula(3, 3)) {
        prop_assert_eq!(bot_count(&a).is_err(), a.contains(&|f: &Formula| f.is_bang()));
    }

    #[test]
    fn reduction_is_canonical(v in -10_000i64..10_000, n in 9u32..=16) {
        let r = BotCount::exact(v).reduce(n);
        let m = 9 * n as i64;
        prop_assert!((0..m).contains(&r.value));
        prop_assert_eq!((r.value - v).rem_euclid(m), 0);
    }

    #[test]
    fn one_literal_at_bottom_counts_alike(a in common::normalized_formula(2, 2), n in 9u32..=12) {
        let p = n - 7;
        prop_assume!(a.max_literal() < p);
        let bot = Encoder::new(EncodingParams::new(n, p, Target::BotOnly).unwrap()).unwrap();
        let one = Encoder::new(EncodingParams::new(n, p, Target::OneLiteral).unwrap()).unwrap();
        let tilde = one.formula(&a).substitute(p, &Formula::Bottom);
        prop_assert_eq!(bot_count(&bot.formula(&a)).unwrap(), bot_count(&tilde).unwrap());
    }

    #[test]
    fn census_per_target(s in common::normalized_sequent(4, 3, 3, 2)) {
        for target in Target::ALL {
            let params = EncodingParams::resolve(&s, target, None, None).unwrap();
            let c = census(&encode_sequent(&s, &params).unwrap());
            match target {
                Target::BotOnly => prop_assert!(c.literals.is_empty() && c.ones == 0),
                Target::OneLiteral => {
                    prop_assert_eq!(c.literals.into_iter().collect::<Vec<_>>(), vec![params.p]);
                    prop_assert_eq!(c.bottoms + c.ones, 0);
                }
                Target::UnitOnly => prop_assert!(c.literals.is_empty() && c.bottoms == 0),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_through_bot_only(s in common::normalized_sequent(3, 2, 2, 1)) {
        let b = SearchBudget { max_steps: 20_000, ..SearchBudget::with_depth(15) };
        if let SearchResult::Proved(d) = prove(&s.to_sequent(), &b) {
            let params = EncodingParams::resolve(&s, Target::BotOnly, None, None).unwrap();
            let e = ttobot_transform(&d, &params).unwrap();
            prop_assert!(check_proof(&e).is_ok());
            let p = extract_program(&e, &s, &params).unwrap();
            prop_assert!(check_strong_solution(&p, &s));
            prop_assert!(check_proof(&program_to_proof(&p, &s).unwrap()).is_ok());
        }
    }
}
