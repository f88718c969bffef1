//! Agreement between a normalized sequent and its three encodings.

use crate::compile::program_to_encoded_proof;
use crate::encode::{EncodingError, EncodingParams, Target};
use crate::extract::extract_source_program;
use crate::formula::{Formula, Sequent};
use crate::normalized::NormalizedSequent;
use crate::proof::{check_proof, Proof};
use crate::search::{prove, SearchBudget, SearchResult};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Proved,
    Refuted,
    BudgetExhausted,
}

impl Verdict {
    fn of(r: &SearchResult) -> Verdict {
        match r {
            SearchResult::Proved(_) => Verdict::Proved,
            SearchResult::Refuted => Verdict::Refuted,
            SearchResult::BudgetExhausted => Verdict::BudgetExhausted,
        }
    }

    pub fn decided(self) -> bool {
        self != Verdict::BudgetExhausted
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Proved => "Proved",
            Verdict::Refuted => "Refuted",
            Verdict::BudgetExhausted => "BudgetExhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairnessEntry {
    /// `'a'` to `'d'`.
    pub item: char,
    pub description: &'static str,
    pub sequent: Sequent,
    pub verdict: Verdict,
    /// Set when the verdict comes from a constructed derivation rather than
    /// from search.
    pub witnessed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairnessReport {
    pub entries: Vec<FairnessEntry>,
}

impl FairnessReport {
    pub fn entry(&self, item: char) -> &FairnessEntry {
        self.entries.iter().find(|e| e.item == item).expect("items a to d")
    }

    /// Two decided entries disagree.
    pub fn violation(&self) -> bool {
        let decided: Vec<Verdict> = self.entries.iter().map(|e| e.verdict).filter(|v| v.decided()).collect();
        decided.windows(2).any(|w| w[0] != w[1])
    }
}

impl fmt::Display for FairnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let how = if e.witnessed { " (witness)" } else { "" };
            writeln!(f, "({}) {}: {}{how}", e.item, e.description, e.verdict)?;
        }
        if self.violation() {
            writeln!(f, "FAIRNESS VIOLATION")?;
        }
        Ok(())
    }
}

/// A checked derivation of the ⊥-only variant `(c)`, obtained from a
/// derivation of `S` through the one-literal encoding with `p := ⊥`.
pub fn bot_witness(d: &Proof, s: &NormalizedSequent, params: &EncodingParams) -> Option<Proof> {
    let one = EncodingParams { target: Target::OneLiteral, ..*params };
    let program = extract_source_program(d, s).ok()?;
    let proof = program_to_encoded_proof(&program, s, &one).ok()?;
    let witness = proof.substitute(params.p, &Formula::Bottom);
    check_proof(&witness).ok()?;
    Some(witness)
}

/// The four sequents compared by [`fairness_check`]: the source, its
/// one-literal encoding, the same with `p := ⊥`, and its unit-only encoding.
pub fn fairness_sequents(s: &NormalizedSequent, params: &EncodingParams) -> Result<[Sequent; 4], EncodingError> {
    let with = |target| EncodingParams { target, ..*params };
    let one = crate::encode::encode_sequent(s, &with(Target::OneLiteral))?;
    let bot = Sequent::new(
        one.lhs.iter().map(|f| f.substitute(params.p, &Formula::Bottom)).collect(),
        one.rhs.iter().map(|f| f.substitute(params.p, &Formula::Bottom)).collect(),
    );
    let unit = crate::encode::encode_sequent(s, &with(Target::UnitOnly))?;
    Ok([s.to_sequent(), one, bot, unit])
}

/// Decides each item with bounded search; the ⊥-only item falls back to a
/// constructed witness when the source is provable.
pub fn fairness_check(
    s: &NormalizedSequent,
    params: &EncodingParams,
    budget: &SearchBudget,
) -> Result<FairnessReport, EncodingError> {
    params.validate_for(s)?;
    let [source, one, bot, unit] = fairness_sequents(s, params)?;
    let budget = SearchBudget { balance_n: params.n, ..*budget };
    let a = prove(&source, &budget);
    let mut entries = vec![FairnessEntry {
        item: 'a',
        description: "source sequent",
        sequent: source,
        verdict: Verdict::of(&a),
        witnessed: false,
    }];
    let items = [('b', "one-literal encoding", one), ('c', "one-literal encoding with p := ⊥", bot), ('d', "unit-only encoding", unit)];
    for (item, description, sequent) in items {
        let mut verdict = Verdict::of(&prove(&sequent, &budget));
        let mut witnessed = false;
        if item == 'c' && verdict != Verdict::Proved {
            if let SearchResult::Proved(d) = &a {
                if let Some(w) = bot_witness(d, s, params) {
                    debug_assert!(w.conclusion.same_multisets(&sequent));
                    verdict = Verdict::Proved;
                    witnessed = true;
                }
            }
        }
        entries.push(FairnessEntry { item, description, sequent, verdict, witnessed });
    }
    Ok(FairnessReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_sequent;

    fn normal(s: &str) -> NormalizedSequent {
        NormalizedSequent::from_sequent(&parse_sequent(s).unwrap()).unwrap()
    }

    fn small() -> SearchBudget {
        SearchBudget { max_steps: 20_000, ..SearchBudget::default() }
    }

    #[test]
    fn identity_agrees() {
        let s = normal("p2 |- p2");
        let params = EncodingParams::new(9, 1, Target::BotOnly).unwrap();
        let r = fairness_check(&s, &params, &small()).unwrap();
        assert_eq!(r.entry('a').verdict, Verdict::Proved);
        assert_eq!(r.entry('c').verdict, Verdict::Proved);
        assert!(!r.violation(), "{r}");
    }

    #[test]
    fn unprovable_stays_unproved() {
        let s = normal("p1 |- p2");
        let params = EncodingParams::new(10, 3, Target::BotOnly).unwrap();
        let r = fairness_check(&s, &params, &small()).unwrap();
        assert_eq!(r.entry('a').verdict, Verdict::Refuted);
        assert!(r.entries.iter().all(|e| e.verdict != Verdict::Proved), "{r}");
        assert!(!r.violation());
    }

    #[test]
    fn witness_checks() {
        let s = normal("p2, (p2 -o (p2 * p2)) |- (p2 * p2)");
        let params = EncodingParams::new(9, 1, Target::BotOnly).unwrap();
        let d = match prove(&s.to_sequent(), &SearchBudget::default()) {
            SearchResult::Proved(d) => d,
            other => panic!("{}", other.label()),
        };
        let w = bot_witness(&d, &s, &params).unwrap();
        let [_, _, bot, _] = fairness_sequents(&s, &params).unwrap();
        assert!(w.conclusion.same_multisets(&bot));
        assert!(crate::encode::census(&w.conclusion).literals.is_empty());
    }
}
