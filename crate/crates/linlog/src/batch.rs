//! Batch drivers over many sequents. With the `parallel` feature the work
//! is spread over the rayon pool; the sequential path is always available.

use crate::compile::program_to_proof;
use crate::formula::Sequent;
use crate::normalized::NormalizedSequent;
use crate::program::{find_strong_solution, EnumBounds, Program};
use crate::search::{prove, SearchBudget, SearchResult};

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

pub fn map_sequential<T, R, F: Fn(&T) -> R>(items: &[T], f: F) -> Vec<R> {
    items.iter().map(f).collect()
}

pub fn prove_all(seqs: &[Sequent], budget: &SearchBudget) -> Vec<SearchResult> {
    map(seqs, |s| prove(s, budget))
}

pub fn prove_all_sequential(seqs: &[Sequent], budget: &SearchBudget) -> Vec<SearchResult> {
    map_sequential(seqs, |s| prove(s, budget))
}

/// Search and program enumeration on one normalized sequent.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub sequent: NormalizedSequent,
    pub search: &'static str,
    pub program: Option<Program>,
    /// `program_to_proof` of the found program passed the checker.
    pub rechecked: bool,
}

impl OracleOutcome {
    /// Proved exactly when a program exists, and the program re-derives.
    pub fn agrees(&self) -> bool {
        let proved = self.search == "Proved";
        proved == self.program.is_some() && (self.program.is_none() || self.rechecked)
    }
}

pub fn oracle_case(s: &NormalizedSequent, budget: &SearchBudget, bounds: EnumBounds) -> OracleOutcome {
    let search = prove(&s.to_sequent(), budget).label();
    let program = find_strong_solution(s, bounds);
    let rechecked = program.as_ref().is_some_and(|p| program_to_proof(p, s).is_ok());
    OracleOutcome { sequent: s.clone(), search, program, rechecked }
}

pub fn oracle_all(corpus: &[NormalizedSequent], budget: &SearchBudget, bounds: EnumBounds) -> Vec<OracleOutcome> {
    map(corpus, |s| oracle_case(s, budget, bounds))
}

pub fn oracle_all_sequential(corpus: &[NormalizedSequent], budget: &SearchBudget, bounds: EnumBounds) -> Vec<OracleOutcome> {
    map_sequential(corpus, |s| oracle_case(s, budget, bounds))
}
