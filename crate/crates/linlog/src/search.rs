//! Bounded cut-free proof search.
//!
//! Formulas are interned and sequents are kept as sorted id multisets with
//! a separate set of `!`-bodies. Invertible rules are applied eagerly; the
//! remaining rules are tried in a fixed order with backtracking. Proofs are
//! emitted through [`Draft`], which restores explicit `W!`/`C!` steps.

use crate::balance::balanced_residue;
use crate::formula::{Formula, Sequent};
use crate::proof::{check_proof, Draft, Proof, RuleId};
use std::collections::{HashMap, HashSet};
use std::rc::Rc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchBudget {
    /// Longest branch, counted in rule applications.
    pub max_depth: usize,
    /// Contractions allowed per `!`-formula along one branch: each branch
    /// may use a `!`-formula at most this many times plus one.
    pub max_contractions_per_bang_formula: usize,
    pub balance_pruning: bool,
    /// Total number of subgoals visited before giving up.
    pub max_steps: usize,
    /// The congruence used for pruning is taken modulo `9 * balance_n`.
    pub balance_n: u32,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget {
            max_depth: 40,
            max_contractions_per_bang_formula: 4,
            balance_pruning: true,
            max_steps: 2_000_000,
            balance_n: 9,
        }
    }
}

impl SearchBudget {
    pub fn with_depth(max_depth: usize) -> SearchBudget {
        SearchBudget { max_depth, ..SearchBudget::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Proved(Proof),
    Refuted,
    BudgetExhausted,
}

impl SearchResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchResult::Proved(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchResult::Proved(_) => "Proved",
            SearchResult::Refuted => "Refuted",
            SearchResult::BudgetExhausted => "BudgetExhausted",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub steps: usize,
}

pub fn prove(s: &Sequent, b: &SearchBudget) -> SearchResult {
    prove_with_stats(s, b).0
}

pub fn prove_with_stats(s: &Sequent, b: &SearchBudget) -> (SearchResult, SearchStats) {
    let mut search = Search::new(*b);
    let lhs = sorted(s.lhs.iter().map(|f| search.intern(f)).collect());
    let rhs = sorted(s.rhs.iter().map(|f| search.intern(f)).collect());
    let root = State { key: Key { gamma: vec![], lhs, rhs, focus: None }, uses: vec![] };
    let mut limit = b.max_depth.min(8);
    let out = loop {
        search.limit = limit;
        let out = search.solve(root.clone(), 0);
        match out {
            Out::Failed { budget: true, .. } if !search.aborted && limit < b.max_depth => {
                limit = b.max_depth.min(limit + limit / 2);
            }
            out => break out,
        }
    };
    let stats = SearchStats { steps: search.steps };
    let result = match out {
        Out::Proved(node) => {
            let draft = search.draft(&node);
            let mut proof = draft.finish().expect("search emits well-formed drafts");
            assert!(proof.reorder_root(s), "search proved a different sequent");
            if let Err(v) = check_proof(&proof) {
                panic!("search produced an invalid proof: {v}");
            }
            SearchResult::Proved(proof)
        }
        Out::Failed { budget: false, .. } => SearchResult::Refuted,
        Out::Failed { budget: true, .. } => SearchResult::BudgetExhausted,
    };
    (result, stats)
}

type Id = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Lit(u32),
    Bot,
    One,
    Tensor,
    Par,
    Lolli,
    With,
    Plus,
    Bang,
}

struct Node {
    kind: Kind,
    a: Id,
    b: Id,
    residue: Option<i64>,
    formula: Formula,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Key {
    gamma: Vec<Id>,
    lhs: Vec<Id>,
    rhs: Vec<Id>,
    /// A freshly derelicted left formula that the next non-invertible
    /// rule must decompose.
    focus: Option<Id>,
}

#[derive(Clone)]
struct State {
    key: Key,
    /// Derelictions so far per `gamma` entry on this branch.
    uses: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Rule(RuleId, Id),
    Derelict(Id),
    Absorb(Id),
}

struct PNode {
    step: Step,
    premises: Vec<Rc<PNode>>,
}

enum Out {
    Proved(Rc<PNode>),
    /// `loop_min` is the shallowest ancestor depth a loop check matched.
    Failed { budget: bool, loop_min: usize },
}

impl Out {
    fn fail() -> Out {
        Out::Failed { budget: false, loop_min: usize::MAX }
    }

    fn budget() -> Out {
        Out::Failed { budget: true, loop_min: usize::MAX }
    }
}

/// Running summary of failed alternatives.
#[derive(Clone, Copy)]
struct Failures {
    budget: bool,
    loop_min: usize,
}

impl Failures {
    fn new() -> Failures {
        Failures { budget: false, loop_min: usize::MAX }
    }

    fn add(&mut self, out: &Out) {
        if let Out::Failed { budget, loop_min } = out {
            self.budget |= budget;
            self.loop_min = self.loop_min.min(*loop_min);
        }
    }

    fn out(self) -> Out {
        Out::Failed { budget: self.budget, loop_min: self.loop_min }
    }
}

fn sorted(mut v: Vec<Id>) -> Vec<Id> {
    v.sort_unstable();
    v
}

fn insert(v: &[Id], x: Id) -> Vec<Id> {
    let mut out = v.to_vec();
    let i = out.partition_point(|&y| y < x);
    out.insert(i, x);
    out
}

fn remove_at(v: &[Id], i: usize) -> Vec<Id> {
    let mut out = v.to_vec();
    out.remove(i);
    out
}

/// Every way to split a sorted multiset in two, each split once.
fn splits(xs: &[Id]) -> Vec<(Vec<Id>, Vec<Id>)> {
    let mut groups: Vec<(Id, usize)> = Vec::new();
    for &x in xs {
        match groups.last_mut() {
            Some((y, n)) if *y == x => *n += 1,
            _ => groups.push((x, 1)),
        }
    }
    let mut out = Vec::new();
    let mut take = vec![0usize; groups.len()];
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (&(x, n), &k) in groups.iter().zip(&take) {
            left.extend(std::iter::repeat_n(x, k));
            right.extend(std::iter::repeat_n(x, n - k));
        }
        out.push((left, right));
        let mut i = 0;
        loop {
            if i == groups.len() {
                return out;
            }
            if take[i] < groups[i].1 {
                take[i] += 1;
                break;
            }
            take[i] = 0;
            i += 1;
        }
    }
}

struct Search {
    budget: SearchBudget,
    modulus: i64,
    nodes: Vec<Node>,
    ids: HashMap<(Kind, Id, Id), Id>,
    proved: HashMap<Key, Rc<PNode>>,
    refuted: HashSet<Key>,
    ancestors: HashMap<Key, usize>,
    steps: usize,
    aborted: bool,
    /// Depth bound of the current deepening round.
    limit: usize,
}

impl Search {
    fn new(budget: SearchBudget) -> Search {
        Search {
            budget,
            modulus: 9 * budget.balance_n.max(1) as i64,
            nodes: Vec::new(),
            ids: HashMap::new(),
            proved: HashMap::new(),
            refuted: HashSet::new(),
            ancestors: HashMap::new(),
            steps: 0,
            aborted: false,
            limit: budget.max_depth,
        }
    }

    fn intern(&mut self, f: &Formula) -> Id {
        use Formula as F;
        let (kind, a, b) = match f {
            F::Literal(i) => (Kind::Lit(*i), 0, 0),
            F::Bottom => (Kind::Bot, 0, 0),
            F::One => (Kind::One, 0, 0),
            F::Tensor(x, y) => (Kind::Tensor, self.intern(x), self.intern(y)),
            F::Par(x, y) => (Kind::Par, self.intern(x), self.intern(y)),
            F::Lollipop(x, y) => (Kind::Lolli, self.intern(x), self.intern(y)),
            F::With(x, y) => (Kind::With, self.intern(x), self.intern(y)),
            F::Plus(x, y) => (Kind::Plus, self.intern(x), self.intern(y)),
            F::Bang(x) => (Kind::Bang, self.intern(x), 0),
        };
        if let Some(&id) = self.ids.get(&(kind, a, b)) {
            return id;
        }
        let id = self.nodes.len() as Id;
        let residue = balanced_residue(f, self.modulus);
        self.nodes.push(Node { kind, a, b, residue, formula: f.clone() });
        self.ids.insert((kind, a, b), id);
        id
    }

    fn node(&self, id: Id) -> &Node {
        &self.nodes[id as usize]
    }

    fn unbalanced(&self, k: &Key) -> bool {
        let m = self.modulus;
        let mut total = 0i64;
        for &g in &k.gamma {
            if self.node(g).residue != Some(0) {
                return false;
            }
        }
        for &x in &k.lhs {
            let Some(r) = self.node(x).residue else { return false };
            total += r;
        }
        for &x in &k.rhs {
            let Some(r) = self.node(x).residue else { return false };
            total -= r;
        }
        (total + k.rhs.len() as i64 - 1).rem_euclid(m) != 0
    }

    fn atomic(&self, k: &Key) -> bool {
        k.gamma.is_empty()
            && k.lhs.iter().chain(&k.rhs).all(|&x| matches!(self.node(x).kind, Kind::Lit(_) | Kind::Bot | Kind::One))
    }

    fn solve(&mut self, st: State, depth: usize) -> Out {
        if self.aborted {
            return Out::budget();
        }
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            self.aborted = true;
            return Out::budget();
        }
        if let Some(p) = self.proved.get(&st.key) {
            return Out::Proved(p.clone());
        }
        if self.refuted.contains(&st.key) {
            return Out::fail();
        }
        if let Some(&d) = self.ancestors.get(&st.key) {
            return Out::Failed { budget: false, loop_min: d };
        }
        if self.budget.balance_pruning && self.unbalanced(&st.key) {
            return Out::fail();
        }
        // Unit and atom bookkeeping always terminates, so it is exempt.
        if depth >= self.limit && !self.atomic(&st.key) {
            return Out::budget();
        }
        self.ancestors.insert(st.key.clone(), depth);
        let out = self.expand(&st, depth);
        self.ancestors.remove(&st.key);
        match out {
            Out::Proved(p) => {
                self.proved.insert(st.key, p.clone());
                Out::Proved(p)
            }
            Out::Failed { budget, loop_min } => {
                let resolved = loop_min >= depth;
                if !budget && resolved && !self.aborted {
                    self.refuted.insert(st.key);
                }
                Out::Failed { budget, loop_min: if resolved { usize::MAX } else { loop_min } }
            }
        }
    }

    fn leaf(step: Step) -> Out {
        Out::Proved(Rc::new(PNode { step, premises: vec![] }))
    }

    /// A premise of `st` with new sides; any focus is kept.
    fn with_key(st: &State, lhs: Vec<Id>, rhs: Vec<Id>) -> State {
        State { key: Key { gamma: st.key.gamma.clone(), lhs, rhs, focus: st.key.focus }, uses: st.uses.clone() }
    }

    fn unary(&mut self, step: Step, premise: State, depth: usize) -> Out {
        match self.solve(premise, depth + 1) {
            Out::Proved(p) => Out::Proved(Rc::new(PNode { step, premises: vec![p] })),
            failed => failed,
        }
    }

    fn binary(&mut self, step: Step, first: State, second: State, depth: usize) -> Out {
        let p1 = match self.solve(first, depth + 1) {
            Out::Proved(p) => p,
            failed => return failed,
        };
        match self.solve(second, depth + 1) {
            Out::Proved(p2) => Out::Proved(Rc::new(PNode { step, premises: vec![p1, p2] })),
            failed => failed,
        }
    }

    fn expand(&mut self, st: &State, depth: usize) -> Out {
        let k = &st.key;
        let (lhs, rhs) = (&k.lhs, &k.rhs);

        if lhs.len() == 1 && rhs.len() == 1 && lhs[0] == rhs[0] {
            return Search::leaf(Step::Rule(RuleId::I, lhs[0]));
        }
        if lhs.len() == 1 && rhs.is_empty() && self.node(lhs[0]).kind == Kind::Bot {
            return Search::leaf(Step::Rule(RuleId::LBot, lhs[0]));
        }
        if lhs.is_empty() && rhs.len() == 1 && self.node(rhs[0]).kind == Kind::One {
            return Search::leaf(Step::Rule(RuleId::ROne, rhs[0]));
        }

        if let Some(out) = self.invertible(st, depth) {
            return out;
        }

        // Past the invertible rules only the focused formula may be used;
        // premises of the remaining rules are unfocused.
        let focus = k.focus;
        let unfocused = State { key: Key { focus: None, ..st.key.clone() }, uses: st.uses.clone() };
        let st = &unfocused;
        let k = &st.key;
        let allowed = |id: Id| focus.is_none_or(|f| f == id);

        let mut fails = Failures::new();
        macro_rules! attempt {
            ($e:expr) => {{
                let out = $e;
                if let Out::Proved(_) = out {
                    return out;
                }
                fails.add(&out);
                if self.aborted {
                    return fails.out();
                }
            }};
        }

        for i in 0..rhs.len() {
            if focus.is_some() || (i > 0 && rhs[i] == rhs[i - 1]) {
                continue;
            }
            let n = self.node(rhs[i]);
            if n.kind == Kind::Plus {
                let (a, b, id) = (n.a, n.b, rhs[i]);
                let rest = remove_at(rhs, i);
                attempt!(self.unary(Step::Rule(RuleId::RPlus1, id), Search::with_key(st, lhs.clone(), insert(&rest, a)), depth));
                attempt!(self.unary(Step::Rule(RuleId::RPlus2, id), Search::with_key(st, lhs.clone(), insert(&rest, b)), depth));
            }
        }
        for i in 0..lhs.len() {
            if i > 0 && lhs[i] == lhs[i - 1] {
                continue;
            }
            if !allowed(lhs[i]) {
                continue;
            }
            let n = self.node(lhs[i]);
            if n.kind == Kind::With {
                let (a, b, id) = (n.a, n.b, lhs[i]);
                let rest = remove_at(lhs, i);
                attempt!(self.unary(Step::Rule(RuleId::LWith1, id), Search::with_key(st, insert(&rest, a), rhs.clone()), depth));
                attempt!(self.unary(Step::Rule(RuleId::LWith2, id), Search::with_key(st, insert(&rest, b), rhs.clone()), depth));
            }
        }
        if focus.is_some() {
            // Nothing else applies to a focused sequent.
        } else if lhs.is_empty() && rhs.len() == 1 && self.node(rhs[0]).kind == Kind::Bang {
            let body = self.node(rhs[0]).a;
            attempt!(self.unary(Step::Rule(RuleId::RBang, rhs[0]), Search::with_key(st, vec![], vec![body]), depth));
        }

        for i in 0..lhs.len() {
            if i > 0 && lhs[i] == lhs[i - 1] {
                continue;
            }
            if !allowed(lhs[i]) {
                continue;
            }
            let n = self.node(lhs[i]);
            let (kind, a, b, id) = (n.kind, n.a, n.b, lhs[i]);
            if kind != Kind::Lolli && kind != Kind::Par {
                continue;
            }
            let sigma = remove_at(lhs, i);
            for (s1, s2) in splits(&sigma) {
                for (f1, f2) in splits(rhs) {
                    let (first, second, rule) = if kind == Kind::Lolli {
                        (
                            Search::with_key(st, s1.clone(), insert(&f1, a)),
                            Search::with_key(st, insert(&s2, b), f2),
                            RuleId::LImp,
                        )
                    } else {
                        (
                            Search::with_key(st, insert(&s1, a), f1),
                            Search::with_key(st, insert(&s2, b), f2),
                            RuleId::LPar,
                        )
                    };
                    attempt!(self.binary(Step::Rule(rule, id), first, second, depth));
                }
            }
        }
        for i in 0..rhs.len() {
            if focus.is_some() || (i > 0 && rhs[i] == rhs[i - 1]) {
                continue;
            }
            let n = self.node(rhs[i]);
            if n.kind != Kind::Tensor {
                continue;
            }
            let (a, b, id) = (n.a, n.b, rhs[i]);
            let phi = remove_at(rhs, i);
            for (s1, s2) in splits(lhs) {
                for (f1, f2) in splits(&phi) {
                    let first = Search::with_key(st, s1.clone(), insert(&f1, a));
                    let second = Search::with_key(st, s2.clone(), insert(&f2, b));
                    attempt!(self.binary(Step::Rule(RuleId::RTensor, id), first, second, depth));
                }
            }
        }

        let cap = self.budget.max_contractions_per_bang_formula + 1;
        for j in 0..k.gamma.len() {
            if focus.is_some() {
                break;
            }
            if st.uses[j] >= cap {
                fails.budget = true;
                continue;
            }
            let g = k.gamma[j];
            let mut next = Search::with_key(st, insert(lhs, g), rhs.clone());
            next.uses[j] += 1;
            // A derelicted copy is decomposed at once unless an invertible
            // rule will do so anyway.
            if matches!(self.node(g).kind, Kind::With | Kind::Lolli | Kind::Par | Kind::Lit(_) | Kind::Bot) {
                next.key.focus = Some(g);
            }
            attempt!(self.unary(Step::Derelict(g), next, depth));
        }
        fails.out()
    }

    /// Applies the first invertible rule, if any; its outcome is final.
    fn invertible(&mut self, st: &State, depth: usize) -> Option<Out> {
        let k = &st.key;
        for (i, &id) in k.lhs.iter().enumerate() {
            let n = self.node(id);
            let (a, b) = (n.a, n.b);
            let rest = remove_at(&k.lhs, i);
            match n.kind {
                Kind::Bang => {
                    let mut next = Search::with_key(st, rest, k.rhs.clone());
                    if let Err(pos) = next.key.gamma.binary_search(&a) {
                        next.key.gamma.insert(pos, a);
                        next.uses.insert(pos, 0);
                    }
                    return Some(self.unary(Step::Absorb(a), next, depth));
                }
                Kind::One => {
                    return Some(self.unary(Step::Rule(RuleId::LOne, id), Search::with_key(st, rest, k.rhs.clone()), depth));
                }
                Kind::Tensor => {
                    let next = Search::with_key(st, insert(&insert(&rest, a), b), k.rhs.clone());
                    return Some(self.unary(Step::Rule(RuleId::LTensor, id), next, depth));
                }
                Kind::Plus => {
                    let first = Search::with_key(st, insert(&rest, a), k.rhs.clone());
                    let second = Search::with_key(st, insert(&rest, b), k.rhs.clone());
                    return Some(self.binary(Step::Rule(RuleId::LPlus, id), first, second, depth));
                }
                _ => {}
            }
        }
        for (i, &id) in k.rhs.iter().enumerate() {
            let n = self.node(id);
            let (a, b) = (n.a, n.b);
            let rest = remove_at(&k.rhs, i);
            match n.kind {
                Kind::Bot => {
                    return Some(self.unary(Step::Rule(RuleId::RBot, id), Search::with_key(st, k.lhs.clone(), rest), depth));
                }
                Kind::Par => {
                    let next = Search::with_key(st, k.lhs.clone(), insert(&insert(&rest, a), b));
                    return Some(self.unary(Step::Rule(RuleId::RPar, id), next, depth));
                }
                Kind::Lolli => {
                    let next = Search::with_key(st, insert(&k.lhs, a), insert(&rest, b));
                    return Some(self.unary(Step::Rule(RuleId::RImp, id), next, depth));
                }
                Kind::With => {
                    let first = Search::with_key(st, k.lhs.clone(), insert(&rest, a));
                    let second = Search::with_key(st, k.lhs.clone(), insert(&rest, b));
                    return Some(self.binary(Step::Rule(RuleId::RWith, id), first, second, depth));
                }
                _ => {}
            }
        }
        None
    }

    fn draft(&self, node: &PNode) -> Draft {
        let premises = node.premises.iter().map(|p| self.draft(p)).collect();
        let f = |id: Id| self.node(id).formula.clone();
        match node.step {
            Step::Rule(rule, id) => Draft::rule(rule, f(id), premises),
            Step::Derelict(id) => Draft { step: crate::proof::DraftStep::Derelict(f(id)), premises },
            Step::Absorb(id) => Draft { step: crate::proof::DraftStep::Absorb(f(id)), premises },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_sequent;

    fn run(s: &str) -> SearchResult {
        prove(&parse_sequent(s).unwrap(), &SearchBudget::with_depth(15))
    }

    #[test]
    fn small_examples() {
        assert!(run("p1, (p1 -o p2) |- p2").is_proved());
        assert!(run("bot |-").is_proved());
        assert_eq!(run("p1 |- p2"), SearchResult::Refuted);
        assert!(run("(p1 * p2) |- (p2 * p1)").is_proved());
        assert_eq!(run("|- bot"), SearchResult::Refuted);
        assert_eq!(run("p1, p2 |- p1, p2"), SearchResult::Refuted);
    }

    #[test]
    fn exponentials() {
        assert!(run("p1, p1, !(p1 -o p2) |- (p2 * p2)").is_proved());
        assert!(run("!p1 |- !p1").is_proved());
        assert!(run("!p1 |- (!p1 * !p1)").is_proved());
        assert!(run("!(p1 * p1) |- 1").is_proved());
        assert_eq!(run("p1 |- !p1"), SearchResult::Refuted);
    }

    #[test]
    fn contraction_cap_reports_budget() {
        // Six uses of the Horn clause, all on the rightmost branch.
        let s = "p2, !(p2 -o (p2 * p1)) |- (p1 * (p1 * (p1 * (p1 * (p1 * (p1 * p2))))))";
        let b = SearchBudget { max_contractions_per_bang_formula: 4, ..SearchBudget::with_depth(30) };
        assert_eq!(prove(&parse_sequent(s).unwrap(), &b), SearchResult::BudgetExhausted);
        let b = SearchBudget { max_contractions_per_bang_formula: 5, ..b };
        assert!(prove(&parse_sequent(s).unwrap(), &b).is_proved());
    }

    #[test]
    fn root_keeps_input_order() {
        let s = parse_sequent("(p1 -o p2), p1 |- p2").unwrap();
        let SearchResult::Proved(p) = prove(&s, &SearchBudget::default()) else { panic!() };
        assert_eq!(p.conclusion, s);
    }

    #[test]
    fn splits_are_deduplicated() {
        assert_eq!(splits(&[1, 1, 2]).len(), 6);
        assert_eq!(splits(&[]).len(), 1);
    }
}
