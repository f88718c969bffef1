//! Reading one-stack programs off derivations, and the derivation
//! transformer into the encoded fragments built on top of it.
//!
//! A derivation is walked from the root. Every left-hand formula stands for
//! a bag of resources (its contribution to `OUT`): products contribute
//! their literals, a pending `Y1 ⊕ Y2` the antecedent of the `⊕`-Horn that
//! produced it, an `F_Y` its `Y`, everything else nothing. Each node yields
//! a program fragment whose holes are the points where the node's goal has
//! been reached.

use crate::balance::{balance_check, BalanceVerdict};
use crate::compile::{compile, CompileError, Mode};
use crate::encode::{Encoder, EncodingError, EncodingParams, Target};
use crate::formula::{Formula, Sequent};
use crate::normalized::{NormalError, NormalizedSequent};
use crate::product::{bag_union, Bag, SimpleProduct};
use crate::program::{check_strong_solution, EdgeLabel, Program, Vertex};
use crate::proof::{check_proof, Proof, RuleId};
use std::cell::RefCell;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("regularity violation at node {path:?}: {assertion}")]
    RegularityViolation { assertion: String, path: Vec<usize> },
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("input derivation is invalid: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Normal(#[from] NormalError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

/// What a formula stands for during extraction.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Class {
    /// A product, or a fragment of one.
    Res(Bag),
    Horn(Bag, Bag),
    /// `F_Y`, a Horn with empty antecedent.
    Cont(Bag),
    PlusHorn(Bag),
    Emb(Bag, Bag, Bag),
    /// `Y1 ⊕ Y2`, to be split by `L⊕`.
    Pending(Bag, Bag),
    Other,
}

#[derive(Debug, Clone)]
enum Frag {
    Hole,
    Edge(EdgeLabel, Box<Frag>),
    Fork(EdgeLabel, Box<Frag>, EdgeLabel, Box<Frag>),
}

impl Frag {
    /// Continues every hole with `g`.
    fn then(self, g: &Frag) -> Frag {
        match self {
            Frag::Hole => g.clone(),
            Frag::Edge(l, f) => Frag::Edge(l, Box::new(f.then(g))),
            Frag::Fork(l1, f1, l2, f2) => Frag::Fork(l1, Box::new(f1.then(g)), l2, Box::new(f2.then(g))),
        }
    }

    fn into_vertex(self) -> Vertex {
        match self {
            Frag::Hole => Vertex::leaf(),
            Frag::Edge(l, f) => Vertex::step(l, f.into_vertex()),
            Frag::Fork(l1, f1, l2, f2) => Vertex::fork(l1, f1.into_vertex(), l2, f2.into_vertex()),
        }
    }
}

/// Owed antecedents of the pending `⊕` formulas of one sequent.
type Pending = Vec<(Formula, Bag)>;

struct Extractor {
    /// Encoded atoms and their literal; `None` in the source.
    atoms: Option<HashMap<Formula, Bag>>,
    /// Balance modulus parameter, checked at split premises.
    balance_n: Option<u32>,
    cache: RefCell<HashMap<Formula, Class>>,
}

fn product(v: Bag) -> Result<SimpleProduct, String> {
    SimpleProduct::new(v).map_err(|_| "empty product in an edge label".to_string())
}

impl Extractor {
    fn source() -> Extractor {
        Extractor { atoms: None, balance_n: None, cache: RefCell::default() }
    }

    fn bot_only(enc: &Encoder) -> Extractor {
        let mut atoms = HashMap::new();
        atoms.insert(enc.c.clone(), vec![]);
        for q in 1..=enc.params.n - 7 {
            let bag = if q == enc.p() { vec![] } else { vec![q] };
            atoms.insert(enc.atom(q), bag);
        }
        Extractor { atoms: Some(atoms), balance_n: Some(enc.params.n), cache: RefCell::default() }
    }

    fn res(&self, f: &Formula) -> Option<Bag> {
        match &self.atoms {
            None => {
                if let Formula::Literal(q) = f {
                    return Some(vec![*q]);
                }
            }
            Some(atoms) => {
                if let Some(b) = atoms.get(f) {
                    return Some(b.clone());
                }
            }
        }
        match f {
            Formula::Tensor(a, b) => Some(bag_union(&self.res(a)?, &self.res(b)?)),
            _ => None,
        }
    }

    fn classify(&self, f: &Formula) -> Class {
        if let Some(c) = self.cache.borrow().get(f) {
            return c.clone();
        }
        let c = self.classify_uncached(f);
        self.cache.borrow_mut().insert(f.clone(), c.clone());
        c
    }

    fn classify_uncached(&self, f: &Formula) -> Class {
        if let Some(b) = self.res(f) {
            return Class::Res(b);
        }
        match f {
            Formula::Plus(a, b) => match (self.res(a), self.res(b)) {
                (Some(y1), Some(y2)) => Class::Pending(y1, y2),
                _ => Class::Other,
            },
            Formula::Lollipop(a, b) => {
                let Some(x) = self.res(a) else {
                    if let (Class::Horn(u, v), Some(y)) = (self.classify(a), self.consequent(b)) {
                        return Class::Emb(u, v, y);
                    }
                    return Class::Other;
                };
                match (self.res(b), self.classify(b)) {
                    (Some(y), _) if x.is_empty() => Class::Cont(y),
                    (Some(y), _) => Class::Horn(x, y),
                    (None, Class::Pending(..)) if !x.is_empty() => Class::PlusHorn(x),
                    _ => Class::Other,
                }
            }
            _ => Class::Other,
        }
    }

    /// `Y` of an embedded implication's consequent: a product in the
    /// source, `F_Y` in the encoding.
    fn consequent(&self, b: &Formula) -> Option<Bag> {
        match (&self.atoms, self.classify(b)) {
            (None, Class::Res(y)) | (Some(_), Class::Cont(y)) if !y.is_empty() => Some(y),
            _ => None,
        }
    }

    /// Resources held by a left-hand side.
    fn held(&self, lhs: &[Formula], pending: &Pending) -> Bag {
        let mut out: Bag = pending.iter().flat_map(|(_, x)| x.iter().copied()).collect();
        for f in lhs {
            match self.classify(f) {
                Class::Res(b) | Class::Cont(b) => out.extend(b),
                _ => {}
            }
        }
        out.sort_unstable();
        out
    }

    fn walk(&self, d: &Proof, pending: Pending, path: &mut Vec<usize>) -> Result<Frag, ExtractError> {
        let fail = |path: &Vec<usize>, msg: String| ExtractError::RegularityViolation { assertion: msg, path: path.clone() };
        let s = &d.conclusion;
        if s.rhs.len() != 1 {
            return Err(fail(path, format!("succedent of `{s}` must be a single formula")));
        }
        let plus_count = s.lhs.iter().filter(|f| matches!(self.classify(f), Class::Pending(..))).count();
        if plus_count != pending.len() {
            return Err(fail(path, format!("⊕-formula in `{s}` not produced by a ⊕-Horn implication")));
        }
        let principal = d.principal_formula().cloned().expect("checked proof");
        let class = self.classify(&principal);
        let sub = |i: usize, pend: Pending, path: &mut Vec<usize>| {
            path.push(i);
            let r = self.walk(&d.premises[i], pend, path);
            path.pop();
            r
        };
        match d.rule {
            RuleId::I => match class {
                Class::Res(_) => Ok(Frag::Hole),
                Class::Horn(x, y) => {
                    let label = EdgeLabel::Horn(product(x).map_err(|m| fail(path, m))?, product(y).map_err(|m| fail(path, m))?);
                    Ok(Frag::Edge(label, Box::new(Frag::Hole)))
                }
                _ => Err(fail(path, format!("axiom on `{principal}` is neither a product nor a Horn block"))),
            },
            RuleId::LTensor | RuleId::LWith1 | RuleId::LWith2 | RuleId::LBang | RuleId::WBang | RuleId::CBang => {
                sub(0, pending, path)
            }
            RuleId::RImp => match class {
                Class::Horn(..) => sub(0, pending, path),
                _ => Err(fail(path, format!("`{principal}` introduced on the right is not a Horn block"))),
            },
            RuleId::RTensor => {
                self.balanced(d, path)?;
                let (p1, p2) = split_pending(pending, &d.premises[0].conclusion.lhs);
                let f1 = sub(0, p1, path)?;
                let f2 = sub(1, p2, path)?;
                Ok(f1.then(&f2))
            }
            RuleId::LImp => {
                self.balanced(d, path)?;
                let (p1, mut p2) = split_pending(pending, &d.premises[0].conclusion.lhs);
                let held = self.held(&d.premises[0].conclusion.lhs, &p1);
                let Formula::Lollipop(_, b) = &principal else { unreachable!("checked proof") };
                match class {
                    Class::Horn(x, y) => {
                        let label = EdgeLabel::Horn(product(x).map_err(|m| fail(path, m))?, product(y).map_err(|m| fail(path, m))?);
                        let f1 = sub(0, p1, path)?;
                        let f2 = sub(1, p2, path)?;
                        Ok(f1.then(&Frag::Edge(label, Box::new(f2))))
                    }
                    Class::Cont(_) => {
                        let f1 = sub(0, p1, path)?;
                        let f2 = sub(1, p2, path)?;
                        Ok(f1.then(&f2))
                    }
                    Class::PlusHorn(x) => {
                        p2.push(((**b).clone(), x));
                        let f1 = sub(0, p1, path)?;
                        let f2 = sub(1, p2, path)?;
                        Ok(f1.then(&f2))
                    }
                    Class::Emb(u, v, y) => {
                        let push = EdgeLabel::Push(
                            product(y).map_err(|m| fail(path, m))?,
                            held,
                            product(u).map_err(|m| fail(path, m))?,
                        );
                        let pop = EdgeLabel::Pop(product(v).map_err(|m| fail(path, m))?);
                        let f1 = sub(0, p1, path)?;
                        let f2 = sub(1, p2, path)?;
                        Ok(Frag::Edge(push, Box::new(f1.then(&Frag::Edge(pop, Box::new(f2))))))
                    }
                    _ => Err(fail(path, format!("`{principal}` is not an encoded normalized implication"))),
                }
            }
            RuleId::LPlus => {
                let Class::Pending(y1, y2) = class else {
                    return Err(fail(path, format!("`{principal}` is not a pending ⊕")));
                };
                let mut rest = pending;
                let i = rest.iter().position(|(f, _)| *f == principal).expect("counted above");
                let (_, x) = rest.remove(i);
                let x = product(x).map_err(|m| fail(path, m))?;
                let l1 = EdgeLabel::Horn(x.clone(), product(y1).map_err(|m| fail(path, m))?);
                let l2 = EdgeLabel::Horn(x, product(y2).map_err(|m| fail(path, m))?);
                let f1 = sub(0, rest.clone(), path)?;
                let f2 = sub(1, rest, path)?;
                Ok(Frag::Fork(l1, Box::new(f1), l2, Box::new(f2)))
            }
            rule => Err(fail(path, format!("rule {rule} does not occur in regular derivations"))),
        }
    }

    /// The congruence of the ⊥-count must hold at both premises of a split.
    fn balanced(&self, d: &Proof, path: &[usize]) -> Result<(), ExtractError> {
        let Some(n) = self.balance_n else { return Ok(()) };
        for (i, q) in d.premises.iter().enumerate() {
            if balance_check(&q.conclusion, n) == BalanceVerdict::Violated {
                let mut at = path.to_vec();
                at.push(i);
                return Err(ExtractError::RegularityViolation {
                    assertion: format!("⊥-count congruence fails for `{}`", q.conclusion),
                    path: at,
                });
            }
        }
        Ok(())
    }
}

/// Hands each pending entry to the first premise while it still holds a
/// copy of that formula, the rest to the second.
fn split_pending(pending: Pending, lhs1: &[Formula]) -> (Pending, Pending) {
    let mut left = Pending::new();
    let mut right = Pending::new();
    for (f, x) in pending {
        let room = lhs1.iter().filter(|g| **g == f).count();
        if left.iter().filter(|(g, _)| *g == f).count() < room {
            left.push((f, x));
        } else {
            right.push((f, x));
        }
    }
    (left, right)
}

fn run(ex: &Extractor, d: &Proof, s: &NormalizedSequent) -> Result<Program, ExtractError> {
    let frag = ex.walk(d, Pending::new(), &mut Vec::new())?;
    let p = Program::new(frag.into_vertex()).map_err(|e| ExtractError::RegularityViolation {
        assertion: format!("extracted program is malformed: {e}"),
        path: vec![],
    })?;
    if !check_strong_solution(&p, s) {
        return Err(ExtractError::RegularityViolation {
            assertion: format!("extracted program is not a strong solution:\n{p}"),
            path: vec![],
        });
    }
    Ok(p)
}

/// The program read off a derivation of the normalized sequent `S` itself.
pub fn extract_source_program(d: &Proof, s: &NormalizedSequent) -> Result<Program, ExtractError> {
    check_proof(d).map_err(|v| ExtractError::Precondition(v.to_string()))?;
    if !d.conclusion.same_multisets(&s.to_sequent()) {
        return Err(ExtractError::Precondition(format!("derivation concludes `{}`, not `{s}`", d.conclusion)));
    }
    run(&Extractor::source(), d, s)
}

/// The one-stack program read off a derivation of the ⊥-only sequent
/// `E_(p⊗W), F_Δ, !F_Γ ⊢ E_(p⊗Z)`.
pub fn extract_program(d: &Proof, s: &NormalizedSequent, params: &EncodingParams) -> Result<Program, ExtractError> {
    if params.target != Target::BotOnly {
        return Err(ExtractError::Precondition(format!("extraction reads ⊥-only derivations, not {}", params.target)));
    }
    params.validate_for(s)?;
    check_proof(d).map_err(|v| ExtractError::Precondition(v.to_string()))?;
    let enc = Encoder::new(*params)?;
    let expected = enc.sequent(s);
    if !d.conclusion.same_multisets(&expected) {
        return Err(ExtractError::Precondition(format!(
            "derivation does not conclude the ⊥-only encoding of `{s}`"
        )));
    }
    run(&Extractor::bot_only(&enc), d, s)
}

/// Turns a derivation of a normalized sequent into a derivation of its
/// encoding: the program read off `d` is recompiled in the target fragment.
pub fn ttobot_transform(d: &Proof, params: &EncodingParams) -> Result<Proof, TransformError> {
    check_proof(d).map_err(|v| TransformError::InvalidInput(v.to_string()))?;
    let s = NormalizedSequent::from_sequent(&d.conclusion)?;
    params.validate_for(&s).map_err(CompileError::from)?;
    let p = extract_source_program(d, &s)?;
    Ok(compile(&p, &s, &Mode::new(Some(params)).map_err(CompileError::from)?)?)
}

/// The sequent `d` must conclude for [`extract_program`].
pub fn auxiliary_sequent(s: &NormalizedSequent, params: &EncodingParams) -> Result<Sequent, EncodingError> {
    let bot = EncodingParams { target: Target::BotOnly, ..*params };
    crate::encode::encode_sequent(s, &bot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compile::program_to_proof;
    use crate::parse::parse_sequent;
    use crate::search::{prove, SearchBudget, SearchResult};

    fn normal(s: &str) -> NormalizedSequent {
        NormalizedSequent::from_sequent(&parse_sequent(s).unwrap()).unwrap()
    }

    fn proved(s: &NormalizedSequent) -> Proof {
        match prove(&s.to_sequent(), &SearchBudget::default()) {
            SearchResult::Proved(d) => d,
            other => panic!("{s}: {}", other.label()),
        }
    }

    fn round_trip(text: &str) -> Program {
        let s = normal(text);
        let d = proved(&s);
        let p = extract_source_program(&d, &s).unwrap_or_else(|e| panic!("{text}: {e}"));
        let params = EncodingParams::resolve(&s, Target::BotOnly, None, None).unwrap();
        let e = ttobot_transform(&d, &params).unwrap();
        let q = extract_program(&e, &s, &params).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert!(check_strong_solution(&q, &s));
        assert!(program_to_proof(&q, &s).is_ok());
        p
    }

    #[test]
    fn axiom_gives_trivial_program() {
        assert_eq!(round_trip("p2 |- p2"), Program::trivial());
    }

    #[test]
    fn horn_gives_one_edge() {
        let p = round_trip("p2, (p2 -o p3) |- p3");
        assert_eq!(p.edge_count(), 1);
        round_trip("p2, (p2 -o (p2 * p2)) |- (p2 * p2)");
        round_trip("(p1 * p2), !(p1 -o p3) |- (p2 * p3)");
        round_trip("p1, ((p1 -o p2) & (p1 -o p3)) |- p3");
    }

    #[test]
    fn forks_and_pushes() {
        let p = round_trip("p2, (p2 -o (p2 + p2)) |- p2");
        assert_eq!(p.edge_count(), 2);
        round_trip("p1, (p1 -o (p2 + p3)), !(p2 -o p3) |- p3");
        let p = round_trip("p1, ((p2 -o p3) -o p4), !((p1 * p2) -o p3) |- p4");
        assert_eq!(p.push_count(), 1);
        round_trip("p4, ((p1 -o p2) -o p3), (p1 -o p2) |- (p3 * p4)");
    }

    #[test]
    fn other_targets_and_bad_shapes() {
        let s = normal("p2 |- p2");
        let d = proved(&s);
        let one = EncodingParams::new(9, 1, Target::OneLiteral).unwrap();
        assert!(matches!(extract_program(&d, &s, &one), Err(ExtractError::Precondition(_))));
        let bot = EncodingParams::new(9, 1, Target::BotOnly).unwrap();
        assert!(matches!(extract_program(&d, &s, &bot), Err(ExtractError::Precondition(_))));
    }
}
