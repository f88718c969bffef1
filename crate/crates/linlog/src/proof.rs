//! Rule-labelled derivations over the cut-free sequent calculus, the
//! independent checker, and a builder that derives conclusions from premises.

use crate::formula::{same_multiset, Formula, Sequent};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    I,
    LImp,
    RImp,
    LTensor,
    RTensor,
    LPar,
    RPar,
    LPlus,
    RPlus1,
    RPlus2,
    LWith1,
    LWith2,
    RWith,
    LBang,
    RBang,
    WBang,
    CBang,
    LBot,
    RBot,
    LOne,
    ROne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Lhs,
    Rhs,
}

impl RuleId {
    pub const ALL: [RuleId; 21] = [
        RuleId::I,
        RuleId::LImp,
        RuleId::RImp,
        RuleId::LTensor,
        RuleId::RTensor,
        RuleId::LPar,
        RuleId::RPar,
        RuleId::LPlus,
        RuleId::RPlus1,
        RuleId::RPlus2,
        RuleId::LWith1,
        RuleId::LWith2,
        RuleId::RWith,
        RuleId::LBang,
        RuleId::RBang,
        RuleId::WBang,
        RuleId::CBang,
        RuleId::LBot,
        RuleId::RBot,
        RuleId::LOne,
        RuleId::ROne,
    ];

    /// ASCII token used in the s-expression format.
    pub fn token(self) -> &'static str {
        match self {
            RuleId::I => "I",
            RuleId::LImp => "L-o",
            RuleId::RImp => "R-o",
            RuleId::LTensor => "L*",
            RuleId::RTensor => "R*",
            RuleId::LPar => "L@",
            RuleId::RPar => "R@",
            RuleId::LPlus => "L+",
            RuleId::RPlus1 => "R+1",
            RuleId::RPlus2 => "R+2",
            RuleId::LWith1 => "L&1",
            RuleId::LWith2 => "L&2",
            RuleId::RWith => "R&",
            RuleId::LBang => "L!",
            RuleId::RBang => "R!",
            RuleId::WBang => "W!",
            RuleId::CBang => "C!",
            RuleId::LBot => "Lbot",
            RuleId::RBot => "Rbot",
            RuleId::LOne => "L1",
            RuleId::ROne => "R1",
        }
    }

    pub fn from_token(s: &str) -> Option<RuleId> {
        RuleId::ALL.into_iter().find(|r| r.token() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            RuleId::I | RuleId::LBot | RuleId::ROne => 0,
            RuleId::LImp | RuleId::RTensor | RuleId::LPar | RuleId::LPlus | RuleId::RWith => 2,
            _ => 1,
        }
    }

    pub fn side(self) -> Side {
        match self {
            RuleId::RImp
            | RuleId::RTensor
            | RuleId::RPar
            | RuleId::RPlus1
            | RuleId::RPlus2
            | RuleId::RWith
            | RuleId::RBang
            | RuleId::RBot
            | RuleId::ROne => Side::Rhs,
            _ => Side::Lhs,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Lhs => "lhs",
            Side::Rhs => "rhs",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Principal {
    pub side: Side,
    pub index: usize,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Proof {
    pub conclusion: Sequent,
    pub rule: RuleId,
    pub principal: Principal,
    pub premises: Vec<Proof>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("rule {rule} at node {path:?}: {message}")]
pub struct Violation {
    /// Premise indices leading from the root to the offending node.
    pub path: Vec<usize>,
    pub rule: RuleId,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot apply {rule}: {message}")]
pub struct BuildError {
    pub rule: RuleId,
    pub message: String,
}

fn remove_one(xs: &[Formula], f: &Formula) -> Option<Vec<Formula>> {
    let i = xs.iter().position(|x| x == f)?;
    let mut out = xs.to_vec();
    out.remove(i);
    Some(out)
}

fn cat(parts: &[&[Formula]]) -> Vec<Formula> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// Conclusion of `rule` with principal formula `p` over the given premises,
/// together with the index of `p` on its side. Contexts are read off the
/// premises; shared-context rules require their premise contexts to agree.
pub fn conclude(
    rule: RuleId,
    p: &Formula,
    premises: &[&Sequent],
) -> Result<(Sequent, usize), String> {
    use Formula as F;
    if premises.len() != rule.arity() {
        return Err(format!("expects {} premises, got {}", rule.arity(), premises.len()));
    }
    let need = |xs: &[Formula], f: &Formula, what: &str| {
        remove_one(xs, f).ok_or_else(|| format!("premise {what} lacks `{f}`"))
    };
    let shape = || format!("principal formula `{p}` has the wrong shape");
    let one = |lhs: Vec<Formula>, rhs: Vec<Formula>, idx: usize| Ok((Sequent::new(lhs, rhs), idx));
    match rule {
        RuleId::I => one(vec![p.clone()], vec![p.clone()], 0),
        RuleId::LBot => match p {
            F::Bottom => one(vec![p.clone()], vec![], 0),
            _ => Err(shape()),
        },
        RuleId::ROne => match p {
            F::One => one(vec![], vec![p.clone()], 0),
            _ => Err(shape()),
        },
        RuleId::LImp => {
            let F::Lollipop(a, b) = p else { return Err(shape()) };
            let (s1, s2) = (premises[0], premises[1]);
            let phi1 = need(&s1.rhs, a, "1 right-hand side")?;
            let sigma2 = need(&s2.lhs, b, "2 left-hand side")?;
            let idx = s1.lhs.len();
            one(cat(&[&s1.lhs, std::slice::from_ref(p), &sigma2]), cat(&[&phi1, &s2.rhs]), idx)
        }
        RuleId::RImp => {
            let F::Lollipop(a, b) = p else { return Err(shape()) };
            let s = premises[0];
            let sigma = need(&s.lhs, a, "left-hand side")?;
            let phi = need(&s.rhs, b, "right-hand side")?;
            one(sigma, cat(&[std::slice::from_ref(p), &phi]), 0)
        }
        RuleId::LTensor => {
            let F::Tensor(a, b) = p else { return Err(shape()) };
            let s = premises[0];
            let sigma = need(&need(&s.lhs, a, "left-hand side")?, b, "left-hand side")?;
            let idx = sigma.len();
            one(cat(&[&sigma, std::slice::from_ref(p)]), s.rhs.clone(), idx)
        }
        RuleId::RTensor => {
            let F::Tensor(a, b) = p else { return Err(shape()) };
            let (s1, s2) = (premises[0], premises[1]);
            let phi1 = need(&s1.rhs, a, "1 right-hand side")?;
            let phi2 = need(&s2.rhs, b, "2 right-hand side")?;
            one(cat(&[&s1.lhs, &s2.lhs]), cat(&[std::slice::from_ref(p), &phi1, &phi2]), 0)
        }
        RuleId::LPar => {
            let F::Par(a, b) = p else { return Err(shape()) };
            let (s1, s2) = (premises[0], premises[1]);
            let sigma1 = need(&s1.lhs, a, "1 left-hand side")?;
            let sigma2 = need(&s2.lhs, b, "2 left-hand side")?;
            let idx = sigma1.len() + sigma2.len();
            one(cat(&[&sigma1, &sigma2, std::slice::from_ref(p)]), cat(&[&s1.rhs, &s2.rhs]), idx)
        }
        RuleId::RPar => {
            let F::Par(a, b) = p else { return Err(shape()) };
            let s = premises[0];
            let phi = need(&need(&s.rhs, a, "right-hand side")?, b, "right-hand side")?;
            one(s.lhs.clone(), cat(&[std::slice::from_ref(p), &phi]), 0)
        }
        RuleId::LPlus => {
            let F::Plus(a, b) = p else { return Err(shape()) };
            let (s1, s2) = (premises[0], premises[1]);
            let sigma1 = need(&s1.lhs, a, "1 left-hand side")?;
            let sigma2 = need(&s2.lhs, b, "2 left-hand side")?;
            if !same_multiset(&sigma1, &sigma2) || !same_multiset(&s1.rhs, &s2.rhs) {
                return Err("premise contexts differ".into());
            }
            let idx = sigma1.len();
            one(cat(&[&sigma1, std::slice::from_ref(p)]), s1.rhs.clone(), idx)
        }
        RuleId::RPlus1 | RuleId::RPlus2 => {
            let F::Plus(a, b) = p else { return Err(shape()) };
            let s = premises[0];
            let part = if rule == RuleId::RPlus1 { a } else { b };
            let phi = need(&s.rhs, part, "right-hand side")?;
            one(s.lhs.clone(), cat(&[std::slice::from_ref(p), &phi]), 0)
        }
        RuleId::LWith1 | RuleId::LWith2 => {
            let F::With(a, b) = p else { return Err(shape()) };
            let s = premises[0];
            let part = if rule == RuleId::LWith1 { a } else { b };
            let sigma = need(&s.lhs, part, "left-hand side")?;
            let idx = sigma.len();
            one(cat(&[&sigma, std::slice::from_ref(p)]), s.rhs.clone(), idx)
        }
        RuleId::RWith => {
            let F::With(a, b) = p else { return Err(shape()) };
            let (s1, s2) = (premises[0], premises[1]);
            let phi1 = need(&s1.rhs, a, "1 right-hand side")?;
            let phi2 = need(&s2.rhs, b, "2 right-hand side")?;
            if !same_multiset(&s1.lhs, &s2.lhs) || !same_multiset(&phi1, &phi2) {
                return Err("premise contexts differ".into());
            }
            one(s1.lhs.clone(), cat(&[std::slice::from_ref(p), &phi1]), 0)
        }
        RuleId::LBang => {
            let F::Bang(a) = p else { return Err(shape()) };
            let s = premises[0];
            let sigma = need(&s.lhs, a, "left-hand side")?;
            let idx = sigma.len();
            one(cat(&[&sigma, std::slice::from_ref(p)]), s.rhs.clone(), idx)
        }
        RuleId::RBang => {
            let F::Bang(c) = p else { return Err(shape()) };
            let s = premises[0];
            if s.rhs.len() != 1 || s.rhs[0] != **c {
                return Err(format!("premise right-hand side must be exactly `{c}`"));
            }
            if let Some(f) = s.lhs.iter().find(|f| !f.is_bang()) {
                return Err(format!("left-hand side formula `{f}` is not !-prefixed"));
            }
            one(s.lhs.clone(), vec![p.clone()], 0)
        }
        RuleId::WBang => {
            if !p.is_bang() {
                return Err(shape());
            }
            let s = premises[0];
            let idx = s.lhs.len();
            one(cat(&[&s.lhs, std::slice::from_ref(p)]), s.rhs.clone(), idx)
        }
        RuleId::CBang => {
            if !p.is_bang() {
                return Err(shape());
            }
            let s = premises[0];
            let sigma = need(&need(&s.lhs, p, "left-hand side")?, p, "left-hand side")?;
            let idx = sigma.len();
            one(cat(&[&sigma, std::slice::from_ref(p)]), s.rhs.clone(), idx)
        }
        RuleId::RBot => {
            if *p != F::Bottom {
                return Err(shape());
            }
            let s = premises[0];
            let idx = s.rhs.len();
            one(s.lhs.clone(), cat(&[&s.rhs, std::slice::from_ref(p)]), idx)
        }
        RuleId::LOne => {
            if *p != F::One {
                return Err(shape());
            }
            let s = premises[0];
            let idx = s.lhs.len();
            one(cat(&[&s.lhs, std::slice::from_ref(p)]), s.rhs.clone(), idx)
        }
    }
}

impl Proof {
    /// Applies `rule` to finished premises; the conclusion is derived.
    pub fn build(rule: RuleId, principal: &Formula, premises: Vec<Proof>) -> Result<Proof, BuildError> {
        let concl: Vec<&Sequent> = premises.iter().map(|p| &p.conclusion).collect();
        let (conclusion, index) = conclude(rule, principal, &concl)
            .map_err(|message| BuildError { rule, message })?;
        Ok(Proof { conclusion, rule, principal: Principal { side: rule.side(), index }, premises })
    }

    pub fn axiom(f: &Formula) -> Proof {
        Proof::build(RuleId::I, f, vec![]).expect("identity always applies")
    }

    pub fn principal_formula(&self) -> Option<&Formula> {
        let side = match self.principal.side {
            Side::Lhs => &self.conclusion.lhs,
            Side::Rhs => &self.conclusion.rhs,
        };
        side.get(self.principal.index)
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Proof::node_count).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Proof::height).max().unwrap_or(0)
    }

    /// Rules used anywhere in the tree.
    pub fn rules(&self) -> Vec<RuleId> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out.sort();
        out.dedup();
        out
    }

    /// Replaces the literal `index` by `by` in every sequent; derivability
    /// is preserved since no rule inspects literals.
    pub fn substitute(&self, index: u32, by: &Formula) -> Proof {
        fn go(p: &Proof, index: u32, by: &Formula, memo: &mut HashMap<Formula, Formula>) -> Proof {
            let mut sub = |fs: &[Formula]| -> Vec<Formula> {
                fs.iter()
                    .map(|f| memo.entry(f.clone()).or_insert_with(|| f.substitute(index, by)).clone())
                    .collect()
            };
            let conclusion = Sequent::new(sub(&p.conclusion.lhs), sub(&p.conclusion.rhs));
            let premises = p.premises.iter().map(|q| go(q, index, by, memo)).collect();
            Proof { conclusion, rule: p.rule, principal: p.principal, premises }
        }
        go(self, index, by, &mut HashMap::new())
    }

    /// Rewrites the root conclusion to the presentation order of `target`,
    /// which must agree with it as a multiset.
    pub fn reorder_root(&mut self, target: &Sequent) -> bool {
        if !self.conclusion.same_multisets(target) {
            return false;
        }
        let Some(p) = self.principal_formula().cloned() else { return false };
        let side = match self.principal.side {
            Side::Lhs => &target.lhs,
            Side::Rhs => &target.rhs,
        };
        let Some(index) = side.iter().position(|f| *f == p) else { return false };
        self.conclusion = target.clone();
        self.principal.index = index;
        true
    }

    /// Serializes as `(rule R (seq "S") (principal side i) premise*)`.
    pub fn to_sexp(&self) -> String {
        let mut out = String::new();
        self.write_sexp(&mut out, 0);
        out
    }

    fn write_sexp(&self, out: &mut String, depth: usize) {
        use std::fmt::Write;
        let _ = write!(
            out,
            "(rule {} (seq \"{}\") (principal {} {})",
            self.rule, self.conclusion, self.principal.side, self.principal.index
        );
        for p in &self.premises {
            out.push('\n');
            out.push_str(&"  ".repeat(depth + 1));
            p.write_sexp(out, depth + 1);
        }
        out.push(')');
    }
}

impl fmt::Debug for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexp())
    }
}

/// Checks every node of `p` against its rule.
pub fn check_proof(p: &Proof) -> Result<(), Violation> {
    let mut stack: Vec<(&Proof, Vec<usize>)> = vec![(p, vec![])];
    while let Some((node, path)) = stack.pop() {
        check_node(node).map_err(|message| Violation { path: path.clone(), rule: node.rule, message })?;
        for (i, q) in node.premises.iter().enumerate() {
            let mut sub = path.clone();
            sub.push(i);
            stack.push((q, sub));
        }
    }
    Ok(())
}

fn check_node(node: &Proof) -> Result<(), String> {
    if node.principal.side != node.rule.side() {
        return Err(format!("principal formula must be on the {} side", node.rule.side()));
    }
    let Some(p) = node.principal_formula() else {
        return Err(format!(
            "principal index {} out of range on the {} side",
            node.principal.index, node.principal.side
        ));
    };
    let premises: Vec<&Sequent> = node.premises.iter().map(|q| &q.conclusion).collect();
    let (expected, _) = conclude(node.rule, p, &premises)?;
    if !expected.same_multisets(&node.conclusion) {
        return Err(format!("conclusion `{}` does not match `{}`", node.conclusion, expected));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed proof s-expression: {0}")]
pub struct SexpError(pub String);

pub fn proof_from_sexp(text: &str) -> Result<Proof, SexpError> {
    let v = lexpr::from_str(text).map_err(|e| SexpError(e.to_string()))?;
    proof_from_value(&v)
}

/// Reads every top-level proof in `text`.
pub fn proofs_from_sexp(text: &str) -> Result<Vec<Proof>, SexpError> {
    let mut parser = lexpr::Parser::from_str(text);
    let mut out = Vec::new();
    for v in parser.value_iter() {
        let v = v.map_err(|e| SexpError(e.to_string()))?;
        out.push(proof_from_value(&v)?);
    }
    Ok(out)
}

fn proof_from_value(v: &lexpr::Value) -> Result<Proof, SexpError> {
    let err = |m: &str| SexpError(format!("{m} in `{v}`"));
    let items: Vec<&lexpr::Value> = v.list_iter().ok_or_else(|| err("expected a list"))?.collect();
    if items.len() < 4 || items[0].as_symbol() != Some("rule") {
        return Err(err("expected (rule R (seq ..) (principal ..) ..)"));
    }
    let rule = items[1]
        .as_symbol()
        .and_then(RuleId::from_token)
        .ok_or_else(|| err("unknown rule"))?;
    let seq: Vec<&lexpr::Value> = items[2].list_iter().ok_or_else(|| err("bad seq"))?.collect();
    let text = match seq.as_slice() {
        [tag, s] if tag.as_symbol() == Some("seq") => s.as_str().ok_or_else(|| err("bad seq"))?,
        _ => return Err(err("bad seq")),
    };
    let conclusion = crate::parse::parse_sequent(text).map_err(|e| SexpError(e.to_string()))?;
    let pr: Vec<&lexpr::Value> = items[3].list_iter().ok_or_else(|| err("bad principal"))?.collect();
    let principal = match pr.as_slice() {
        [tag, side, idx] if tag.as_symbol() == Some("principal") => {
            let side = match side.as_symbol() {
                Some("lhs") => Side::Lhs,
                Some("rhs") => Side::Rhs,
                _ => return Err(err("bad side")),
            };
            let index = idx.as_u64().ok_or_else(|| err("bad index"))? as usize;
            Principal { side, index }
        }
        _ => return Err(err("bad principal")),
    };
    let premises = items[4..].iter().map(|q| proof_from_value(q)).collect::<Result<_, _>>()?;
    Ok(Proof { conclusion, rule, principal, premises })
}

/// Counts of `!A` copies (keyed by `A`) that a derivation expects on its
/// left-hand side beyond its linear context.
pub type Needs = BTreeMap<Formula, usize>;

#[derive(Clone, Debug)]
pub enum DraftStep {
    Rule(RuleId, Formula),
    /// Use of `A` from the unrestricted zone; becomes `L!` on `!A`.
    Derelict(Formula),
    /// A `!A` of the conclusion whose copies are shared by the subtree;
    /// becomes `W!` or a run of `C!`.
    Absorb(Formula),
}

/// A derivation whose banged context is left implicit. Emission turns it
/// into a [`Proof`] with explicit weakening and contraction.
#[derive(Clone, Debug)]
pub struct Draft {
    pub step: DraftStep,
    pub premises: Vec<Draft>,
}

impl Draft {
    pub fn rule(rule: RuleId, principal: Formula, premises: Vec<Draft>) -> Draft {
        Draft { step: DraftStep::Rule(rule, principal), premises }
    }

    pub fn axiom(f: Formula) -> Draft {
        Draft::rule(RuleId::I, f, vec![])
    }

    pub fn derelict(body: Formula, premise: Draft) -> Draft {
        Draft { step: DraftStep::Derelict(body), premises: vec![premise] }
    }

    pub fn absorb(body: Formula, premise: Draft) -> Draft {
        Draft { step: DraftStep::Absorb(body), premises: vec![premise] }
    }

    /// Emits the explicit proof; any `!A` still needed at the root appears
    /// in its conclusion once per use.
    pub fn emit(&self) -> Result<(Proof, Needs), BuildError> {
        let mut done = Vec::with_capacity(self.premises.len());
        for p in &self.premises {
            done.push(p.emit()?);
        }
        match &self.step {
            DraftStep::Rule(rule, principal) => {
                let shared = matches!(rule, RuleId::LPlus | RuleId::RWith);
                let mut needs = Needs::new();
                for (_, n) in &done {
                    for (f, k) in n {
                        let e = needs.entry(f.clone()).or_insert(0);
                        *e = if shared { (*e).max(*k) } else { *e + k };
                    }
                }
                let mut premises = Vec::with_capacity(done.len());
                for (mut proof, n) in done {
                    if shared {
                        for (f, k) in &needs {
                            let have = n.get(f).copied().unwrap_or(0);
                            for _ in have..*k {
                                proof = Proof::build(RuleId::WBang, &crate::formula::bang(f.clone()), vec![proof])?;
                            }
                        }
                    }
                    premises.push(proof);
                }
                Ok((Proof::build(*rule, principal, premises)?, needs))
            }
            DraftStep::Derelict(body) => {
                let (proof, mut needs) = done.pop().expect("one premise");
                *needs.entry(body.clone()).or_insert(0) += 1;
                Ok((Proof::build(RuleId::LBang, &crate::formula::bang(body.clone()), vec![proof])?, needs))
            }
            DraftStep::Absorb(body) => {
                let (mut proof, mut needs) = done.pop().expect("one premise");
                let banged = crate::formula::bang(body.clone());
                match needs.remove(body).unwrap_or(0) {
                    0 => proof = Proof::build(RuleId::WBang, &banged, vec![proof])?,
                    n => {
                        for _ in 1..n {
                            proof = Proof::build(RuleId::CBang, &banged, vec![proof])?;
                        }
                    }
                }
                Ok((proof, needs))
            }
        }
    }

    /// Emits and requires that nothing is left implicit.
    pub fn finish(&self) -> Result<Proof, BuildError> {
        let (proof, needs) = self.emit()?;
        if let Some((f, _)) = needs.iter().next() {
            return Err(BuildError {
                rule: RuleId::LBang,
                message: format!("`!{f}` is used but never introduced"),
            });
        }
        Ok(proof)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{bang, lit, lolli, tensor};
    use crate::parse::parse_sequent;

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    #[test]
    fn identity_and_units() {
        assert!(check_proof(&Proof::axiom(&lit(1))).is_ok());
        let r1 = Proof::build(RuleId::ROne, &Formula::One, vec![]).unwrap();
        assert_eq!(r1.conclusion, seq("|- 1"));
        assert!(check_proof(&r1).is_ok());
    }

    #[test]
    fn promotion_needs_banged_context() {
        let bad = Proof {
            conclusion: seq("p1 |- !p1"),
            rule: RuleId::RBang,
            principal: Principal { side: Side::Rhs, index: 0 },
            premises: vec![Proof::axiom(&lit(1))],
        };
        let v = check_proof(&bad).unwrap_err();
        assert_eq!(v.rule, RuleId::RBang);
        assert!(v.message.contains("not !-prefixed"));
    }

    #[test]
    fn modus_ponens_builds_and_checks() {
        let imp = lolli(lit(1), lit(2));
        let p = Proof::build(RuleId::LImp, &imp, vec![Proof::axiom(&lit(1)), Proof::axiom(&lit(2))]).unwrap();
        assert!(p.conclusion.same_multisets(&seq("p1, (p1 -o p2) |- p2")));
        assert!(check_proof(&p).is_ok());
        let text = p.to_sexp();
        assert_eq!(proof_from_sexp(&text).unwrap(), p);
    }

    #[test]
    fn corrupted_context_is_reported_with_path() {
        let t = tensor(lit(1), lit(2));
        let mut p = Proof::build(RuleId::RTensor, &t, vec![Proof::axiom(&lit(1)), Proof::axiom(&lit(2))]).unwrap();
        p.premises[1].conclusion = seq("p3 |- p3");
        let v = check_proof(&p).unwrap_err();
        assert_eq!((v.rule, v.path.clone()), (RuleId::RTensor, vec![]));
        p.premises[1] = Proof::axiom(&lit(2));
        p.premises[1].principal.index = 5;
        let v = check_proof(&p).unwrap_err();
        assert_eq!((v.rule, v.path), (RuleId::I, vec![1]));
    }

    #[test]
    fn draft_inserts_structural_steps() {
        // !(p1 -o p2), p1, p1 |- (p2 * p2): two derelictions share one bang.
        let imp = lolli(lit(1), lit(2));
        let mp = || {
            Draft::derelict(
                imp.clone(),
                Draft::rule(RuleId::LImp, imp.clone(), vec![Draft::axiom(lit(1)), Draft::axiom(lit(2))]),
            )
        };
        let both = Draft::rule(RuleId::RTensor, tensor(lit(2), lit(2)), vec![mp(), mp()]);
        let proof = Draft::absorb(imp.clone(), both).finish().unwrap();
        assert!(check_proof(&proof).is_ok());
        assert!(proof.conclusion.same_multisets(&seq("!(p1 -o p2), p1, p1 |- (p2 * p2)")));
        assert!(proof.rules().contains(&RuleId::CBang));

        let unused = Draft::absorb(imp.clone(), Draft::axiom(lit(1))).finish().unwrap();
        assert_eq!(unused.rule, RuleId::WBang);
        assert!(unused.conclusion.same_multisets(&seq("p1, !(p1 -o p2) |- p1")));
        assert_eq!(bang(imp), unused.conclusion.lhs[1]);
    }
}
