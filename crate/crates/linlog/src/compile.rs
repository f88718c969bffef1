//! Assembling derivations from strong solutions, for the source sequent and
//! for each of its encodings.
//!
//! The state of a program run is kept as the atoms of `OUT`: literals in
//! the source, the unpacked `E_(p⊗X)` in the encodings. On the covariant
//! side (source, ⊥-only) they sit on the left and goals are built on the
//! right; on the contravariant side (one-literal, unit-only) the roles of
//! the two encoded products are swapped.

use crate::encode::{Encoder, EncodingError, EncodingParams, Target};
use crate::formula::{lit, lolli, plus, with, Formula, Sequent};
use crate::normalized::{NormalizedFormula, NormalizedSequent};
use crate::product::SimpleProduct;
use crate::program::{assign_usage, evaluate, EdgeLabel, Program, Projection, Source, UsageAssignment, Vertex};
use crate::proof::{check_proof, Draft, Proof, RuleId};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("the program is not a strong solution of the sequent")]
    NotAStrongSolution,
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error("cannot assemble a derivation: {0}")]
    Assembly(String),
}

/// The calculus a program is compiled into.
#[derive(Debug, Clone)]
pub(crate) enum Mode {
    Source,
    Encoded(Encoder),
}

impl Mode {
    pub(crate) fn new(params: Option<&EncodingParams>) -> Result<Mode, EncodingError> {
        Ok(match params {
            None => Mode::Source,
            Some(p) => Mode::Encoded(Encoder::new(*p)?),
        })
    }

    fn covariant(&self) -> bool {
        match self {
            Mode::Source => true,
            Mode::Encoded(e) => e.target() == Target::BotOnly,
        }
    }

    /// Encoded state for the bag `x`; the source has no empty state.
    pub(crate) fn state(&self, x: &[u32]) -> Formula {
        match self {
            Mode::Source => SimpleProduct::new(x.to_vec()).expect("non-empty state").to_formula(),
            Mode::Encoded(e) => e.ep(x),
        }
    }

    pub(crate) fn formula(&self, a: &NormalizedFormula) -> Formula {
        match self {
            Mode::Source => a.to_formula(),
            Mode::Encoded(e) => e.formula(a),
        }
    }

    fn horn(&self, x: &SimpleProduct, y: &SimpleProduct) -> Formula {
        match self {
            Mode::Source => lolli(x.to_formula(), y.to_formula()),
            Mode::Encoded(e) => e.horn(x.literals(), y.literals()),
        }
    }

    pub(crate) fn sequent(&self, s: &NormalizedSequent) -> Sequent {
        match self {
            Mode::Source => s.to_sequent(),
            Mode::Encoded(e) => e.sequent(s),
        }
    }

    /// Unpacks the state `x` into atoms, then continues with `inner`.
    fn intro(&self, x: &[u32], inner: Draft) -> Draft {
        let f = self.state(x);
        match self {
            Mode::Source => unflatten(&f, inner),
            Mode::Encoded(e) => match e.target() {
                Target::BotOnly => unflatten(&f, inner),
                Target::OneLiteral => spine_intro(&f, &lit(e.p()), inner),
                Target::UnitOnly => {
                    let Formula::Lollipop(c6, g) = &f else { unreachable!("E¹ is an implication") };
                    let body = unflatten(c6, split_par_right(g, inner));
                    Draft::rule(RuleId::RImp, f.clone(), vec![body])
                }
            },
        }
    }

    /// Consumes the atoms of the state `x` against its encoding.
    fn elim(&self, x: &[u32]) -> Draft {
        let f = self.state(x);
        match self {
            Mode::Source => assemble(&f),
            Mode::Encoded(e) => match e.target() {
                Target::BotOnly => assemble(&f),
                Target::OneLiteral => spine_elim(&f, &lit(e.p())),
                Target::UnitOnly => {
                    let Formula::Lollipop(c6, g) = &f else { unreachable!("E¹ is an implication") };
                    Draft::rule(RuleId::LImp, f.clone(), vec![assemble(c6), split_par_left(g)])
                }
            },
        }
    }

    /// A Horn step through `h = enc(X ⊸ Y)`.
    fn horn_step(&self, h: Formula, x: &SimpleProduct, y: &SimpleProduct, cont: Draft) -> Draft {
        let (x, y) = (x.literals(), y.literals());
        let premises = if self.covariant() {
            vec![self.elim(x), self.intro(y, cont)]
        } else {
            vec![self.intro(y, cont), self.elim(x)]
        };
        Draft::rule(RuleId::LImp, h, premises)
    }

    fn fork_step(&self, f: Formula, x: &SimpleProduct, y1: &SimpleProduct, c1: Draft, y2: &SimpleProduct, c2: Draft) -> Draft {
        let (b1, b2) = (self.intro(y1.literals(), c1), self.intro(y2.literals(), c2));
        let (s1, s2) = (self.state(y1.literals()), self.state(y2.literals()));
        if self.covariant() {
            let split = Draft::rule(RuleId::LPlus, plus(s1, s2), vec![b1, b2]);
            Draft::rule(RuleId::LImp, f, vec![self.elim(x.literals()), split])
        } else {
            let both = Draft::rule(RuleId::RWith, with(s1, s2), vec![b1, b2]);
            Draft::rule(RuleId::LImp, f, vec![both, self.elim(x.literals())])
        }
    }

    /// `f` encodes `(U ⊸ V) ⊸ Y`; `block` runs from `U` and ends in pops of
    /// `V`, `cont` runs from the resumed state.
    fn push_step(&self, f: Formula, u: &SimpleProduct, v: &SimpleProduct, y: &SimpleProduct, block: Draft, cont: Draft) -> Draft {
        let (u, v, y) = (u.literals(), v.literals(), y.literals());
        match self {
            Mode::Source => {
                let uv = lolli(self.state(u), self.state(v));
                let inner = Draft::rule(RuleId::RImp, uv, vec![self.intro(u, block)]);
                Draft::rule(RuleId::LImp, f, vec![inner, self.intro(y, cont)])
            }
            Mode::Encoded(e) => {
                let (fuv, fy) = (e.horn(u, v), e.cont(y));
                let inner = Draft::rule(RuleId::RImp, fuv.clone(), vec![self.intro(u, block)]);
                match e.target() {
                    Target::BotOnly => {
                        let resume = Draft::rule(RuleId::LImp, fy, vec![self.elim(&[]), self.intro(y, cont)]);
                        Draft::rule(RuleId::LImp, f, vec![inner, resume])
                    }
                    Target::UnitOnly => {
                        let resume = Draft::rule(RuleId::LImp, fy, vec![self.intro(y, cont), self.elim(&[])]);
                        Draft::rule(RuleId::LImp, f, vec![inner, resume])
                    }
                    Target::OneLiteral => {
                        let p = lit(e.p());
                        let resume = Draft::rule(RuleId::LImp, fy.clone(), vec![self.intro(y, cont), self.elim(&[])]);
                        let left = Draft::rule(RuleId::RImp, lolli(fy, p.clone()), vec![resume]);
                        let right = Draft::rule(RuleId::LImp, lolli(fuv, p.clone()), vec![inner, Draft::axiom(p)]);
                        Draft::rule(RuleId::LImp, f, vec![left, right])
                    }
                }
            }
        }
    }
}

/// `L⊗` on every ⊗-node of the left formula `f`.
fn unflatten(f: &Formula, inner: Draft) -> Draft {
    match f {
        Formula::Tensor(a, b) => Draft::rule(RuleId::LTensor, f.clone(), vec![unflatten(a, unflatten(b, inner))]),
        _ => inner,
    }
}

/// Builds the right formula `f` from its ⊗-leaves by `R⊗` and `I`.
fn assemble(f: &Formula) -> Draft {
    match f {
        Formula::Tensor(a, b) => Draft::rule(RuleId::RTensor, f.clone(), vec![assemble(a), assemble(b)]),
        _ => Draft::axiom(f.clone()),
    }
}

fn split_par_right(f: &Formula, inner: Draft) -> Draft {
    match f {
        Formula::Par(a, b) => Draft::rule(RuleId::RPar, f.clone(), vec![split_par_right(a, split_par_right(b, inner))]),
        _ => inner,
    }
}

fn split_par_left(f: &Formula) -> Draft {
    match f {
        Formula::Par(a, b) => Draft::rule(RuleId::LPar, f.clone(), vec![split_par_left(a), split_par_left(b)]),
        _ => Draft::axiom(f.clone()),
    }
}

/// `R⊸` along the consequent spine of `f` down to `end`.
fn spine_intro(f: &Formula, end: &Formula, inner: Draft) -> Draft {
    match f {
        _ if f == end => inner,
        Formula::Lollipop(_, b) => Draft::rule(RuleId::RImp, f.clone(), vec![spine_intro(b, end, inner)]),
        _ => unreachable!("spine ends in the leading literal"),
    }
}

/// `L⊸` along the consequent spine of `f`, closing each antecedent by `I`.
fn spine_elim(f: &Formula, end: &Formula) -> Draft {
    match f {
        _ if f == end => Draft::axiom(end.clone()),
        Formula::Lollipop(a, b) => {
            Draft::rule(RuleId::LImp, f.clone(), vec![Draft::axiom((**a).clone()), spine_elim(b, end)])
        }
        _ => unreachable!("spine ends in the leading literal"),
    }
}

/// Target vertex of the first pop matching a push whose target is `v`.
fn first_pop_target(v: &Vertex) -> Option<&Vertex> {
    fn walk(v: &Vertex, depth: usize) -> Option<&Vertex> {
        for e in &v.edges {
            let found = match &e.label {
                EdgeLabel::Pop(_) if depth == 0 => Some(&e.target),
                EdgeLabel::Pop(_) => walk(&e.target, depth - 1),
                EdgeLabel::Push(..) => walk(&e.target, depth + 1),
                EdgeLabel::Horn(..) => walk(&e.target, depth),
            };
            if found.is_some() {
                return found;
            }
        }
        None
    }
    walk(v, 0)
}

struct Compiler<'a> {
    mode: &'a Mode,
    s: &'a NormalizedSequent,
    usage: UsageAssignment,
}

impl Compiler<'_> {
    fn drawn(&self, target: usize) -> Result<(Source, Projection, &NormalizedFormula), CompileError> {
        let u = self.usage.uses.get(&target).ok_or(CompileError::NotAStrongSolution)?;
        let a = match u.source {
            Source::Delta(i) => &self.s.delta[i],
            Source::Gamma(i) => &self.s.gamma[i],
        };
        Ok((u.source, u.projection, a))
    }

    /// Wraps a step on the used part of `a` into `L&` and dereliction.
    fn wrap(&self, source: Source, projection: Projection, a: &NormalizedFormula, d: Draft) -> Draft {
        let whole = self.mode.formula(a);
        let d = match projection {
            Projection::Whole => d,
            Projection::Left => Draft::rule(RuleId::LWith1, whole.clone(), vec![d]),
            Projection::Right => Draft::rule(RuleId::LWith2, whole.clone(), vec![d]),
        };
        match source {
            Source::Delta(_) => d,
            Source::Gamma(_) => Draft::derelict(whole, d),
        }
    }

    fn vertex(&self, v: &Vertex) -> Result<Draft, CompileError> {
        match v.edges.as_slice() {
            [] => Ok(self.mode.elim(self.s.z.literals())),
            [e] => self.edge(&e.label, &e.target),
            [e1, e2] => {
                let (u1, u2) = (self.usage.uses.get(&e1.target.id), self.usage.uses.get(&e2.target.id));
                let (EdgeLabel::Horn(x, y1), EdgeLabel::Horn(_, y2)) = (&e1.label, &e2.label) else {
                    return Err(CompileError::NotAStrongSolution);
                };
                if u1.is_none() || u1 != u2 {
                    // Each branch is a solution on its own.
                    return self.edge(&e1.label, &e1.target);
                }
                let (source, projection, a) = self.drawn(e1.target.id)?;
                let NormalizedFormula::PlusHorn(_, a1, _) = a else {
                    return Err(CompileError::NotAStrongSolution);
                };
                let (c1, c2) = (self.vertex(&e1.target)?, self.vertex(&e2.target)?);
                let f = self.mode.formula(a);
                let d = if a1 == y1 {
                    self.mode.fork_step(f, x, y1, c1, y2, c2)
                } else {
                    self.mode.fork_step(f, x, y2, c2, y1, c1)
                };
                Ok(self.wrap(source, projection, a, d))
            }
            _ => Err(CompileError::NotAStrongSolution),
        }
    }

    fn edge(&self, label: &EdgeLabel, target: &Vertex) -> Result<Draft, CompileError> {
        match label {
            EdgeLabel::Pop(v) => Ok(self.mode.elim(v.literals())),
            EdgeLabel::Horn(x, y) => {
                let (source, projection, a) = self.drawn(target.id)?;
                let d = self.mode.horn_step(self.mode.horn(x, y), x, y, self.vertex(target)?);
                Ok(self.wrap(source, projection, a, d))
            }
            EdgeLabel::Push(..) => {
                let (source, projection, a) = self.drawn(target.id)?;
                let NormalizedFormula::Embedded(u, v, y) = a else {
                    return Err(CompileError::NotAStrongSolution);
                };
                let resume = first_pop_target(target).ok_or(CompileError::NotAStrongSolution)?;
                let block = self.vertex(target)?;
                let cont = self.vertex(resume)?;
                let d = self.mode.push_step(self.mode.formula(a), u, v, y, block, cont);
                Ok(self.wrap(source, projection, a, d))
            }
        }
    }
}

pub(crate) fn compile(p: &Program, s: &NormalizedSequent, mode: &Mode) -> Result<Proof, CompileError> {
    if p.validate().is_err() || !evaluate(p, &s.w, &s.z) {
        return Err(CompileError::NotAStrongSolution);
    }
    let usage = assign_usage(p, &s.delta, &s.gamma).map_err(|_| CompileError::NotAStrongSolution)?;
    let c = Compiler { mode, s, usage };
    let mut draft = mode.intro(s.w.literals(), c.vertex(&p.root)?);
    for a in s.gamma.iter().rev() {
        draft = Draft::absorb(mode.formula(a), draft);
    }
    let mut proof = draft.finish().map_err(|e| CompileError::Assembly(e.to_string()))?;
    let target = mode.sequent(s);
    if !proof.reorder_root(&target) {
        return Err(CompileError::Assembly(format!("derived `{}` instead of `{target}`", proof.conclusion)));
    }
    check_proof(&proof).map_err(|v| CompileError::Assembly(v.to_string()))?;
    Ok(proof)
}

/// A derivation of `S` that follows the runs of the strong solution `p`.
pub fn program_to_proof(p: &Program, s: &NormalizedSequent) -> Result<Proof, CompileError> {
    compile(p, s, &Mode::Source)
}

/// A derivation of `encode_sequent(S, params)` that follows `p`.
pub fn program_to_encoded_proof(
    p: &Program,
    s: &NormalizedSequent,
    params: &EncodingParams,
) -> Result<Proof, CompileError> {
    params.validate_for(s)?;
    compile(p, s, &Mode::new(Some(params))?)
}
