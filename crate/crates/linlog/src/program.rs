//! Acyclic one-stack programs: tree-shaped programs whose edges run Horn
//! steps, `PUSH` and `POP` on a pushdown store of simple products.

use crate::normalized::{NormalizedFormula, NormalizedSequent};
use crate::product::{bag_minus, bag_to_string, bag_union, sub_bags, Bag, SimpleProduct};
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    /// `X ⊸ Y`
    Horn(SimpleProduct, SimpleProduct),
    /// `PUSH(Y1; X2, Y2)`; `X2` may be empty.
    Push(SimpleProduct, Bag, SimpleProduct),
    /// `POP(V)`
    Pop(SimpleProduct),
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLabel::Horn(x, y) => write!(f, "{x} -o {y}"),
            EdgeLabel::Push(y1, x2, y2) => write!(f, "PUSH({y1}; {}, {y2})", bag_to_string(x2)),
            EdgeLabel::Pop(v) => write!(f, "POP({v})"),
        }
    }
}

impl fmt::Debug for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub label: EdgeLabel,
    pub target: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    /// Preorder position, assigned by [`Program::new`].
    pub id: usize,
    pub edges: Vec<Edge>,
}

impl Vertex {
    pub fn leaf() -> Vertex {
        Vertex { id: 0, edges: vec![] }
    }

    pub fn step(label: EdgeLabel, target: Vertex) -> Vertex {
        Vertex { id: 0, edges: vec![Edge { label, target }] }
    }

    pub fn fork(l1: EdgeLabel, t1: Vertex, l2: EdgeLabel, t2: Vertex) -> Vertex {
        Vertex { id: 0, edges: vec![Edge { label: l1, target: t1 }, Edge { label: l2, target: t2 }] }
    }

    fn number(&mut self, next: &mut usize) {
        self.id = *next;
        *next += 1;
        for e in &mut self.edges {
            e.target.number(next);
        }
    }

    fn edge_count(&self) -> usize {
        self.edges.iter().map(|e| 1 + e.target.edge_count()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProgramError {
    #[error("vertex {0} has more than two outgoing edges")]
    TooManyEdges(usize),
    #[error("divergent vertex {0} must have two Horn edges with the same antecedent")]
    BadDivergence(usize),
    #[error("pop on the edge into vertex {0} has no partner push")]
    UnmatchedPop(usize),
    #[error("output vertex {0} is reached with an unmatched push")]
    UnmatchedPush(usize),
    #[error("malformed program s-expression: {0}")]
    Sexp(String),
}

/// A rooted tree of vertices; the root is the input vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    pub root: Vertex,
}

impl Program {
    /// Numbers the vertices and checks the structural conditions.
    pub fn new(root: Vertex) -> Result<Program, ProgramError> {
        let p = Program::unchecked(root);
        p.validate()?;
        Ok(p)
    }

    /// Numbers the vertices without validating, for degenerate inputs.
    pub fn unchecked(mut root: Vertex) -> Program {
        root.number(&mut 0);
        Program { root }
    }

    pub fn trivial() -> Program {
        Program::unchecked(Vertex::leaf())
    }

    pub fn validate(&self) -> Result<(), ProgramError> {
        fn walk(v: &Vertex, depth: usize) -> Result<(), ProgramError> {
            match v.edges.as_slice() {
                [] if depth > 0 => return Err(ProgramError::UnmatchedPush(v.id)),
                [a, b] => match (&a.label, &b.label) {
                    (EdgeLabel::Horn(x1, _), EdgeLabel::Horn(x2, _)) if x1 == x2 => {}
                    _ => return Err(ProgramError::BadDivergence(v.id)),
                },
                es if es.len() > 2 => return Err(ProgramError::TooManyEdges(v.id)),
                _ => {}
            }
            for e in &v.edges {
                let d = match e.label {
                    EdgeLabel::Push(..) => depth + 1,
                    EdgeLabel::Pop(_) if depth == 0 => return Err(ProgramError::UnmatchedPop(e.target.id)),
                    EdgeLabel::Pop(_) => depth - 1,
                    EdgeLabel::Horn(..) => depth,
                };
                walk(&e.target, d)?;
            }
            Ok(())
        }
        walk(&self.root, 0)
    }

    pub fn vertex_count(&self) -> usize {
        self.edge_count() + 1
    }

    pub fn edge_count(&self) -> usize {
        self.root.edge_count()
    }

    pub fn push_count(&self) -> usize {
        self.labels().iter().filter(|l| matches!(l, EdgeLabel::Push(..))).count()
    }

    /// Edge labels in preorder.
    pub fn labels(&self) -> Vec<&EdgeLabel> {
        fn walk<'a>(v: &'a Vertex, out: &mut Vec<&'a EdgeLabel>) {
            for e in &v.edges {
                out.push(&e.label);
                walk(&e.target, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut out);
        out
    }

    /// Largest number of pushes on one root-to-leaf path.
    pub fn max_pushes_per_path(&self) -> usize {
        fn walk(v: &Vertex) -> usize {
            v.edges
                .iter()
                .map(|e| usize::from(matches!(e.label, EdgeLabel::Push(..))) + walk(&e.target))
                .max()
                .unwrap_or(0)
        }
        walk(&self.root)
    }

    pub fn to_sexp(&self) -> String {
        let mut out = String::new();
        write_vertex(&self.root, 0, &mut out);
        out
    }

    pub fn from_sexp(text: &str) -> Result<Program, ProgramError> {
        let v = lexpr::from_str(text).map_err(|e| ProgramError::Sexp(e.to_string()))?;
        Program::new(read_vertex(&v)?)
    }
}

fn lits_sexp(b: &[u32]) -> String {
    let parts: Vec<String> = b.iter().map(|i| format!("p{i}")).collect();
    format!("({})", parts.join(" "))
}

fn write_vertex(v: &Vertex, depth: usize, out: &mut String) {
    out.push_str(&format!("(vertex {}", v.id));
    for e in &v.edges {
        out.push('\n');
        out.push_str(&"  ".repeat(depth + 1));
        let label = match &e.label {
            EdgeLabel::Horn(x, y) => format!("(horn {} {})", lits_sexp(x.literals()), lits_sexp(y.literals())),
            EdgeLabel::Push(y1, x2, y2) => {
                format!("(push {} {} {})", lits_sexp(y1.literals()), lits_sexp(x2), lits_sexp(y2.literals()))
            }
            EdgeLabel::Pop(v) => format!("(pop {})", lits_sexp(v.literals())),
        };
        out.push_str(&format!("(edge {label}\n"));
        out.push_str(&"  ".repeat(depth + 2));
        write_vertex(&e.target, depth + 2, out);
        out.push(')');
    }
    out.push(')');
}

fn read_list(v: &lexpr::Value) -> Result<Vec<&lexpr::Value>, ProgramError> {
    v.list_iter()
        .map(|it| it.collect())
        .ok_or_else(|| ProgramError::Sexp(format!("expected a list, found `{v}`")))
}

fn read_lits(v: &lexpr::Value) -> Result<Bag, ProgramError> {
    let mut out = Vec::new();
    for item in read_list(v)? {
        let i = item
            .as_symbol()
            .and_then(|s| s.strip_prefix('p'))
            .and_then(|d| d.parse::<u32>().ok())
            .filter(|&i| i >= 1)
            .ok_or_else(|| ProgramError::Sexp(format!("bad literal `{item}`")))?;
        out.push(i);
    }
    out.sort_unstable();
    Ok(out)
}

fn read_product(v: &lexpr::Value) -> Result<SimpleProduct, ProgramError> {
    SimpleProduct::new(read_lits(v)?).map_err(|e| ProgramError::Sexp(e.to_string()))
}

fn read_vertex(v: &lexpr::Value) -> Result<Vertex, ProgramError> {
    let items = read_list(v)?;
    if items.len() < 2 || items[0].as_symbol() != Some("vertex") || items[1].as_u64().is_none() {
        return Err(ProgramError::Sexp(format!("expected (vertex <id> ...), found `{v}`")));
    }
    let mut edges = Vec::new();
    for e in &items[2..] {
        let parts = read_list(e)?;
        let [tag, label, target] = parts.as_slice() else {
            return Err(ProgramError::Sexp(format!("expected (edge <label> <vertex>), found `{e}`")));
        };
        if tag.as_symbol() != Some("edge") {
            return Err(ProgramError::Sexp(format!("expected edge, found `{tag}`")));
        }
        let l = read_list(label)?;
        let label = match (l.first().and_then(|s| s.as_symbol()), &l[1..]) {
            (Some("horn"), [x, y]) => EdgeLabel::Horn(read_product(x)?, read_product(y)?),
            (Some("push"), [y1, x2, y2]) => EdgeLabel::Push(read_product(y1)?, read_lits(x2)?, read_product(y2)?),
            (Some("pop"), [v]) => EdgeLabel::Pop(read_product(v)?),
            _ => return Err(ProgramError::Sexp(format!("bad edge label `{label}`"))),
        };
        edges.push(Edge { label, target: read_vertex(target)? });
    }
    Ok(Vertex { id: 0, edges })
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexp())
    }
}

/// `OUT(v)` and `STACK(v)` per vertex id; `None` is undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionTrace {
    pub out: Vec<Option<Bag>>,
    pub stack: Vec<Vec<Bag>>,
    /// Output vertex ids.
    pub leaves: Vec<usize>,
}

pub fn run_strong(p: &Program, w: &SimpleProduct) -> ExecutionTrace {
    let n = p.vertex_count();
    let mut t = ExecutionTrace { out: vec![None; n], stack: vec![Vec::new(); n], leaves: Vec::new() };
    fn walk(v: &Vertex, out: Option<Bag>, stack: Vec<Bag>, t: &mut ExecutionTrace) {
        t.out[v.id] = out.clone();
        t.stack[v.id] = stack.clone();
        if v.edges.is_empty() {
            t.leaves.push(v.id);
        }
        for e in &v.edges {
            let mut stack = stack.clone();
            let next = out.as_ref().and_then(|o| match &e.label {
                EdgeLabel::Horn(x, y) => bag_minus(o, x.literals()).map(|rest| bag_union(y.literals(), &rest)),
                EdgeLabel::Push(y1, x2, y2) => bag_minus(o, x2).map(|x1| {
                    stack.push(bag_union(&x1, y1.literals()));
                    bag_union(x2, y2.literals())
                }),
                EdgeLabel::Pop(v) => {
                    if o.as_slice() == v.literals() {
                        stack.pop()
                    } else {
                        None
                    }
                }
            });
            walk(&e.target, next, stack, t);
        }
    }
    walk(&p.root, Some(w.literals().to_vec()), Vec::new(), &mut t);
    t
}

/// `P(W) = Z`: every output vertex has an empty stack and value `Z`.
pub fn evaluate(p: &Program, w: &SimpleProduct, z: &SimpleProduct) -> bool {
    let t = run_strong(p, w);
    t.leaves
        .iter()
        .all(|&v| t.stack[v].is_empty() && t.out[v].as_deref() == Some(z.literals()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Delta(usize),
    Gamma(usize),
}

/// Which part of the drawn formula an edge uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Projection {
    Whole,
    /// The left or right Horn of a `&`-Horn.
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Use {
    pub source: Source,
    pub projection: Projection,
}

/// Formula used on each non-pop edge, keyed by the edge's target vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UsageAssignment {
    pub uses: std::collections::BTreeMap<usize, Use>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UsageError {
    #[error("no assignment of formulas to edges satisfies the usage conditions")]
    NoAssignment,
}

/// Targets of the pop partners of a push whose target is `v`.
pub fn pop_partners(v: &Vertex) -> Vec<&SimpleProduct> {
    fn walk<'a>(v: &'a Vertex, depth: usize, out: &mut Vec<&'a SimpleProduct>) {
        for e in &v.edges {
            match &e.label {
                EdgeLabel::Pop(x) if depth == 0 => out.push(x),
                EdgeLabel::Pop(_) => walk(&e.target, depth - 1, out),
                EdgeLabel::Push(..) => walk(&e.target, depth + 1, out),
                EdgeLabel::Horn(..) => walk(&e.target, depth, out),
            }
        }
    }
    let mut out = Vec::new();
    walk(v, 0, &mut out);
    out
}

struct Assigner<'a> {
    delta: &'a [NormalizedFormula],
    gamma: &'a [NormalizedFormula],
}

impl Assigner<'_> {
    fn candidates(&self, counts: &[usize]) -> Vec<(Source, &NormalizedFormula)> {
        let mut out: Vec<(Source, &NormalizedFormula)> = Vec::new();
        for (i, a) in self.delta.iter().enumerate() {
            if counts[i] == 0 {
                out.push((Source::Delta(i), a));
            }
        }
        out.extend(self.gamma.iter().enumerate().map(|(i, a)| (Source::Gamma(i), a)));
        out
    }

    fn covers(&self, label: &EdgeLabel, target: &Vertex, a: &NormalizedFormula) -> Vec<Projection> {
        use NormalizedFormula::*;
        match (label, a) {
            (EdgeLabel::Horn(x, y), Horn(ax, ay)) if x == ax && y == ay => vec![Projection::Whole],
            (EdgeLabel::Horn(x, y), WithHorn(x1, y1, x2, y2)) => {
                let mut v = Vec::new();
                if x == x1 && y == y1 {
                    v.push(Projection::Left);
                }
                if x == x2 && y == y2 {
                    v.push(Projection::Right);
                }
                v
            }
            (EdgeLabel::Push(y1, _, y2), Embedded(u, v, y)) if u == y2 && y == y1 => {
                let partners = pop_partners(target);
                if !partners.is_empty() && partners.iter().all(|p| *p == v) {
                    vec![Projection::Whole]
                } else {
                    vec![]
                }
            }
            _ => vec![],
        }
    }

    fn bump(counts: &[usize], s: Source) -> Vec<usize> {
        let mut c = counts.to_vec();
        if let Source::Delta(i) = s {
            c[i] += 1;
        }
        c
    }

    fn vertex(&self, v: &Vertex, counts: &[usize], acc: &mut UsageAssignment) -> bool {
        match v.edges.as_slice() {
            [] => counts.iter().all(|&c| c == 1),
            [e] => self.edge(e, counts, acc),
            [e1, e2] => {
                if let (EdgeLabel::Horn(x, y1), EdgeLabel::Horn(_, y2)) = (&e1.label, &e2.label) {
                    for (s, a) in self.candidates(counts) {
                        let NormalizedFormula::PlusHorn(ax, a1, a2) = a else { continue };
                        if ax != x || !((a1 == y1 && a2 == y2) || (a1 == y2 && a2 == y1)) {
                            continue;
                        }
                        let c = Assigner::bump(counts, s);
                        let mark = acc.clone();
                        let u = Use { source: s, projection: Projection::Whole };
                        acc.uses.insert(e1.target.id, u);
                        acc.uses.insert(e2.target.id, u);
                        if self.vertex(&e1.target, &c, acc) && self.vertex(&e2.target, &c, acc) {
                            return true;
                        }
                        *acc = mark;
                    }
                }
                let mark = acc.clone();
                if self.edge(e1, counts, acc) && self.edge(e2, counts, acc) {
                    return true;
                }
                *acc = mark;
                false
            }
            _ => false,
        }
    }

    fn edge(&self, e: &Edge, counts: &[usize], acc: &mut UsageAssignment) -> bool {
        if let EdgeLabel::Pop(_) = e.label {
            return self.vertex(&e.target, counts, acc);
        }
        for (s, a) in self.candidates(counts) {
            for projection in self.covers(&e.label, &e.target, a) {
                let mark = acc.clone();
                acc.uses.insert(e.target.id, Use { source: s, projection });
                if self.vertex(&e.target, &Assigner::bump(counts, s), acc) {
                    return true;
                }
                *acc = mark;
            }
        }
        false
    }
}

pub fn assign_usage(
    p: &Program,
    delta: &[NormalizedFormula],
    gamma: &[NormalizedFormula],
) -> Result<UsageAssignment, UsageError> {
    let a = Assigner { delta, gamma };
    let mut acc = UsageAssignment::default();
    if a.vertex(&p.root, &vec![0; delta.len()], &mut acc) {
        Ok(acc)
    } else {
        Err(UsageError::NoAssignment)
    }
}

pub fn check_strong_solution(p: &Program, s: &NormalizedSequent) -> bool {
    p.validate().is_ok() && evaluate(p, &s.w, &s.z) && assign_usage(p, &s.delta, &s.gamma).is_ok()
}

/// Limits for [`find_strong_solution`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumBounds {
    pub max_edges: usize,
    /// Pushes allowed on one root-to-leaf path.
    pub max_pushes: usize,
}

impl Default for EnumBounds {
    fn default() -> EnumBounds {
        EnumBounds { max_edges: 6, max_pushes: 1 }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Goal {
    Final(Bag),
    /// Pop `V`, then continue with a program of the given edge count.
    Pop(Bag, usize),
}

/// Searches block-structured programs by increasing edge count: every push
/// block uses a fixed part of Δ on all its paths and all its pops share one
/// continuation. Returns a smallest such strong solution within `bounds`.
pub fn find_strong_solution(s: &NormalizedSequent, bounds: EnumBounds) -> Option<Program> {
    let mut e = Enumerator { s, failed: HashSet::new() };
    let delta: Vec<usize> = (0..s.delta.len()).collect();
    for limit in 0..=bounds.max_edges {
        if let Some(v) = e.solve(s.w.literals(), &delta, &Goal::Final(s.z.literals().to_vec()), None, bounds.max_pushes, limit) {
            let p = Program::new(v).expect("enumerated programs are well-formed");
            debug_assert!(check_strong_solution(&p, s));
            return Some(p);
        }
    }
    None
}

type FailKey = (Bag, Vec<usize>, Goal, usize, usize);

struct Enumerator<'a> {
    s: &'a NormalizedSequent,
    failed: HashSet<FailKey>,
}

impl Enumerator<'_> {
    /// Candidate formulas: each distinct remaining Δ entry, then Γ.
    fn candidates(&self, delta: &[usize]) -> Vec<(Option<usize>, &NormalizedFormula)> {
        let mut out: Vec<(Option<usize>, &NormalizedFormula)> = Vec::new();
        let mut seen: Vec<&NormalizedFormula> = Vec::new();
        for &i in delta {
            let a = &self.s.delta[i];
            if !seen.contains(&a) {
                seen.push(a);
                out.push((Some(i), a));
            }
        }
        out.extend(self.s.gamma.iter().map(|a| (None, a)));
        out
    }

    /// A program from value `out` using exactly `delta` on every path,
    /// with at most `limit` edges, where `cont` is the continuation placed
    /// after each pop of a block goal.
    fn solve(
        &mut self,
        out: &[u32],
        delta: &[usize],
        goal: &Goal,
        cont: Option<&Vertex>,
        pushes: usize,
        limit: usize,
    ) -> Option<Vertex> {
        match goal {
            Goal::Final(z) if delta.is_empty() && out == z.as_slice() => return Some(Vertex::leaf()),
            Goal::Pop(v, c) if delta.is_empty() && out == v.as_slice() && *c < limit => {
                let v = SimpleProduct::new(v.clone()).expect("non-empty");
                return Some(Vertex::step(EdgeLabel::Pop(v), cont.expect("block goal").clone()));
            }
            _ => {}
        }
        if limit == 0 {
            return None;
        }
        let key = (out.to_vec(), delta.to_vec(), goal.clone(), pushes, limit);
        if self.failed.contains(&key) {
            return None;
        }
        let found = self.expand(out, delta, goal, cont, pushes, limit);
        if found.is_none() {
            self.failed.insert(key);
        }
        found
    }

    fn expand(
        &mut self,
        out: &[u32],
        delta: &[usize],
        goal: &Goal,
        cont: Option<&Vertex>,
        pushes: usize,
        limit: usize,
    ) -> Option<Vertex> {
        use NormalizedFormula::*;
        let candidates: Vec<(Option<usize>, NormalizedFormula)> =
            self.candidates(delta).into_iter().map(|(i, a)| (i, a.clone())).collect();
        let without = |i: Option<usize>| -> Vec<usize> {
            let mut d = delta.to_vec();
            if let Some(i) = i {
                let pos = d.iter().position(|&j| j == i).expect("present");
                d.remove(pos);
            }
            d
        };
        for (i, a) in &candidates {
            let horns: Vec<(&SimpleProduct, &SimpleProduct)> = match a {
                Horn(x, y) => vec![(x, y)],
                WithHorn(x1, y1, x2, y2) => vec![(x1, y1), (x2, y2)],
                _ => vec![],
            };
            for (x, y) in horns {
                let Some(rest) = bag_minus(out, x.literals()) else { continue };
                let next = bag_union(y.literals(), &rest);
                if let Some(t) = self.solve(&next, &without(*i), goal, cont, pushes, limit - 1) {
                    return Some(Vertex::step(EdgeLabel::Horn(x.clone(), y.clone()), t));
                }
            }
        }
        for (i, a) in &candidates {
            let PlusHorn(x, y1, y2) = a else { continue };
            if limit < 2 {
                continue;
            }
            let Some(rest) = bag_minus(out, x.literals()) else { continue };
            let d = without(*i);
            let (o1, o2) = (bag_union(y1.literals(), &rest), bag_union(y2.literals(), &rest));
            for c1 in 0..=limit - 2 {
                let Some(t1) = self.solve(&o1, &d, goal, cont, pushes, c1) else { continue };
                let used = c1.min(t1.edge_count());
                if let Some(t2) = self.solve(&o2, &d, goal, cont, pushes, limit - 2 - used) {
                    return Some(Vertex::fork(
                        EdgeLabel::Horn(x.clone(), y1.clone()),
                        t1,
                        EdgeLabel::Horn(x.clone(), y2.clone()),
                        t2,
                    ));
                }
                break;
            }
        }
        if pushes == 0 || limit < 2 {
            return None;
        }
        for (i, a) in &candidates {
            let Embedded(u, v, y) = a else { continue };
            let d = without(*i);
            for x2 in sub_bags(out) {
                let x1 = bag_minus(out, &x2).expect("sub-bag");
                let resume = bag_union(&x1, y.literals());
                let block_in = bag_union(&x2, u.literals());
                for db in sub_multisets(&d) {
                    let dc = bag_minus_idx(&d, &db);
                    for cc in 0..=limit - 2 {
                        let Some(c) = self.solve(&resume, &dc, goal, cont, pushes - 1, cc) else { continue };
                        let cost = c.edge_count();
                        if 2 + cost > limit {
                            break;
                        }
                        let g = Goal::Pop(v.literals().to_vec(), cost);
                        if let Some(block) = self.solve(&block_in, &db, &g, Some(&c), pushes - 1, limit - 1) {
                            let label = EdgeLabel::Push(y.clone(), x2.clone(), u.clone());
                            return Some(Vertex::step(label, block));
                        }
                        break;
                    }
                }
            }
        }
        None
    }
}

fn sub_multisets(d: &[usize]) -> Vec<Vec<usize>> {
    let mut sorted = d.to_vec();
    sorted.sort_unstable();
    sub_bags(&sorted.iter().map(|&i| i as u32).collect::<Vec<_>>())
        .into_iter()
        .map(|b| b.into_iter().map(|i| i as usize).collect())
        .collect()
}

fn bag_minus_idx(d: &[usize], part: &[usize]) -> Vec<usize> {
    let mut rest = d.to_vec();
    for x in part {
        let i = rest.iter().position(|y| y == x).expect("sub-multiset");
        rest.remove(i);
    }
    rest
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_sequent;

    fn prod(v: &[u32]) -> SimpleProduct {
        SimpleProduct::new(v.to_vec()).unwrap()
    }

    fn normal(s: &str) -> NormalizedSequent {
        NormalizedSequent::from_sequent(&parse_sequent(s).unwrap()).unwrap()
    }

    fn horn_example() -> Program {
        Program::new(Vertex::step(EdgeLabel::Horn(prod(&[1]), prod(&[3])), Vertex::leaf())).unwrap()
    }

    #[test]
    fn horn_step_keeps_frame() {
        let p = horn_example();
        let t = run_strong(&p, &prod(&[1, 2]));
        assert_eq!(t.out[1], Some(vec![2, 3]));
        assert!(evaluate(&p, &prod(&[1, 2]), &prod(&[2, 3])));
        assert!(!evaluate(&p, &prod(&[1, 2]), &prod(&[3])));
    }

    #[test]
    fn push_then_pop() {
        let p = Program::new(Vertex::step(
            EdgeLabel::Push(prod(&[4]), vec![2], prod(&[5])),
            Vertex::step(EdgeLabel::Pop(prod(&[2, 5])), Vertex::leaf()),
        ))
        .unwrap();
        let t = run_strong(&p, &prod(&[1, 2]));
        assert_eq!((t.out[1].clone(), t.stack[1].clone()), (Some(vec![2, 5]), vec![vec![1, 4]]));
        assert_eq!((t.out[2].clone(), t.stack[2].clone()), (Some(vec![1, 4]), vec![]));
    }

    #[test]
    fn pop_at_root_is_undefined() {
        let root = Vertex::step(EdgeLabel::Pop(prod(&[1])), Vertex::leaf());
        assert_eq!(Program::new(root.clone()), Err(ProgramError::UnmatchedPop(1)));
        let t = run_strong(&Program::unchecked(root), &prod(&[1]));
        assert_eq!(t.out[1], None);
    }

    #[test]
    fn usage_examples() {
        let p = horn_example();
        let h13 = NormalizedFormula::Horn(prod(&[1]), prod(&[3]));
        let a = assign_usage(&p, std::slice::from_ref(&h13), &[]).unwrap();
        assert_eq!(a.uses[&1].source, Source::Delta(0));
        let h22 = NormalizedFormula::Horn(prod(&[2]), prod(&[2]));
        assert!(assign_usage(&p, &[h13.clone(), h22], &[]).is_err());
        let fork = Program::new(Vertex::fork(
            EdgeLabel::Horn(prod(&[1]), prod(&[2])),
            Vertex::leaf(),
            EdgeLabel::Horn(prod(&[1]), prod(&[3])),
            Vertex::leaf(),
        ))
        .unwrap();
        let plus = NormalizedFormula::PlusHorn(prod(&[1]), prod(&[2]), prod(&[3]));
        let a = assign_usage(&fork, &[plus], &[]).unwrap();
        assert_eq!(a.uses[&1], a.uses[&2]);
    }

    #[test]
    fn strong_solution_examples() {
        assert!(check_strong_solution(&Program::trivial(), &normal("p1 |- p1")));
        let s = normal("(p1 * p2), (p1 -o p3) |- (p2 * p3)");
        assert!(check_strong_solution(&horn_example(), &s));
        assert!(!check_strong_solution(&horn_example(), &normal("(p1 * p2) |- (p2 * p3)")));
    }

    #[test]
    fn sexp_round_trip() {
        let p = Program::new(Vertex::step(
            EdgeLabel::Push(prod(&[4]), vec![], prod(&[5])),
            Vertex::step(EdgeLabel::Pop(prod(&[5])), Vertex::leaf()),
        ))
        .unwrap();
        let text = p.to_sexp();
        assert!(text.contains("(push (p4) () (p5))"));
        assert_eq!(Program::from_sexp(&text).unwrap(), p);
    }

    #[test]
    fn enumerator_finds_small_programs() {
        let s = normal("p1, ((p2 -o p3) -o p4), !((p1 * p2) -o p3) |- p4");
        let p = find_strong_solution(&s, EnumBounds::default()).unwrap();
        assert!(check_strong_solution(&p, &s));
        assert_eq!(p.push_count(), 1);
        let fork = normal("p1, (p1 -o (p2 + p3)), (p2 -o p3) |- p3");
        assert!(find_strong_solution(&fork, EnumBounds::default()).is_none());
        let fork = normal("p1, (p1 -o (p2 + p3)), !(p2 -o p3) |- p3");
        let p = find_strong_solution(&fork, EnumBounds::default()).unwrap();
        assert_eq!(p.edge_count(), 3);
    }
}
