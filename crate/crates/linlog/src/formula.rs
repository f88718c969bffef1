//! Formulas and sequents of propositional linear logic.

use std::fmt;
use std::sync::Arc;

/// A formula over positive literals `p1, p2, ...`, the constants ⊥ and 1,
/// the binary connectives ⊗ ⅋ ⊸ & ⊕ and the exponential `!`.
///
/// Children are reference counted so that the large encodings can share
/// their repeated sub-formulas.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Literal(u32),
    Bottom,
    One,
    Tensor(Arc<Formula>, Arc<Formula>),
    Par(Arc<Formula>, Arc<Formula>),
    /// `Lollipop(a, b)` is `a ⊸ b`.
    Lollipop(Arc<Formula>, Arc<Formula>),
    With(Arc<Formula>, Arc<Formula>),
    Plus(Arc<Formula>, Arc<Formula>),
    Bang(Arc<Formula>),
}

pub fn lit(index: u32) -> Formula {
    assert!(index >= 1, "literal indices start at 1");
    Formula::Literal(index)
}

pub fn tensor(a: Formula, b: Formula) -> Formula {
    Formula::Tensor(Arc::new(a), Arc::new(b))
}

pub fn par(a: Formula, b: Formula) -> Formula {
    Formula::Par(Arc::new(a), Arc::new(b))
}

pub fn lolli(a: Formula, b: Formula) -> Formula {
    Formula::Lollipop(Arc::new(a), Arc::new(b))
}

pub fn with(a: Formula, b: Formula) -> Formula {
    Formula::With(Arc::new(a), Arc::new(b))
}

pub fn plus(a: Formula, b: Formula) -> Formula {
    Formula::Plus(Arc::new(a), Arc::new(b))
}

pub fn bang(a: Formula) -> Formula {
    Formula::Bang(Arc::new(a))
}

/// `A^n`: right-nested ⊗-chain of `n` copies, `A^0 = 1`.
pub fn power_tensor(a: &Formula, n: usize) -> Formula {
    chain(a, n, Formula::One, Formula::Tensor)
}

/// `A^[n]`: right-nested ⅋-chain of `n` copies, `A^[0] = ⊥`.
pub fn power_par(a: &Formula, n: usize) -> Formula {
    chain(a, n, Formula::Bottom, Formula::Par)
}

fn chain(
    a: &Formula,
    n: usize,
    unit: Formula,
    node: fn(Arc<Formula>, Arc<Formula>) -> Formula,
) -> Formula {
    if n == 0 {
        return unit;
    }
    let shared = Arc::new(a.clone());
    let mut acc = a.clone();
    for _ in 1..n {
        acc = node(shared.clone(), Arc::new(acc));
    }
    acc
}

/// `A^<n> ⊸ B`: `B` for `n = 0`, otherwise `A ⊸ (A^<n-1> ⊸ B)`.
pub fn nested_impl(a: &Formula, n: usize, b: &Formula) -> Formula {
    let shared = Arc::new(a.clone());
    let mut acc = b.clone();
    for _ in 0..n {
        acc = Formula::Lollipop(shared.clone(), Arc::new(acc));
    }
    acc
}

impl Formula {
    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Literal(_))
    }

    pub fn is_bang(&self) -> bool {
        matches!(self, Formula::Bang(_))
    }

    /// Number of connective and atom nodes, counting shared children once per use.
    pub fn size(&self) -> usize {
        match self {
            Formula::Literal(_) | Formula::Bottom | Formula::One => 1,
            Formula::Bang(a) => 1 + a.size(),
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::Lollipop(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Number of binary connectives and bangs.
    pub fn connectives(&self) -> usize {
        match self {
            Formula::Literal(_) | Formula::Bottom | Formula::One => 0,
            Formula::Bang(a) => 1 + a.connectives(),
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::Lollipop(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b) => 1 + a.connectives() + b.connectives(),
        }
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Literal(_) | Formula::Bottom | Formula::One => vec![],
            Formula::Bang(a) => vec![a],
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::Lollipop(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b) => vec![a, b],
        }
    }

    /// Visits every node; shared children are visited on each use.
    pub fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Sorted, deduplicated literal indices.
    pub fn literals(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_literals(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_literals(&self, out: &mut Vec<u32>) {
        match self {
            Formula::Literal(i) => out.push(*i),
            Formula::Bottom | Formula::One => {}
            Formula::Bang(a) => a.collect_literals(out),
            Formula::Tensor(a, b)
            | Formula::Par(a, b)
            | Formula::Lollipop(a, b)
            | Formula::With(a, b)
            | Formula::Plus(a, b) => {
                a.collect_literals(out);
                b.collect_literals(out);
            }
        }
    }

    pub fn contains(&self, pred: &impl Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.contains(pred))
    }

    /// Replaces every occurrence of literal `index` by `by`.
    pub fn substitute(&self, index: u32, by: &Formula) -> Formula {
        let bin = |a: &Arc<Formula>, b: &Arc<Formula>| {
            (Arc::new(a.substitute(index, by)), Arc::new(b.substitute(index, by)))
        };
        match self {
            Formula::Literal(i) if *i == index => by.clone(),
            Formula::Literal(_) | Formula::Bottom | Formula::One => self.clone(),
            Formula::Bang(a) => Formula::Bang(Arc::new(a.substitute(index, by))),
            Formula::Tensor(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Tensor(a, b)
            }
            Formula::Par(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Par(a, b)
            }
            Formula::Lollipop(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Lollipop(a, b)
            }
            Formula::With(a, b) => {
                let (a, b) = bin(a, b);
                Formula::With(a, b)
            }
            Formula::Plus(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Plus(a, b)
            }
        }
    }

    /// Leaves of the maximal ⊗-tree rooted here, left to right.
    pub fn tensor_leaves(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Tensor(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                other => out.push(other),
            }
        }
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bin = |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula| {
            write!(f, "({a} {op} {b})")
        };
        match self {
            Formula::Literal(i) => write!(f, "p{i}"),
            Formula::Bottom => f.write_str("bot"),
            Formula::One => f.write_str("1"),
            Formula::Tensor(a, b) => bin(f, a, "*", b),
            Formula::Par(a, b) => bin(f, a, "@", b),
            Formula::Lollipop(a, b) => bin(f, a, "-o", b),
            Formula::With(a, b) => bin(f, a, "&", b),
            Formula::Plus(a, b) => bin(f, a, "+", b),
            Formula::Bang(a) => write!(f, "!{a}"),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Two-sided sequent `lhs ⊢ rhs`; both sides are multisets kept in
/// presentation order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Sequent {
    pub lhs: Vec<Formula>,
    pub rhs: Vec<Formula>,
}

impl Sequent {
    pub fn new(lhs: Vec<Formula>, rhs: Vec<Formula>) -> Sequent {
        Sequent { lhs, rhs }
    }

    /// Multiset equality of both sides.
    pub fn same_multisets(&self, other: &Sequent) -> bool {
        same_multiset(&self.lhs, &other.lhs) && same_multiset(&self.rhs, &other.rhs)
    }

    /// Both sides sorted; equal for sequents that agree as multisets.
    pub fn canonical(&self) -> Sequent {
        let mut lhs = self.lhs.clone();
        let mut rhs = self.rhs.clone();
        lhs.sort();
        rhs.sort();
        Sequent { lhs, rhs }
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.lhs.iter().chain(self.rhs.iter())
    }

    pub fn literals(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.formulas().flat_map(|f| f.literals()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn connectives(&self) -> usize {
        self.formulas().map(Formula::connectives).sum()
    }
}

pub fn same_multiset(a: &[Formula], b: &[Formula]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut x: Vec<&Formula> = a.iter().collect();
    let mut y: Vec<&Formula> = b.iter().collect();
    x.sort();
    y.sort();
    x == y
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Formula]| {
            xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        };
        match (self.lhs.is_empty(), self.rhs.is_empty()) {
            (true, true) => f.write_str("|-"),
            (true, false) => write!(f, "|- {}", join(&self.rhs)),
            (false, true) => write!(f, "{} |-", join(&self.lhs)),
            (false, false) => write!(f, "{} |- {}", join(&self.lhs), join(&self.rhs)),
        }
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_are_right_nested() {
        assert_eq!(
            power_tensor(&Formula::Bottom, 3),
            tensor(Formula::Bottom, tensor(Formula::Bottom, Formula::Bottom))
        );
        assert_eq!(power_tensor(&lit(1), 0), Formula::One);
        assert_eq!(power_par(&Formula::One, 0), Formula::Bottom);
        assert_eq!(power_par(&Formula::One, 2), par(Formula::One, Formula::One));
    }

    #[test]
    fn nested_impl_unfolds() {
        assert_eq!(nested_impl(&lit(1), 2, &lit(2)), lolli(lit(1), lolli(lit(1), lit(2))));
        assert_eq!(nested_impl(&lit(1), 0, &lit(2)), lit(2));
    }

    #[test]
    fn display_follows_grammar() {
        let f = bang(lolli(lit(1), tensor(lit(1), lit(1))));
        assert_eq!(f.to_string(), "!(p1 -o (p1 * p1))");
        let s = Sequent::new(vec![Formula::Bottom], vec![]);
        assert_eq!(s.to_string(), "bot |-");
        let s = Sequent::new(vec![], vec![Formula::One]);
        assert_eq!(s.to_string(), "|- 1");
    }

    #[test]
    fn tensor_leaves_flatten() {
        let f = tensor(tensor(lit(1), lit(2)), tensor(lit(3), lolli(lit(1), lit(1))));
        let leaves: Vec<String> = f.tensor_leaves().iter().map(|x| x.to_string()).collect();
        assert_eq!(leaves, ["p1", "p2", "p3", "(p1 -o p1)"]);
    }
}
