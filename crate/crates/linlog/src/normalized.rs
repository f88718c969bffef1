//! Normalized formulas and normalized sequents `W, Δ, !Γ ⊢ Z`.

use crate::formula::{bang, lolli, plus, with, Formula, Sequent};
use crate::product::{ProductError, SimpleProduct};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalError {
    #[error("`{0}` is not a normalized formula")]
    NotNormalized(String),
    #[error("right-hand side must be a single simple product")]
    BadGoal,
    #[error("left-hand side has no simple product")]
    NoInput,
    #[error(transparent)]
    Product(#[from] ProductError),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormalizedFormula {
    /// `X ⊸ Y`
    Horn(SimpleProduct, SimpleProduct),
    /// `X ⊸ (Y1 ⊕ Y2)`
    PlusHorn(SimpleProduct, SimpleProduct, SimpleProduct),
    /// `(X1 ⊸ Y1) & (X2 ⊸ Y2)`
    WithHorn(SimpleProduct, SimpleProduct, SimpleProduct, SimpleProduct),
    /// `(U ⊸ V) ⊸ Y`
    Embedded(SimpleProduct, SimpleProduct, SimpleProduct),
}

use NormalizedFormula::*;

fn product(f: &Formula) -> Option<SimpleProduct> {
    SimpleProduct::from_formula(f).ok()
}

/// Matches `f` against the four normalized shapes.
pub fn classify_normalized(f: &Formula) -> Result<NormalizedFormula, NormalError> {
    let fail = || NormalError::NotNormalized(f.to_string());
    match f {
        Formula::Lollipop(a, b) => {
            if let Formula::Lollipop(u, v) = a.as_ref() {
                let (u, v, y) = (product(u), product(v), product(b));
                return match (u, v, y) {
                    (Some(u), Some(v), Some(y)) => Ok(Embedded(u, v, y)),
                    _ => Err(fail()),
                };
            }
            let x = product(a).ok_or_else(fail)?;
            if let Formula::Plus(y1, y2) = b.as_ref() {
                let (y1, y2) = (product(y1).ok_or_else(fail)?, product(y2).ok_or_else(fail)?);
                return Ok(PlusHorn(x, y1, y2));
            }
            Ok(Horn(x, product(b).ok_or_else(fail)?))
        }
        Formula::With(a, b) => match (classify_normalized(a), classify_normalized(b)) {
            (Ok(Horn(x1, y1)), Ok(Horn(x2, y2))) => Ok(WithHorn(x1, y1, x2, y2)),
            _ => Err(fail()),
        },
        _ => Err(fail()),
    }
}

impl NormalizedFormula {
    pub fn to_formula(&self) -> Formula {
        let p = SimpleProduct::to_formula;
        match self {
            Horn(x, y) => lolli(p(x), p(y)),
            PlusHorn(x, y1, y2) => lolli(p(x), plus(p(y1), p(y2))),
            WithHorn(x1, y1, x2, y2) => with(lolli(p(x1), p(y1)), lolli(p(x2), p(y2))),
            Embedded(u, v, y) => lolli(lolli(p(u), p(v)), p(y)),
        }
    }

    pub fn products(&self) -> Vec<&SimpleProduct> {
        match self {
            Horn(x, y) => vec![x, y],
            PlusHorn(x, y1, y2) => vec![x, y1, y2],
            WithHorn(x1, y1, x2, y2) => vec![x1, y1, x2, y2],
            Embedded(u, v, y) => vec![u, v, y],
        }
    }

    pub fn max_literal(&self) -> u32 {
        self.products().iter().map(|p| p.max_literal()).max().unwrap_or(0)
    }
}

impl fmt::Display for NormalizedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_formula(), f)
    }
}

impl fmt::Debug for NormalizedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `W, Δ, !Γ ⊢ Z`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NormalizedSequent {
    pub w: SimpleProduct,
    pub delta: Vec<NormalizedFormula>,
    pub gamma: Vec<NormalizedFormula>,
    pub z: SimpleProduct,
}

impl NormalizedSequent {
    pub fn new(
        w: SimpleProduct,
        delta: Vec<NormalizedFormula>,
        gamma: Vec<NormalizedFormula>,
        z: SimpleProduct,
    ) -> NormalizedSequent {
        NormalizedSequent { w, delta, gamma, z }
    }

    /// Reads a sequent of normalized shape. Several product formulas on the
    /// left are joined into one input `W`.
    pub fn from_sequent(s: &Sequent) -> Result<NormalizedSequent, NormalError> {
        let [goal] = s.rhs.as_slice() else {
            return Err(NormalError::BadGoal);
        };
        let z = SimpleProduct::from_formula(goal).map_err(|_| NormalError::BadGoal)?;
        let mut inputs = Vec::new();
        let mut delta = Vec::new();
        let mut gamma = Vec::new();
        for f in &s.lhs {
            if let Ok(p) = SimpleProduct::from_formula(f) {
                inputs.extend_from_slice(p.literals());
            } else if let Formula::Bang(a) = f {
                gamma.push(classify_normalized(a)?);
            } else {
                delta.push(classify_normalized(f)?);
            }
        }
        if inputs.is_empty() {
            return Err(NormalError::NoInput);
        }
        Ok(NormalizedSequent { w: SimpleProduct::new(inputs)?, delta, gamma, z })
    }

    pub fn to_sequent(&self) -> Sequent {
        let mut lhs = vec![self.w.to_formula()];
        lhs.extend(self.delta.iter().map(NormalizedFormula::to_formula));
        lhs.extend(self.gamma.iter().map(|g| bang(g.to_formula())));
        Sequent::new(lhs, vec![self.z.to_formula()])
    }

    pub fn max_literal(&self) -> u32 {
        self.delta
            .iter()
            .chain(&self.gamma)
            .map(NormalizedFormula::max_literal)
            .chain([self.w.max_literal(), self.z.max_literal()])
            .max()
            .unwrap_or(0)
    }

    pub fn literals(&self) -> Vec<u32> {
        self.to_sequent().literals()
    }
}

impl fmt::Display for NormalizedSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_sequent(), f)
    }
}

impl fmt::Debug for NormalizedSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_formula, parse_sequent};

    fn classify(s: &str) -> Result<NormalizedFormula, NormalError> {
        classify_normalized(&parse_formula(s).unwrap())
    }

    #[test]
    fn four_shapes() {
        assert!(matches!(classify("((p1 * p2) -o p3)"), Ok(Horn(..))));
        assert!(matches!(classify("(p1 -o (p2 + p3))"), Ok(PlusHorn(..))));
        assert!(matches!(classify("((p1 -o p2) & (p2 -o p3))"), Ok(WithHorn(..))));
        assert!(matches!(classify("((p1 -o p2) -o p3)"), Ok(Embedded(..))));
    }

    #[test]
    fn rejects_other_shapes() {
        assert!(classify("(p1 -o (p2 -o p3))").is_err());
        assert!(classify("(p1 @ p2)").is_err());
        assert!(classify("!(p1 -o p2)").is_err());
        assert!(classify("(bot -o p1)").is_err());
        assert!(classify("((p1 -o (p2 + p3)) & (p1 -o p2))").is_err());
    }

    #[test]
    fn round_trips_through_formula() {
        for s in ["((p1 * p2) -o p3)", "(p1 -o (p2 + p3))", "((p1 -o p2) & (p2 -o p3))", "((p1 -o p2) -o p3)"] {
            let n = classify(s).unwrap();
            assert_eq!(classify_normalized(&n.to_formula()).unwrap(), n);
        }
    }

    #[test]
    fn sequent_shape() {
        let s = parse_sequent("(p1 * p2), (p1 -o p3), !(p2 -o p2) |- (p2 * p3)").unwrap();
        let n = NormalizedSequent::from_sequent(&s).unwrap();
        assert_eq!(n.w.literals(), &[1, 2]);
        assert_eq!((n.delta.len(), n.gamma.len()), (1, 1));
        assert!(n.to_sequent().same_multisets(&s));
        let split = parse_sequent("p2, p1, (p1 -o p3) |- (p3 * p2)").unwrap();
        assert_eq!(NormalizedSequent::from_sequent(&split).unwrap().w.literals(), &[1, 2]);
        assert!(NormalizedSequent::from_sequent(&parse_sequent("p1 |- p1, p1").unwrap()).is_err());
        assert!(NormalizedSequent::from_sequent(&parse_sequent("(p1 -o p1) |- p1").unwrap()).is_err());
    }
}
