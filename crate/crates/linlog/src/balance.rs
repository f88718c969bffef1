//! Signed ⊥-counting and the congruence it induces on derivable sequents.

use crate::encode::{BasicFormulaTable, Encoder, EncodingParams, Target};
use crate::formula::{Formula, Sequent};
use crate::normalized::NormalizedFormula;
use crate::product::SimpleProduct;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BalanceError {
    #[error("the ⊥-count is not defined for !-formulas")]
    BangUnsupported,
}

/// An exact count, optionally reduced modulo `9N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BotCount {
    pub value: i64,
    pub modulus: Option<i64>,
}

impl BotCount {
    pub fn exact(value: i64) -> BotCount {
        BotCount { value, modulus: None }
    }

    /// Canonical residue in `[0, 9N)`.
    pub fn reduce(self, n: u32) -> BotCount {
        let m = 9 * n as i64;
        BotCount { value: self.value.rem_euclid(m), modulus: Some(m) }
    }
}

impl fmt::Display for BotCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            Some(m) => write!(f, "{} (mod {m})", self.value),
            None => write!(f, "{}", self.value),
        }
    }
}

pub fn bot_count(a: &Formula) -> Result<i64, BalanceError> {
    use Formula as F;
    Ok(match a {
        F::Literal(_) | F::One => 0,
        F::Bottom => 1,
        F::Tensor(x, y) => bot_count(x)? + bot_count(y)?,
        F::Par(x, y) => bot_count(x)? + bot_count(y)? - 1,
        F::Lollipop(x, y) => bot_count(y)? - bot_count(x)?,
        F::With(x, y) => bot_count(x)?.min(bot_count(y)?),
        F::Plus(x, y) => bot_count(x)?.max(bot_count(y)?),
        F::Bang(_) => return Err(BalanceError::BangUnsupported),
    })
}

/// Residue of `a` modulo `m` when `a` lies in the class on which the
/// congruence is invariant under every rule: additive branches agree
/// modulo `m`, and a `!`-body counts `0` modulo `m` and contributes `0`.
pub fn balanced_residue(a: &Formula, m: i64) -> Option<i64> {
    use Formula as F;
    let r = match a {
        F::Literal(_) | F::One => 0,
        F::Bottom => 1,
        F::Tensor(x, y) => balanced_residue(x, m)? + balanced_residue(y, m)?,
        F::Par(x, y) => balanced_residue(x, m)? + balanced_residue(y, m)? - 1,
        F::Lollipop(x, y) => balanced_residue(y, m)? - balanced_residue(x, m)?,
        F::With(x, y) | F::Plus(x, y) => {
            let (rx, ry) = (balanced_residue(x, m)?, balanced_residue(y, m)?);
            if rx != ry {
                return None;
            }
            rx
        }
        F::Bang(x) => {
            if balanced_residue(x, m)? != 0 {
                return None;
            }
            0
        }
    };
    Some(r.rem_euclid(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BalanceVerdict {
    Holds,
    Violated,
    NotApplicable,
}

impl fmt::Display for BalanceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BalanceVerdict::Holds => "holds",
            BalanceVerdict::Violated => "violated",
            BalanceVerdict::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub modulus: i64,
    /// Residues per formula; `None` where the formula is outside the class.
    pub lhs: Vec<Option<i64>>,
    pub rhs: Vec<Option<i64>>,
    pub verdict: BalanceVerdict,
}

impl BalanceReport {
    pub fn lhs_sum(&self) -> Option<i64> {
        self.lhs.iter().copied().sum::<Option<i64>>().map(|s| s.rem_euclid(self.modulus))
    }

    /// `1 − m + Σ rhs`.
    pub fn rhs_target(&self) -> Option<i64> {
        let s = self.rhs.iter().copied().sum::<Option<i64>>()?;
        Some((1 - self.rhs.len() as i64 + s).rem_euclid(self.modulus))
    }
}

pub fn balance_report(s: &Sequent, n: u32) -> BalanceReport {
    let modulus = 9 * n as i64;
    let lhs: Vec<_> = s.lhs.iter().map(|f| balanced_residue(f, modulus)).collect();
    let rhs: Vec<_> = s.rhs.iter().map(|f| balanced_residue(f, modulus)).collect();
    let mut r = BalanceReport { modulus, lhs, rhs, verdict: BalanceVerdict::NotApplicable };
    if let (Some(l), Some(t)) = (r.lhs_sum(), r.rhs_target()) {
        r.verdict = if l == t { BalanceVerdict::Holds } else { BalanceVerdict::Violated };
    }
    r
}

/// `Σ #⊥(lhs) ≡ 1 − m + Σ #⊥(rhs) (mod 9N)` for sequents whose formulas
/// all lie in the balanced class; `NotApplicable` otherwise.
pub fn balance_check(s: &Sequent, n: u32) -> BalanceVerdict {
    balance_report(s, n).verdict
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub name: String,
    pub actual: i64,
    pub expected: i64,
    /// Exact equality when `None`, otherwise congruence modulo the value.
    pub modulus: Option<i64>,
}

impl Identity {
    pub fn holds(&self) -> bool {
        match self.modulus {
            None => self.actual == self.expected,
            Some(m) => (self.actual - self.expected).rem_euclid(m) == 0,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds() { "ok" } else { "MISMATCH" };
        match self.modulus {
            None => write!(f, "{}: {} = {} {verdict}", self.name, self.actual, self.expected),
            Some(m) => write!(f, "{}: {} ≡ {} (mod {m}) {verdict}", self.name, self.actual, self.expected),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcostReport {
    pub n: u32,
    pub identities: Vec<Identity>,
}

impl LcostReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(Identity::holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Identity> {
        self.identities.iter().filter(|i| !i.holds())
    }
}

/// The identities satisfied by the ⊥-only building blocks for a given
/// modulus parameter: exact values of the basic formulas and congruences of
/// encoded products and formulas over a fixed sample.
pub fn lcost_verify(n: u32) -> LcostReport {
    let params = EncodingParams { n, p: 1, target: Target::BotOnly };
    let enc = Encoder::new(params).expect("N ≥ 9");
    let BasicFormulaTable::BotOnly { h00, c00, h1 } = &enc.table else { unreachable!() };
    let m = 9 * n as i64;
    let nn = n as i64;
    let count = |f: &Formula| bot_count(f).expect("no ! in encodings");
    let exact = |name: &str, f: &Formula, expected: i64| Identity {
        name: name.to_string(),
        actual: count(f),
        expected,
        modulus: None,
    };
    let congr = |name: String, f: &Formula, expected: i64| Identity { name, actual: count(f), expected, modulus: Some(m) };
    let mut ids = vec![
        exact("#H00 = -N", h00, -nn),
        exact("#C00 = -2N", c00, -2 * nn),
        exact("#H1 = 9N", h1, 9 * nn),
    ];
    let top = n - 7;
    for q in 1..=top {
        ids.push(exact(&format!("#D_p{q} = 9N"), &enc.atom(q), 9 * nn));
    }
    let samples: Vec<Vec<u32>> = vec![vec![1], vec![top], vec![1, top], vec![1, 1, 2], vec![2, 2, 2, 2]];
    for x in &samples {
        let label = crate::product::bag_to_string(x);
        ids.push(congr(format!("#D_{label} ≡ 0"), &enc.product(x), 0));
        ids.push(congr(format!("#E_{label} ≡ 6N"), &enc.e(x), 6 * nn));
        ids.push(congr(format!("#F_{label} ≡ 0"), &enc.cont(x), 0));
    }
    let prod = |v: &[u32]| SimpleProduct::new(v.to_vec()).expect("non-empty");
    let forms = [
        NormalizedFormula::Horn(prod(&[2]), prod(&[2, 2])),
        NormalizedFormula::PlusHorn(prod(&[2]), prod(&[2]), prod(&[2, 2])),
        NormalizedFormula::WithHorn(prod(&[2]), prod(&[2]), prod(&[2, 2]), prod(&[2])),
        NormalizedFormula::Embedded(prod(&[2]), prod(&[2, 2]), prod(&[2])),
    ];
    for a in &forms {
        ids.push(congr(format!("#F[{a}] ≡ 0"), &enc.formula(a), 0));
    }
    LcostReport { n, identities: ids }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{lolli, par, tensor};
    use crate::parse::parse_sequent;

    #[test]
    fn counting_clauses() {
        assert_eq!(bot_count(&Formula::Bottom), Ok(1));
        assert_eq!(bot_count(&lolli(Formula::Bottom, Formula::Bottom)), Ok(0));
        assert_eq!(bot_count(&par(Formula::Bottom, Formula::Bottom)), Ok(1));
        assert_eq!(bot_count(&tensor(Formula::One, Formula::Bottom)), Ok(1));
        assert_eq!(bot_count(&crate::formula::bang(Formula::Bottom)), Err(BalanceError::BangUnsupported));
    }

    #[test]
    fn verdicts() {
        assert_eq!(balance_check(&parse_sequent("bot |-").unwrap(), 9), BalanceVerdict::Holds);
        assert_eq!(balance_check(&parse_sequent("(bot * bot) |-").unwrap(), 9), BalanceVerdict::Violated);
        assert_eq!(
            balance_check(&parse_sequent("(bot & (bot * bot)) |-").unwrap(), 9),
            BalanceVerdict::NotApplicable
        );
        assert_eq!(balance_check(&parse_sequent("!bot |-").unwrap(), 9), BalanceVerdict::NotApplicable);
    }

    #[test]
    fn lcost_at_nine_and_twelve() {
        let r = lcost_verify(9);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.identities[0].actual, -9);
        assert_eq!(r.identities[1].actual, -18);
        assert_eq!(r.identities[2].actual, 81);
        assert_eq!(lcost_verify(12).identities[2].actual, 108);
    }

    #[test]
    fn reduction_is_canonical() {
        assert_eq!(BotCount::exact(-18).reduce(9), BotCount { value: 63, modulus: Some(81) });
    }
}
