//! Encodings of normalized sequents into the one-literal, ⊥-only and
//! unit-only fragments.

use crate::formula::{lit, lolli, nested_impl, plus, power_par, power_tensor, tensor, with, bang, Formula, Sequent};
use crate::normalized::{NormalizedFormula, NormalizedSequent};
use crate::product::SimpleProduct;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    OneLiteral,
    BotOnly,
    UnitOnly,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::OneLiteral, Target::BotOnly, Target::UnitOnly];

    pub fn name(self) -> &'static str {
        match self {
            Target::OneLiteral => "one-literal",
            Target::BotOnly => "bot-only",
            Target::UnitOnly => "unit-only",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> Result<Target, String> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown target `{s}` (one-literal, bot-only, unit-only)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("N = {0} is below the minimum 9")]
    SmallN(u32),
    #[error("literal p{index} is outside p1..p{max} for N = {n}")]
    LiteralOutOfRange { index: u32, max: u32, n: u32 },
    #[error("leading literal p{0} occurs in the sequent")]
    LeadingOccurs(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EncodingParams {
    pub n: u32,
    pub p: u32,
    pub target: Target,
}

impl EncodingParams {
    pub fn new(n: u32, p: u32, target: Target) -> Result<EncodingParams, EncodingError> {
        let params = EncodingParams { n, p, target };
        params.check_range(p)?;
        Ok(params)
    }

    fn check_range(&self, index: u32) -> Result<(), EncodingError> {
        if self.n < 9 {
            return Err(EncodingError::SmallN(self.n));
        }
        let max = self.n - 7;
        if index == 0 || index > max {
            return Err(EncodingError::LiteralOutOfRange { index, max, n: self.n });
        }
        Ok(())
    }

    /// Smallest admissible N and the first fresh leading literal for `s`.
    pub fn defaults_for(s: &NormalizedSequent, target: Target) -> EncodingParams {
        let n = 9.max(s.max_literal() + 8);
        EncodingParams { n, p: fresh_p(s, n), target }
    }

    /// Fills in whichever of `n`, `p` is missing and validates against `s`.
    pub fn resolve(
        s: &NormalizedSequent,
        target: Target,
        n: Option<u32>,
        p: Option<u32>,
    ) -> Result<EncodingParams, EncodingError> {
        let n = n.unwrap_or_else(|| EncodingParams::defaults_for(s, target).n);
        let params = EncodingParams { n, p: p.unwrap_or_else(|| fresh_p(s, n)), target };
        params.validate_for(s)?;
        Ok(params)
    }

    pub fn validate_for(&self, s: &NormalizedSequent) -> Result<(), EncodingError> {
        self.check_range(self.p)?;
        for m in s.literals() {
            self.check_range(m)?;
            if m == self.p {
                return Err(EncodingError::LeadingOccurs(self.p));
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> i64 {
        9 * self.n as i64
    }
}

/// `max + 1` when that fits below `N − 7`, else the lowest unused index.
fn fresh_p(s: &NormalizedSequent, n: u32) -> u32 {
    let top = s.max_literal();
    let limit = n.saturating_sub(7);
    if top < limit {
        return top + 1;
    }
    let used: BTreeSet<u32> = s.literals().into_iter().collect();
    (1..=limit).find(|i| !used.contains(i)).unwrap_or(top + 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasicFormulaTable {
    BotOnly { h00: Formula, c00: Formula, h1: Formula },
    OneLiteral { h0: Formula, c0: Formula, h1: Formula },
    UnitOnly { h01: Formula, c01: Formula },
}

/// `p^<n>` used as a formula: `(p^<n> ⊸ p) ⊸ p`.
fn p_power(p: &Formula, n: usize) -> Formula {
    lolli(nested_impl(p, n, p), p.clone())
}

fn one_par(n: usize) -> Formula {
    power_par(&Formula::One, n)
}

fn bot_pow(n: usize) -> Formula {
    power_tensor(&Formula::Bottom, n)
}

pub fn basic_formulas(params: &EncodingParams) -> Result<BasicFormulaTable, EncodingError> {
    params.check_range(params.p)?;
    let n = params.n as usize;
    Ok(match params.target {
        Target::BotOnly => {
            let h00 = lolli(bot_pow(n + 2), bot_pow(2));
            let c00 = lolli(lolli(power_tensor(&h00, 2), bot_pow(3)), bot_pow(3));
            let h1 = lolli(power_tensor(&c00, 4), bot_pow(n));
            BasicFormulaTable::BotOnly { h00, c00, h1 }
        }
        Target::OneLiteral => {
            let p = lit(params.p);
            let h0 = nested_impl(&p, n + 2, &p_power(&p, 2));
            let c0 = lolli(nested_impl(&h0, 2, &p_power(&p, 3)), p_power(&p, 3));
            let h1 = nested_impl(&c0, 4, &p_power(&p, n));
            BasicFormulaTable::OneLiteral { h0, c0, h1 }
        }
        Target::UnitOnly => {
            let h01 = lolli(one_par(2), one_par(n + 2));
            let c01 = lolli(one_par(3), tensor(one_par(3), tensor(h01.clone(), h01.clone())));
            BasicFormulaTable::UnitOnly { h01, c01 }
        }
    })
}

/// Builds the encoding of products, formulas and sequents for one choice
/// of parameters. Literal lists handed to [`Encoder::e`] are used in the
/// given order; [`Encoder::ep`] puts `p` first and the product sorted.
#[derive(Debug, Clone)]
pub struct Encoder {
    pub params: EncodingParams,
    pub table: BasicFormulaTable,
    /// `C00`, `C̃0(p)` or `C01`.
    pub c: Formula,
    c6: Formula,
}

impl Encoder {
    pub fn new(params: EncodingParams) -> Result<Encoder, EncodingError> {
        let table = basic_formulas(&params)?;
        let c = match &table {
            BasicFormulaTable::BotOnly { c00, .. } => c00.clone(),
            BasicFormulaTable::OneLiteral { c0, .. } => c0.clone(),
            BasicFormulaTable::UnitOnly { c01, .. } => c01.clone(),
        };
        let c6 = power_tensor(&c, 6);
        Ok(Encoder { params, table, c, c6 })
    }

    pub fn target(&self) -> Target {
        self.params.target
    }

    pub fn p(&self) -> u32 {
        self.params.p
    }

    /// `D_q`, `D̃_q(p)` or `G_q`.
    pub fn atom(&self, q: u32) -> Formula {
        let k = q as usize + 4;
        let n = self.params.n as usize;
        match &self.table {
            BasicFormulaTable::BotOnly { h1, .. } => lolli(lolli(h1.clone(), bot_pow(k)), bot_pow(k)),
            BasicFormulaTable::OneLiteral { h1, .. } => {
                let pk = p_power(&lit(self.params.p), k);
                lolli(lolli(h1.clone(), pk.clone()), pk)
            }
            BasicFormulaTable::UnitOnly { c01, .. } => tensor(
                one_par(k),
                lolli(one_par(k), tensor(one_par(n), power_tensor(c01, 4))),
            ),
        }
    }

    /// `D_X`, `G̃_X(p)` or `G_X` for a non-empty literal list.
    pub fn product(&self, lits: &[u32]) -> Formula {
        assert!(!lits.is_empty(), "products are non-empty");
        let atoms: Vec<Formula> = lits.iter().map(|&q| self.atom(q)).collect();
        match self.target() {
            Target::BotOnly => fold_right(atoms, tensor),
            Target::UnitOnly => fold_right(atoms, crate::formula::par),
            Target::OneLiteral => {
                let mut acc = lit(self.params.p);
                for a in atoms.into_iter().rev() {
                    acc = lolli(a, acc);
                }
                acc
            }
        }
    }

    /// `E_X`, `Ẽ_X(p)` or `E¹_X` for the literal list `lits`.
    pub fn e(&self, lits: &[u32]) -> Formula {
        let g = self.product(lits);
        match self.target() {
            Target::BotOnly => tensor(self.c6.clone(), g),
            Target::OneLiteral => nested_impl(&self.c, 6, &g),
            Target::UnitOnly => lolli(self.c6.clone(), g),
        }
    }

    /// Literal list of `p ⊗ X`.
    pub fn p_list(&self, bag: &[u32]) -> Vec<u32> {
        let mut v = vec![self.params.p];
        v.extend_from_slice(bag);
        v
    }

    /// `E_(p⊗X)`; the empty bag gives `E_p`.
    pub fn ep(&self, bag: &[u32]) -> Formula {
        self.e(&self.p_list(bag))
    }

    pub fn horn(&self, x: &[u32], y: &[u32]) -> Formula {
        match self.target() {
            Target::BotOnly => lolli(self.ep(x), self.ep(y)),
            _ => lolli(self.ep(y), self.ep(x)),
        }
    }

    /// `F_Y`.
    pub fn cont(&self, y: &[u32]) -> Formula {
        match self.target() {
            Target::BotOnly => lolli(self.ep(&[]), self.ep(y)),
            _ => lolli(self.ep(y), self.ep(&[])),
        }
    }

    pub fn formula(&self, a: &NormalizedFormula) -> Formula {
        use NormalizedFormula::*;
        let l = SimpleProduct::literals;
        match a {
            Horn(x, y) => self.horn(l(x), l(y)),
            WithHorn(x1, y1, x2, y2) => with(self.horn(l(x1), l(y1)), self.horn(l(x2), l(y2))),
            PlusHorn(x, y1, y2) => match self.target() {
                Target::BotOnly => lolli(self.ep(l(x)), plus(self.ep(l(y1)), self.ep(l(y2)))),
                _ => lolli(with(self.ep(l(y1)), self.ep(l(y2))), self.ep(l(x))),
            },
            Embedded(u, v, y) => {
                let (fuv, fy) = (self.horn(l(u), l(v)), self.cont(l(y)));
                match self.target() {
                    Target::OneLiteral => {
                        let p = lit(self.params.p);
                        lolli(lolli(fy, p.clone()), lolli(fuv, p))
                    }
                    _ => lolli(fuv, fy),
                }
            }
        }
    }

    pub fn sequent(&self, s: &NormalizedSequent) -> Sequent {
        let (w, z) = (s.w.literals(), s.z.literals());
        let (input, goal) = match self.target() {
            Target::BotOnly => (self.ep(w), self.ep(z)),
            _ => (self.ep(z), self.ep(w)),
        };
        let mut lhs = vec![input];
        lhs.extend(s.delta.iter().map(|a| self.formula(a)));
        lhs.extend(s.gamma.iter().map(|a| bang(self.formula(a))));
        Sequent::new(lhs, vec![goal])
    }
}

fn fold_right(mut items: Vec<Formula>, node: fn(Formula, Formula) -> Formula) -> Formula {
    let mut acc = items.pop().expect("non-empty");
    while let Some(a) = items.pop() {
        acc = node(a, acc);
    }
    acc
}

pub fn encode_product(x: &SimpleProduct, params: &EncodingParams) -> Result<Formula, EncodingError> {
    for &m in x.literals() {
        params.check_range(m)?;
    }
    Ok(Encoder::new(*params)?.product(x.literals()))
}

pub fn encode_formula(a: &NormalizedFormula, params: &EncodingParams) -> Result<Formula, EncodingError> {
    for p in a.products() {
        for &m in p.literals() {
            params.check_range(m)?;
            if m == params.p {
                return Err(EncodingError::LeadingOccurs(m));
            }
        }
    }
    Ok(Encoder::new(*params)?.formula(a))
}

/// `E_(p⊗X)` for a product goal, or `E_p` for the empty goal.
pub fn encode_goal(x: Option<&SimpleProduct>, params: &EncodingParams) -> Result<Formula, EncodingError> {
    let lits = x.map(SimpleProduct::literals).unwrap_or(&[]);
    for &m in lits {
        params.check_range(m)?;
    }
    Ok(Encoder::new(*params)?.ep(lits))
}

pub fn encode_sequent(s: &NormalizedSequent, params: &EncodingParams) -> Result<Sequent, EncodingError> {
    params.validate_for(s)?;
    Ok(Encoder::new(*params)?.sequent(s))
}

/// Atoms occurring in a sequent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Census {
    pub literals: BTreeSet<u32>,
    pub bottoms: usize,
    pub ones: usize,
}

pub fn census(s: &Sequent) -> Census {
    let mut c = Census::default();
    for f in s.formulas() {
        census_into(f, &mut c);
    }
    c
}

fn census_into(f: &Formula, c: &mut Census) {
    match f {
        Formula::Literal(i) => {
            c.literals.insert(*i);
        }
        Formula::Bottom => c.bottoms += 1,
        Formula::One => c.ones += 1,
        _ => {
            for ch in f.children() {
                census_into(ch, c);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_sequent;

    fn normal(s: &str) -> NormalizedSequent {
        NormalizedSequent::from_sequent(&parse_sequent(s).unwrap()).unwrap()
    }

    #[test]
    fn table_shapes_at_nine() {
        let params = EncodingParams::new(9, 1, Target::BotOnly).unwrap();
        let BasicFormulaTable::BotOnly { h00, .. } = basic_formulas(&params).unwrap() else { panic!() };
        assert_eq!(h00, lolli(bot_pow(11), bot_pow(2)));
        let enc = Encoder::new(params).unwrap();
        assert_eq!(enc.atom(2).to_string(), format!("(({} -o {}) -o {})", {
            let BasicFormulaTable::BotOnly { h1, .. } = &enc.table else { panic!() };
            h1
        }, bot_pow(6), bot_pow(6)));
        assert_eq!(enc.product(&[2, 3]), tensor(enc.atom(2), enc.atom(3)));
    }

    #[test]
    fn horn_orientation() {
        let s = normal("p2, (p2 -o p3) |- p3");
        let a = &s.delta[0];
        let bot = Encoder::new(EncodingParams::new(9, 1, Target::BotOnly).unwrap()).unwrap();
        assert_eq!(bot.formula(a), lolli(bot.ep(&[2]), bot.ep(&[3])));
        let one = Encoder::new(EncodingParams::new(9, 1, Target::OneLiteral).unwrap()).unwrap();
        assert_eq!(one.formula(a), lolli(one.ep(&[3]), one.ep(&[2])));
    }

    #[test]
    fn census_per_target() {
        let s = normal("p2, (p2 -o (p2 * p2)), !((p2 -o p2) -o p2) |- (p2 * p2)");
        for target in Target::ALL {
            let params = EncodingParams::resolve(&s, target, Some(9), None).unwrap();
            assert_eq!(params.p, 1);
            let c = census(&encode_sequent(&s, &params).unwrap());
            match target {
                Target::BotOnly => assert!(c.literals.is_empty() && c.ones == 0 && c.bottoms > 0),
                Target::OneLiteral => {
                    assert_eq!(c.literals.into_iter().collect::<Vec<_>>(), vec![1]);
                    assert_eq!((c.bottoms, c.ones), (0, 0));
                }
                Target::UnitOnly => assert!(c.literals.is_empty() && c.bottoms == 0 && c.ones > 0),
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert_eq!(EncodingParams::new(8, 1, Target::BotOnly), Err(EncodingError::SmallN(8)));
        assert!(EncodingParams::new(9, 3, Target::BotOnly).is_err());
        let s = normal("p2 |- p2");
        let bad = EncodingParams::new(9, 2, Target::BotOnly).unwrap();
        assert_eq!(encode_sequent(&s, &bad), Err(EncodingError::LeadingOccurs(2)));
        let d = EncodingParams::defaults_for(&normal("p5 |- p5"), Target::BotOnly);
        assert_eq!((d.n, d.p), (13, 6));
        assert!(d.validate_for(&normal("p5 |- p5")).is_ok());
    }
}
