//! Simple products: non-empty multisets of literals and their ⊗-chain images.

use crate::formula::{lit, tensor, Formula};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("a simple product needs at least one literal")]
    Empty,
    #[error("literal indices start at 1")]
    ZeroIndex,
    #[error("`{0}` is not a ⊗-product of literals")]
    NotAProduct(String),
}

/// A non-empty multiset of literal indices, stored sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimpleProduct(Vec<u32>);

impl SimpleProduct {
    pub fn new(mut literals: Vec<u32>) -> Result<SimpleProduct, ProductError> {
        if literals.is_empty() {
            return Err(ProductError::Empty);
        }
        if literals.contains(&0) {
            return Err(ProductError::ZeroIndex);
        }
        literals.sort_unstable();
        Ok(SimpleProduct(literals))
    }

    pub fn single(index: u32) -> SimpleProduct {
        SimpleProduct::new(vec![index]).expect("non-zero literal")
    }

    /// Reads a literal or a ⊗-tree of literals, in any nesting.
    pub fn from_formula(f: &Formula) -> Result<SimpleProduct, ProductError> {
        let mut out = Vec::new();
        for leaf in f.tensor_leaves() {
            match leaf {
                Formula::Literal(i) => out.push(*i),
                _ => return Err(ProductError::NotAProduct(f.to_string())),
            }
        }
        SimpleProduct::new(out)
    }

    pub fn literals(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Right-nested ⊗-chain in sorted literal order.
    pub fn to_formula(&self) -> Formula {
        let mut it = self.0.iter().rev();
        let mut acc = lit(*it.next().expect("non-empty"));
        for &i in it {
            acc = tensor(lit(i), acc);
        }
        acc
    }

    pub fn with_literal(&self, index: u32) -> SimpleProduct {
        let mut v = self.0.clone();
        v.push(index);
        SimpleProduct::new(v).expect("non-empty")
    }

    pub fn max_literal(&self) -> u32 {
        *self.0.last().expect("non-empty")
    }
}

/// `X ≅ Y`: the two products denote the same multiset.
pub fn product_equiv(x: &SimpleProduct, y: &SimpleProduct) -> bool {
    x == y
}

/// Canonical product of a non-empty multiset and its formula image.
pub fn product_of_multiset(m: &[u32]) -> Result<(SimpleProduct, Formula), ProductError> {
    let p = SimpleProduct::new(m.to_vec())?;
    let f = p.to_formula();
    Ok((p, f))
}

impl fmt::Display for SimpleProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_formula(), f)
    }
}

impl fmt::Debug for SimpleProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sorted multiset of literals that may be empty: the running value of a
/// program, frames and stack entries.
pub type Bag = Vec<u32>;

pub fn bag_union(a: &[u32], b: &[u32]) -> Bag {
    let mut v: Bag = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

/// `a − b` when `b ⊆ a` as multisets.
pub fn bag_minus(a: &[u32], b: &[u32]) -> Option<Bag> {
    let mut rest = a.to_vec();
    for x in b {
        let i = rest.iter().position(|y| y == x)?;
        rest.remove(i);
    }
    Some(rest)
}

/// All distinct sub-multisets of a sorted bag, smallest first.
pub fn sub_bags(a: &[u32]) -> Vec<Bag> {
    let mut groups: Vec<(u32, usize)> = Vec::new();
    for &x in a {
        match groups.last_mut() {
            Some((y, n)) if *y == x => *n += 1,
            _ => groups.push((x, 1)),
        }
    }
    let mut out = vec![Vec::new()];
    for (x, n) in groups {
        let mut next = Vec::new();
        for base in &out {
            for k in 0..=n {
                let mut b = base.clone();
                b.extend(std::iter::repeat_n(x, k));
                next.push(b);
            }
        }
        out = next;
    }
    out.sort_by_key(|b| b.len());
    out
}

pub fn bag_to_string(b: &[u32]) -> String {
    match SimpleProduct::new(b.to_vec()) {
        Ok(p) => p.to_string(),
        Err(_) => "()".to_string(),
    }
}
