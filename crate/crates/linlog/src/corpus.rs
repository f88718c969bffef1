//! Seeded generators of normalized sequents and products.

use crate::normalized::{NormalizedFormula, NormalizedSequent};
use crate::product::{bag_minus, bag_union, Bag, SimpleProduct};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusShape {
    /// Literals are drawn from `p1..=p{literals}`.
    pub literals: u32,
    pub max_product: usize,
    pub max_delta: usize,
    pub max_gamma: usize,
}

impl Default for CorpusShape {
    fn default() -> CorpusShape {
        CorpusShape { literals: 3, max_product: 2, max_delta: 2, max_gamma: 1 }
    }
}

/// Every product over `p1..=p{literals}` with at most `max_len` factors.
pub fn all_products(literals: u32, max_len: usize) -> Vec<SimpleProduct> {
    fn grow(from: u32, literals: u32, left: usize, acc: &mut Vec<u32>, out: &mut Vec<SimpleProduct>) {
        if !acc.is_empty() {
            out.push(SimpleProduct::new(acc.clone()).expect("non-empty"));
        }
        if left == 0 {
            return;
        }
        for q in from..=literals {
            acc.push(q);
            grow(q, literals, left - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    grow(1, literals, max_len, &mut Vec::new(), &mut out);
    out
}

pub fn random_product(rng: &mut impl Rng, literals: u32, max_len: usize) -> SimpleProduct {
    let len = rng.gen_range(1..=max_len);
    SimpleProduct::new((0..len).map(|_| rng.gen_range(1..=literals)).collect()).expect("non-empty")
}

pub fn random_formula(rng: &mut impl Rng, literals: u32, max_len: usize) -> NormalizedFormula {
    let kind = rng.gen_range(0..4);
    let mut p = || random_product(rng, literals, max_len);
    match kind {
        0 => NormalizedFormula::Horn(p(), p()),
        1 => NormalizedFormula::PlusHorn(p(), p(), p()),
        2 => NormalizedFormula::WithHorn(p(), p(), p(), p()),
        _ => NormalizedFormula::Embedded(p(), p(), p()),
    }
}

/// A random sequent of the given shape. Half of the time `Z` is the value
/// reached by applying the Horn parts of Δ to `W` in some order, which
/// makes provable sequents common.
pub fn random_sequent(rng: &mut impl Rng, shape: &CorpusShape) -> NormalizedSequent {
    let (n, m) = (shape.literals, shape.max_product);
    let w = random_product(rng, n, m);
    let delta: Vec<_> = (0..rng.gen_range(0..=shape.max_delta)).map(|_| random_formula(rng, n, m)).collect();
    let gamma: Vec<_> = (0..rng.gen_range(0..=shape.max_gamma)).map(|_| random_formula(rng, n, m)).collect();
    let planted = if rng.gen_bool(0.5) { plant(rng, &w, &delta) } else { None };
    let z = planted.filter(|z| z.len() <= m).unwrap_or_else(|| random_product(rng, n, m));
    NormalizedSequent::new(w, delta, gamma, z)
}

fn plant(rng: &mut impl Rng, w: &SimpleProduct, delta: &[NormalizedFormula]) -> Option<SimpleProduct> {
    let mut out: Bag = w.literals().to_vec();
    let mut order: Vec<&NormalizedFormula> = delta.iter().collect();
    order.shuffle(rng);
    for a in order {
        let (x, y) = match a {
            NormalizedFormula::Horn(x, y) => (x, y),
            NormalizedFormula::WithHorn(x1, y1, x2, y2) => {
                if rng.gen_bool(0.5) {
                    (x1, y1)
                } else {
                    (x2, y2)
                }
            }
            _ => return None,
        };
        let rest = bag_minus(&out, x.literals())?;
        out = bag_union(y.literals(), &rest);
    }
    SimpleProduct::new(out).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn product_counts() {
        assert_eq!(all_products(3, 2).len(), 9);
        assert_eq!(all_products(2, 3).len(), 9);
    }

    #[test]
    fn shapes_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shape = CorpusShape::default();
        for _ in 0..200 {
            let s = random_sequent(&mut rng, &shape);
            assert!(s.delta.len() <= 2 && s.gamma.len() <= 1);
            assert!(s.max_literal() <= 3);
        }
    }
}
