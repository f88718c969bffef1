//! Cut-free multiplicative-additive linear logic with exponentials: proofs,
//! proof search, stack programs over simple products, and the ⊥-counting
//! encodings that relate them.

pub mod formula;
pub mod normalized;
pub mod parse;
pub mod product;
pub mod proof;
pub mod balance;
pub mod encode;
pub mod search;
pub mod program;
pub mod compile;
pub mod extract;
pub mod fairness;
pub mod corpus;
pub mod batch;
