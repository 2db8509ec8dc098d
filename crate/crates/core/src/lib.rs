//! Non-atomic congestion games: Wardrop equilibria, system optima, the price
//! of anarchy, and analyzers for how the price of anarchy behaves as total
//! demand grows.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod equilibrium;
pub mod exponent;
pub mod game;
pub mod harness;
pub mod ingest;
pub mod price;
pub mod quadrature;
