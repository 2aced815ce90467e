//! Exact rational scalars, matrices and subspaces, plus prime-field helpers
//! for randomized and multi-modular rank computations.

pub mod matrix;
pub mod modular;
pub mod rational;
pub mod subspace;

pub use matrix::{integer_rank, rank, RankMode, RankReport, RationalMatrix};
pub use rational::{format_rational, frac, parse_rational, rat, Rational};
pub use subspace::Subspace;
