//! Lie algebras from structure constants and the structure theory needed for
//! the exponent: radical, nilradical, semisimple quotient, simple components.

mod algebra;
pub mod catalog;
pub mod structure;

pub use algebra::{AlgebraJson, LieAlgebra};
pub use structure::{analyze, radical, simple_decomposition, Component, StructureOptions, StructureReport};
