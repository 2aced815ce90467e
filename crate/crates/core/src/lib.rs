//! Polynomial-identity invariants of finite-dimensional Lie algebras over Q.
//!
//! The crate computes codimensions, cocharacters and colengths of the
//! multilinear identities of a Lie algebra given by structure constants,
//! checks Capelli identities, and computes the integer `d(L)` that equals the
//! PI-exponent of an algebra whose nilradical has a semisimple quotient. The
//! upper-bound mechanism (multialternating polynomials with `d + 1`-element
//! alternating sets vanish) and the lower-bound mechanism (multialternating
//! non-identities with `d`-element sets) are both checked by exact evaluation.

pub mod arith;
pub mod codim;
pub mod error;
pub mod exponent;
pub mod freelie;
pub mod lie;
pub mod report;
pub mod symgroup;

pub use error::{Error, Result};
