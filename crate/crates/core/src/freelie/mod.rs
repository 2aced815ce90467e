//! The multilinear component `P_n` of the free Lie algebra on `x_1, .., x_n`.

mod monomial;
mod polynomial;

pub use monomial::LieMonomial;
pub use polynomial::{
    alternate, basis_index, basis_letters, basis_pn, basis_size, permute, rewrite,
    rewrite_combination, AltSpec, MultilinearPolynomial, MAX_ALTERNATING_SET,
};
pub(crate) use polynomial::permute_basis;
