use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::partition::{Partition, YoungTableau};
use super::perm::Permutation;
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::freelie::{permute_basis, MultilinearPolynomial};

/// An element `Σ a_σ σ` of the group algebra `Q S_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    degree: usize,
    terms: BTreeMap<Permutation, Rational>,
}

impl GroupAlgebraElement {
    pub fn zero(degree: usize) -> Self {
        GroupAlgebraElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_permutation(sigma: Permutation) -> Self {
        let mut e = Self::zero(sigma.degree());
        e.terms.insert(sigma, Rational::one());
        e
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Permutation, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, sigma: Permutation, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(sigma.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&sigma);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.degree);
        for (s, a) in &self.terms {
            out.add_term(s.clone(), a * c);
        }
        out
    }

    /// `(Σ a_σ σ)(Σ b_τ τ) = Σ a_σ b_τ (σ ∘ τ)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::malformed("group algebra elements of different degrees"));
        }
        let mut out = Self::zero(self.degree);
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                out.add_term(s.compose(t), a * b);
            }
        }
        Ok(out)
    }
}

/// The Young symmetrizer `e_T = R_T C_T` of the row-reading tableau of shape `λ`,
/// with `R_T = Σ_{rows} σ` and `C_T = Σ_{columns} sgn(τ) τ`.
pub fn symmetrizer(lambda: &Partition) -> GroupAlgebraElement {
    let t = YoungTableau::row_reading(lambda);
    let n = lambda.size();
    let mut e = GroupAlgebraElement::zero(n);
    let cols = t.column_group();
    for r in t.row_group() {
        for c in &cols {
            e.add_term(r.compose(c), Rational::from_integer(c.sign().into()));
        }
    }
    e
}

/// Action of the group algebra on `P_n`, extending `permute` linearly.
pub fn act(g: &GroupAlgebraElement, f: &MultilinearPolynomial) -> Result<MultilinearPolynomial> {
    if g.degree() != f.degree() {
        return Err(Error::malformed(format!(
            "element of Q S_{} acting on P_{}",
            g.degree(),
            f.degree()
        )));
    }
    let mut dense = vec![Rational::zero(); crate::freelie::basis_size(f.degree())];
    for (sigma, a) in g.terms() {
        for (&i, c) in f.terms() {
            let ac = a * c;
            for (j, s) in permute_basis(sigma, i) {
                dense[j] += &ac * Rational::from_integer(s.into());
            }
        }
    }
    Ok(MultilinearPolynomial::from_dense(f.degree(), &dense))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::freelie::permute;
    use crate::symgroup::{factorial, hook_dim, partitions};

    #[test]
    fn symmetrizer_is_quasi_idempotent() {
        for n in 1..=5 {
            for lambda in partitions(n, None) {
                let e = symmetrizer(&lambda);
                let factor = factorial(n) as u128 / hook_dim(&lambda);
                let sq = e.mul(&e).unwrap();
                assert_eq!(sq, e.scale(&rat(factor as i64)), "{lambda}");
            }
        }
    }

    #[test]
    fn trivial_and_sign_symmetrizers() {
        let n = 3;
        let triv = symmetrizer(&Partition::new(vec![n]).unwrap());
        assert_eq!(triv.terms().len(), 6);
        assert!(triv.terms().values().all(|c| *c == rat(1)));
        let sgn = symmetrizer(&Partition::new(vec![1; n]).unwrap());
        for (p, c) in sgn.terms() {
            assert_eq!(*c, rat(p.sign()));
        }
    }

    #[test]
    fn act_agrees_with_permute() {
        let f = MultilinearPolynomial::from_dense(4, &[rat(1), rat(-2), rat(0), rat(3), rat(1), rat(5)]);
        for sigma in Permutation::all(4) {
            let g = GroupAlgebraElement::from_permutation(sigma.clone());
            assert_eq!(act(&g, &f).unwrap(), permute(&sigma, &f).unwrap());
        }
    }

    #[test]
    fn act_is_multiplicative() {
        let f = MultilinearPolynomial::from_dense(4, &[rat(2), rat(0), rat(-1), rat(1), rat(0), rat(7)]);
        let a = symmetrizer(&Partition::new(vec![2, 1, 1]).unwrap());
        let b = symmetrizer(&Partition::new(vec![3, 1]).unwrap());
        let lhs = act(&a.mul(&b).unwrap(), &f).unwrap();
        let rhs = act(&a, &act(&b, &f).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
