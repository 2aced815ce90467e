use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{serde_rational_vecs, Rational};
use crate::error::{Error, Result};

/// A subspace of Q^ambient stored by its reduced row echelon basis.
///
/// The basis is canonical (pivots normalized to 1, pivot columns cleared in
/// every other row), so two subspaces are equal iff their bases are equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    ambient: usize,
    #[serde(with = "serde_rational_vecs")]
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Self::zero(ambient);
        for i in 0..ambient {
            let mut v = vec![Rational::zero(); ambient];
            v[i] = Rational::one();
            s.push(v);
        }
        s
    }

    pub fn from_generators<I>(ambient: usize, gens: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<Rational>>,
    {
        let mut s = Self::zero(ambient);
        for g in gens {
            s.check(&g)?;
            s.push(g);
        }
        Ok(s)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check(&self, v: &[Rational]) -> Result<()> {
        if v.len() != self.ambient {
            return Err(Error::malformed(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient
            )));
        }
        Ok(())
    }

    /// Clears the pivot coordinates of `v`; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let c = out[p].clone();
            for (x, y) in out.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        self.check(v)?;
        Ok(self.reduce(v).iter().all(Zero::is_zero))
    }

    /// Coefficients of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if !self.reduce(v).iter().all(Zero::is_zero) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adds one vector, keeping the basis reduced. Returns true if the dimension grew.
    pub(crate) fn push(&mut self, v: Vec<Rational>) -> bool {
        let mut r = self.reduce(&v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for row in self.basis.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, r);
        true
    }

    /// Checked version of [`Subspace::push`].
    pub fn with_vector(&self, v: Vec<Rational>) -> Result<Self> {
        self.check(&v)?;
        let mut s = self.clone();
        s.push(v);
        Ok(s)
    }

    pub fn span_add(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::malformed(format!(
                "ambient mismatch: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        let mut s = self.clone();
        for v in &other.basis {
            s.push(v.clone());
        }
        Ok(s)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains(v).unwrap_or(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    fn span(gens: &[&[i64]]) -> Subspace {
        Subspace::from_generators(gens[0].len(), gens.iter().map(|g| v(g))).unwrap()
    }

    #[test]
    fn span_add_examples() {
        let e1 = span(&[&[1, 0]]);
        let e2 = span(&[&[0, 1]]);
        assert_eq!(e1.span_add(&e2).unwrap().dim(), 2);
        assert_eq!(e1.span_add(&e1).unwrap(), e1);
        let a = span(&[&[1, 1]]);
        let b = span(&[&[1, -1]]);
        assert_eq!(a.span_add(&b).unwrap(), Subspace::full(2));
        assert!(e1.span_add(&Subspace::zero(3)).is_err());
    }

    #[test]
    fn contains_examples() {
        assert!(span(&[&[1, 2, 3]]).contains(&v(&[0, 0, 0])).unwrap());
        assert!(!span(&[&[1, 0]]).contains(&v(&[0, 1])).unwrap());
        assert!(span(&[&[1, 1], &[2, 0]]).contains(&v(&[3, 1])).unwrap());
        assert!(span(&[&[1, 0]]).contains(&v(&[1])).is_err());
    }

    #[test]
    fn coordinates_reconstruct() {
        let s = span(&[&[1, 2, 0], &[0, 1, 1]]);
        let target = v(&[2, 5, 1]);
        let c = s.coordinates(&target).unwrap();
        let mut back = vec![Rational::zero(); 3];
        for (ci, row) in c.iter().zip(s.basis()) {
            for (b, r) in back.iter_mut().zip(row) {
                *b += ci * r;
            }
        }
        assert_eq!(back, target);
    }

    fn gens(dim: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
        proptest::collection::vec(proptest::collection::vec(-3i64..=3, dim), 0..4)
            .prop_map(|g| g.into_iter().map(|r| r.into_iter().map(rat).collect()).collect())
    }

    proptest! {
        #[test]
        fn sum_is_associative_and_commutative(a in gens(4), b in gens(4), c in gens(4)) {
            let a = Subspace::from_generators(4, a).unwrap();
            let b = Subspace::from_generators(4, b).unwrap();
            let c = Subspace::from_generators(4, c).unwrap();
            let left = a.span_add(&b).unwrap().span_add(&c).unwrap();
            let right = a.span_add(&b.span_add(&c).unwrap()).unwrap();
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(a.span_add(&b).unwrap(), b.span_add(&a).unwrap());
            prop_assert!(left.dim() >= a.dim().max(b.dim()));
        }

        #[test]
        fn echelon_form_is_canonical(g in gens(4), mix in proptest::collection::vec(-2i64..=2, 16)) {
            let s = Subspace::from_generators(4, g.clone()).unwrap();
            // random combinations of the generators plus the generators themselves
            let mut other: Vec<Vec<Rational>> = Vec::new();
            for (k, row) in g.iter().enumerate() {
                let mut acc = row.clone();
                for (j, r2) in g.iter().enumerate() {
                    let c = rat(mix[(k * 4 + j) % 16]);
                    for (a, b) in acc.iter_mut().zip(r2) { *a += &c * b; }
                }
                other.push(acc);
            }
            other.extend(g.iter().rev().cloned());
            let t = Subspace::from_generators(4, other).unwrap();
            prop_assert_eq!(s, t);
        }
    }
}
