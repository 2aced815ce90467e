use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::monomial::{expand_ending, expand_right_normed, LieMonomial};
use crate::arith::{format_rational, Rational};
use crate::error::{Error, Result};
use crate::symgroup::perm::{factorial, permutations_of, rank_arrangement, unrank_arrangement, Permutation};

/// Largest alternating set accepted by [`alternate`].
pub const MAX_ALTERNATING_SET: usize = 8;

/// Number of canonical basis monomials of `P_n`, i.e. `(n-1)!`.
pub fn basis_size(n: usize) -> usize {
    factorial(n.saturating_sub(1))
}

/// Letters of canonical basis word `index` of `P_n`: an arrangement of
/// `0..n-1` followed by the last variable `n-1`.
pub fn basis_letters(n: usize, index: usize) -> Vec<usize> {
    let mut w = unrank_arrangement(n - 1, index);
    w.push(n - 1);
    w
}

/// Index of a right-normed word ending in the last variable.
pub fn basis_index(letters: &[usize]) -> usize {
    rank_arrangement(&letters[..letters.len() - 1])
}

/// Canonical basis of `P_n`: right-normed words with `x_n` last, in
/// lexicographic order of the leading `n-1` letters.
pub fn basis_pn(n: usize) -> Result<Vec<LieMonomial>> {
    if n == 0 {
        return Err(Error::malformed("P_n needs n >= 1"));
    }
    Ok((0..basis_size(n))
        .map(|i| LieMonomial::right_normed(&basis_letters(n, i)))
        .collect())
}

/// An element of `P_n` in coordinates over the canonical basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultilinearPolynomial {
    degree: usize,
    terms: BTreeMap<usize, Rational>,
}

impl MultilinearPolynomial {
    pub fn zero(degree: usize) -> Self {
        MultilinearPolynomial {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis_element(degree: usize, index: usize) -> Self {
        let mut p = Self::zero(degree);
        p.terms.insert(index, Rational::one());
        p
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (usize, Rational)>) -> Result<Self> {
        let mut p = Self::zero(degree);
        let size = basis_size(degree);
        for (i, c) in terms {
            if i >= size {
                return Err(Error::malformed(format!("basis index {i} out of range for P_{degree}")));
            }
            p.add_term(i, c);
        }
        Ok(p)
    }

    pub fn from_dense(degree: usize, coeffs: &[Rational]) -> Self {
        let mut p = Self::zero(degree);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(i, c.clone());
        }
        p
    }

    pub fn to_dense(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); basis_size(self.degree)];
        for (&i, c) in &self.terms {
            v[i] = c.clone();
        }
        v
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<usize, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, index: usize) -> Rational {
        self.terms.get(&index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, index: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(index).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&index);
        }
    }

    fn check_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::malformed(format!(
                "degree mismatch: {} vs {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_degree(other)?;
        let mut out = self.clone();
        for (&i, c) in &other.terms {
            out.add_term(i, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        MultilinearPolynomial {
            degree: self.degree,
            terms: self.terms.iter().map(|(&i, x)| (i, x * c)).collect(),
        }
    }

    /// Basis monomials with their coefficients, as trees.
    pub fn monomials(&self) -> impl Iterator<Item = (LieMonomial, &Rational)> + '_ {
        self.terms
            .iter()
            .map(move |(&i, c)| (LieMonomial::right_normed(&basis_letters(self.degree, i)), c))
    }
}

impl fmt::Display for MultilinearPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.monomials().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{}*", format_rational(&abs))?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Coordinates of a multilinear bracket monomial in the canonical basis.
///
/// Uses the embedding into the free associative algebra: the coefficient of
/// basis word `x_{a1}..x_{a(n-1)} x_n` equals the coefficient of the
/// associative word `a1 .. a(n-1) n` in the commutator expansion.
pub fn rewrite(m: &LieMonomial) -> Result<MultilinearPolynomial> {
    let n = m.check_multilinear()?;
    let mut p = MultilinearPolynomial::zero(n);
    for (w, c) in expand_ending(m, n - 1) {
        p.add_term(basis_index(&w), Rational::from_integer(c.into()));
    }
    Ok(p)
}

/// Rewrites a rational combination of monomials of a common degree.
pub fn rewrite_combination(terms: &[(Rational, LieMonomial)]) -> Result<MultilinearPolynomial> {
    let n = terms
        .first()
        .map(|(_, m)| m.degree())
        .ok_or_else(|| Error::malformed("empty combination"))?;
    let mut p = MultilinearPolynomial::zero(n);
    for (c, m) in terms {
        let r = rewrite(m)?;
        if r.degree() != n {
            return Err(Error::malformed("terms of different degrees"));
        }
        p = p.add(&r.scale(c))?;
    }
    Ok(p)
}

/// Canonical coordinates of the right-normed word on `letters` (a permutation of `0..n`).
pub(crate) fn right_normed_coordinates(letters: &[usize]) -> Vec<(usize, i64)> {
    let n = letters.len();
    let last = n - 1;
    let k = letters.iter().position(|&x| x == last).expect("multilinear word");
    if k == last {
        return vec![(basis_index(letters), 1)];
    }
    // y_1..y_{k-1} [x_n, R] with R right-normed on the letters after x_n:
    // only -y_1..y_{k-1} E(R) x_n ends in x_n.
    expand_right_normed(&letters[k + 1..])
        .into_iter()
        .map(|(u, c)| {
            let mut w = letters[..k].to_vec();
            w.extend_from_slice(&u);
            w.push(last);
            (basis_index(&w), -c)
        })
        .collect()
}

/// `σ` applied to basis word `index`: substitution `x_i -> x_{σ(i)}`.
pub(crate) fn permute_basis(sigma: &Permutation, index: usize) -> Vec<(usize, i64)> {
    let n = sigma.degree();
    let letters: Vec<usize> = basis_letters(n, index).iter().map(|&x| sigma.apply(x)).collect();
    right_normed_coordinates(&letters)
}

/// The action `(σf)(x_1, .., x_n) = f(x_{σ(1)}, .., x_{σ(n)})`, re-expressed in the canonical basis.
pub fn permute(sigma: &Permutation, f: &MultilinearPolynomial) -> Result<MultilinearPolynomial> {
    if sigma.degree() != f.degree() {
        return Err(Error::malformed(format!(
            "permutation of degree {} acting on P_{}",
            sigma.degree(),
            f.degree()
        )));
    }
    let mut dense = vec![Rational::zero(); basis_size(f.degree())];
    for (&i, c) in f.terms() {
        for (j, s) in permute_basis(sigma, i) {
            dense[j] += c * Rational::from_integer(s.into());
        }
    }
    Ok(MultilinearPolynomial::from_dense(f.degree(), &dense))
}

/// Pairwise-disjoint sets of variables (0-based) to alternate on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AltSpec {
    sets: Vec<Vec<usize>>,
}

impl AltSpec {
    pub fn new(sets: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for s in &sets {
            for &x in s {
                if !seen.insert(x) {
                    return Err(Error::malformed(format!(
                        "alternating sets overlap at x{}",
                        x + 1
                    )));
                }
            }
        }
        Ok(AltSpec { sets })
    }

    pub fn empty() -> Self {
        AltSpec::default()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn check_degree(&self, n: usize) -> Result<()> {
        for s in &self.sets {
            if let Some(&x) = s.iter().find(|&&x| x >= n) {
                return Err(Error::malformed(format!("x{} is outside x1..x{n}", x + 1)));
            }
            if s.len() > MAX_ALTERNATING_SET {
                return Err(Error::malformed(format!(
                    "alternating set of size {} exceeds the cap {MAX_ALTERNATING_SET}",
                    s.len()
                )));
            }
        }
        Ok(())
    }

    /// `Π |S_i|!`.
    pub fn group_order(&self) -> usize {
        self.sets.iter().map(|s| factorial(s.len())).product()
    }
}

impl fmt::Display for AltSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .sets
            .iter()
            .map(|s| {
                let xs: Vec<String> = s.iter().map(|x| format!("x{}", x + 1)).collect();
                format!("{{{}}}", xs.join(","))
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `Alt_1 .. Alt_k f` where `Alt_j = Σ_{τ ∈ Sym(S_j)} sgn(τ) τ`.
pub fn alternate(f: &MultilinearPolynomial, spec: &AltSpec) -> Result<MultilinearPolynomial> {
    let n = f.degree();
    spec.check_degree(n)?;
    let mut cur = f.clone();
    for set in spec.sets() {
        let mut dense = vec![Rational::zero(); basis_size(n)];
        for tau in permutations_of(n, set) {
            let sign = tau.sign();
            for (&i, c) in cur.terms() {
                for (j, s) in permute_basis(&tau, i) {
                    let v = c * Rational::from_integer((s * sign).into());
                    dense[j] += v;
                }
            }
        }
        cur = MultilinearPolynomial::from_dense(n, &dense);
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn x(i: usize) -> LieMonomial {
        LieMonomial::var(i - 1)
    }

    fn br(a: LieMonomial, b: LieMonomial) -> LieMonomial {
        LieMonomial::bracket(a, b)
    }

    #[test]
    fn basis_examples() {
        assert!(basis_pn(0).is_err());
        let show = |n| basis_pn(n).unwrap().iter().map(|m| m.to_string()).collect::<Vec<_>>();
        assert_eq!(show(1), vec!["x1"]);
        assert_eq!(show(2), vec!["x1x2"]);
        assert_eq!(show(3), vec!["x1(x2x3)", "x2(x1x3)"]);
        for n in 1..=8 {
            assert_eq!(basis_pn(n).unwrap().len(), factorial(n - 1));
        }
    }

    #[test]
    fn rewrite_examples() {
        let p = rewrite(&br(x(1), x(2))).unwrap();
        assert_eq!(p, MultilinearPolynomial::basis_element(2, 0));
        let q = rewrite(&br(x(2), x(1))).unwrap();
        assert_eq!(q, p.scale(&rat(-1)));
        let r = rewrite(&br(br(x(1), x(2)), x(3))).unwrap();
        assert_eq!(r.to_string(), "x1(x2x3) - x2(x1x3)");
        assert!(rewrite(&br(x(1), x(1))).is_err());
    }

    #[test]
    fn jacobi_relation_rewrites_to_zero() {
        // (x1x2)x3 - x1(x2x3) + x2(x1x3)
        let rel = rewrite_combination(&[
            (rat(1), br(br(x(1), x(2)), x(3))),
            (rat(-1), br(x(1), br(x(2), x(3)))),
            (rat(1), br(x(2), br(x(1), x(3)))),
        ])
        .unwrap();
        assert!(rel.is_zero());
    }

    #[test]
    fn permute_examples() {
        let f = MultilinearPolynomial::basis_element(2, 0);
        assert_eq!(permute(&Permutation::identity(2), &f).unwrap(), f);
        let t = Permutation::transposition(2, 0, 1);
        assert_eq!(permute(&t, &f).unwrap(), f.scale(&rat(-1)));
        assert!(permute(&Permutation::identity(3), &f).is_err());
    }

    #[test]
    fn permute_matches_substitution_into_trees() {
        // σ acting on a basis word equals rewriting the renamed tree
        for sigma in Permutation::all(4) {
            for (i, m) in basis_pn(4).unwrap().into_iter().enumerate() {
                let direct = permute(&sigma, &MultilinearPolynomial::basis_element(4, i)).unwrap();
                let renamed = rewrite(&m.rename(sigma.images())).unwrap();
                assert_eq!(direct, renamed);
            }
        }
    }

    #[test]
    fn alternate_examples() {
        let f = MultilinearPolynomial::basis_element(2, 0);
        assert_eq!(alternate(&f, &AltSpec::empty()).unwrap(), f);
        let a = alternate(&f, &AltSpec::new(vec![vec![0, 1]]).unwrap()).unwrap();
        assert_eq!(a, f.scale(&rat(2)));
        assert!(AltSpec::new(vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(alternate(&f, &AltSpec::new(vec![vec![0, 2]]).unwrap()).is_err());
    }

    #[test]
    fn total_alternation_of_degree_three_vanishes() {
        let f = MultilinearPolynomial::basis_element(3, 0);
        let a = alternate(&f, &AltSpec::new(vec![vec![0, 1, 2]]).unwrap()).unwrap();
        assert!(a.is_zero());
    }

    fn poly(n: usize) -> impl Strategy<Value = MultilinearPolynomial> {
        proptest::collection::vec(-3i64..=3, basis_size(n)).prop_map(move |c| {
            MultilinearPolynomial::from_dense(n, &c.into_iter().map(rat).collect::<Vec<_>>())
        })
    }

    fn perm(n: usize) -> impl Strategy<Value = Permutation> {
        (0..factorial(n)).prop_map(move |r| Permutation::unrank(n, r))
    }

    fn double_substitution(sigma: &Permutation, tau: &Permutation, f: &MultilinearPolynomial) -> MultilinearPolynomial {
        // oracle: rename trees directly, no use of `permute`
        let n = f.degree();
        let mut terms = Vec::new();
        for (m, c) in f.monomials() {
            let once = m.rename(tau.images());
            terms.push((c.clone(), once.rename(sigma.images())));
        }
        if terms.is_empty() {
            return MultilinearPolynomial::zero(n);
        }
        rewrite_combination(&terms).unwrap()
    }

    proptest! {
        #[test]
        fn permute_is_a_group_action(f in poly(4), s in perm(4), t in perm(4)) {
            let lhs = permute(&s.compose(&t), &f).unwrap();
            let rhs = permute(&s, &permute(&t, &f).unwrap()).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(&lhs, &double_substitution(&s, &t, &f));
        }

        #[test]
        fn permute_action_degree_five(f in poly(5), s in perm(5), t in perm(5)) {
            let lhs = permute(&s.compose(&t), &f).unwrap();
            let rhs = permute(&s, &permute(&t, &f).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rewrite_is_idempotent(f in poly(4)) {
            let terms: Vec<(Rational, LieMonomial)> = f.monomials().map(|(m, c)| (c.clone(), m)).collect();
            if !terms.is_empty() {
                prop_assert_eq!(rewrite_combination(&terms).unwrap(), f);
            }
        }

        #[test]
        fn alternation_is_a_quasi_projector(f in poly(4)) {
            let spec = AltSpec::new(vec![vec![0, 2], vec![1, 3]]).unwrap();
            let a = alternate(&f, &spec).unwrap();
            let aa = alternate(&a, &spec).unwrap();
            prop_assert_eq!(aa, a.scale(&rat(spec.group_order() as i64)));
        }

        #[test]
        fn alternation_is_skew(f in poly(4)) {
            let spec = AltSpec::new(vec![vec![0, 1, 3]]).unwrap();
            let a = alternate(&f, &spec).unwrap();
            let t = Permutation::transposition(4, 1, 3);
            prop_assert_eq!(permute(&t, &a).unwrap(), a.scale(&rat(-1)));
        }
    }
}
