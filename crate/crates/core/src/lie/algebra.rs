#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::rational::{format_rational, parse_rational};
use crate::arith::{Rational, RationalMatrix, Subspace};
use crate::error::{Error, Result};

/// A finite-dimensional Lie algebra over Q given by structure constants.
///
/// `table[i][j]` holds the coordinates of `[b_i, b_j]`. The table is
/// antisymmetric and satisfies the Jacobi identity on every basis triple;
/// both are checked at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LieAlgebra {
    labels: Vec<String>,
    table: Vec<Vec<Vec<Rational>>>,
}

/// JSON form: `{ "dim": 3, "basis": [...], "brackets": { "i,j": [["coeff", k], ...] } }`
/// with 1-based `i < j` and 1-based `k`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: BTreeMap<String, Vec<(String, usize)>>,
}

fn zero_vec(n: usize) -> Vec<Rational> {
    vec![Rational::zero(); n]
}

fn default_labels(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("b{i}")).collect()
}

impl LieAlgebra {
    /// Validates a full `dim x dim` table of bracket vectors.
    pub fn validate(labels: Vec<String>, table: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let dim = labels.len();
        if table.len() != dim {
            return Err(Error::malformed(format!(
                "table has {} rows for {dim} basis elements",
                table.len()
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::malformed(format!("table row {} has {} entries", i + 1, row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                if v.len() != dim {
                    return Err(Error::malformed(format!(
                        "bracket ({},{}) has length {}, expected {dim}",
                        i + 1,
                        j + 1,
                        v.len()
                    )));
                }
            }
        }
        for i in 0..dim {
            if table[i][i].iter().any(|x| !x.is_zero()) {
                return Err(Error::malformed(format!("[b{0}, b{0}] must vanish", i + 1)));
            }
            for j in i + 1..dim {
                if table[i][j].iter().zip(&table[j][i]).any(|(a, b)| a != &-b.clone()) {
                    return Err(Error::malformed(format!(
                        "table is not antisymmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let alg = LieAlgebra { labels, table };
        if let Some((i, j, k)) = alg.jacobi_failure() {
            return Err(Error::JacobiViolation(i + 1, j + 1, k + 1));
        }
        Ok(alg)
    }

    /// Builds from brackets `[b_i, b_j] = v` listed for `i < j` (0-based).
    pub fn from_brackets(
        labels: Vec<String>,
        brackets: impl IntoIterator<Item = (usize, usize, Vec<Rational>)>,
    ) -> Result<Self> {
        let dim = labels.len();
        let mut table = vec![vec![zero_vec(dim); dim]; dim];
        for (i, j, v) in brackets {
            if i >= j || j >= dim {
                return Err(Error::malformed(format!(
                    "bracket key ({}, {}) must satisfy i < j <= {dim}",
                    i + 1,
                    j + 1
                )));
            }
            if v.len() != dim {
                return Err(Error::malformed(format!(
                    "bracket ({}, {}) has length {}",
                    i + 1,
                    j + 1,
                    v.len()
                )));
            }
            table[j][i] = v.iter().map(|x| -x.clone()).collect();
            table[i][j] = v;
        }
        Self::validate(labels, table)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            labels: default_labels(dim),
            table: vec![vec![zero_vec(dim); dim]; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `[b_i, b_j]` in coordinates.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Rational] {
        &self.table[i][j]
    }

    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Result<Vec<Rational>> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::malformed(format!(
                "vectors of length {} and {} in a {n}-dimensional algebra",
                x.len(),
                y.len()
            )));
        }
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = zero_vec(n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || i == j {
                    continue;
                }
                let c = xi * yj;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    if !t.is_zero() {
                        *o += &c * t;
                    }
                }
            }
        }
        out
    }

    /// Linear combination of basis labels, e.g. `2*e - h + 1/2*f`.
    pub fn format_element(&self, x: &[Rational]) -> String {
        let mut out = String::new();
        for (c, label) in x.iter().zip(&self.labels) {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            if abs != Rational::from_integer(1.into()) {
                out.push_str(&format_rational(&abs));
                out.push('*');
            }
            out.push_str(label);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().flatten().flatten().all(Zero::is_zero)
    }

    /// First basis triple `(i, j, k)`, `i < j < k`, violating Jacobi.
    pub fn jacobi_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        let e = |i: usize| {
            let mut v = zero_vec(n);
            v[i] = Rational::from_integer(1.into());
            v
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (e(i), e(j), e(k));
                    let t1 = self.bracket_unchecked(&self.bracket_unchecked(&a, &b), &c);
                    let t2 = self.bracket_unchecked(&self.bracket_unchecked(&b, &c), &a);
                    let t3 = self.bracket_unchecked(&self.bracket_unchecked(&c, &a), &b);
                    if t1.iter().zip(&t2).zip(&t3).any(|((x, y), z)| !(x + y + z).is_zero()) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Matrix of `ad x` acting on column coordinate vectors.
    pub fn ad(&self, x: &[Rational]) -> RationalMatrix {
        let n = self.dim();
        let mut m = RationalMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = zero_vec(n);
            e[j] = Rational::from_integer(1.into());
            let col = self.bracket_unchecked(x, &e);
            for (k, c) in col.into_iter().enumerate() {
                m.set(k, j, c);
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> RationalMatrix {
        let n = self.dim();
        let mut m = RationalMatrix::zeros(n, n);
        for j in 0..n {
            for (k, c) in self.table[i][j].iter().enumerate() {
                if !c.is_zero() {
                    m.set(k, j, c.clone());
                }
            }
        }
        m
    }

    /// Killing form `tr(ad b_i ad b_j)` in the stored basis.
    pub fn killing_form(&self) -> RationalMatrix {
        let n = self.dim();
        let ads: Vec<RationalMatrix> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut k = RationalMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let t = ads[i].mul(&ads[j]).expect("square").trace();
                k.set(i, j, t.clone());
                k.set(j, i, t);
            }
        }
        k
    }

    /// Span of all `[a, b]` with `a` in `a_space`, `b` in `b_space`.
    pub fn bracket_spaces(&self, a_space: &Subspace, b_space: &Subspace) -> Subspace {
        let mut s = Subspace::zero(self.dim());
        for a in a_space.basis() {
            for b in b_space.basis() {
                s.push(self.bracket_unchecked(a, b));
            }
        }
        s
    }

    /// The same algebra in the basis `b'_i = Σ_k rows[i][k] b_k`.
    pub fn change_basis(&self, rows: &RationalMatrix) -> Result<Self> {
        let n = self.dim();
        if rows.rows() != n || rows.cols() != n {
            return Err(Error::malformed("basis change must be a square matrix of the algebra's dimension"));
        }
        let inv = rows
            .inverse()
            .ok_or_else(|| Error::malformed("basis change is singular"))?;
        // new coordinates of a vector w (old coordinates): w = Σ c_i b'_i = Σ_i c_i rows[i]
        // so c = w * inv (row vector times inverse)
        let inv_t = inv.transpose();
        let mut table = vec![vec![zero_vec(n); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let w = self.bracket_unchecked(rows.row(i), rows.row(j));
                let c = inv_t.apply(&w);
                table[j][i] = c.iter().map(|x| -x.clone()).collect();
                table[i][j] = c;
            }
        }
        Self::validate(default_labels(n), table)
    }

    /// Direct sum of two algebras; labels are kept with `'` appended on the right factor when clashing.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (n, m) = (self.dim(), other.dim());
        let mut labels = self.labels.clone();
        for l in &other.labels {
            let mut l = l.clone();
            while labels.contains(&l) {
                l.push('\'');
            }
            labels.push(l);
        }
        let mut table = vec![vec![zero_vec(n + m); n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                table[i][j][..n].clone_from_slice(&self.table[i][j]);
            }
        }
        for i in 0..m {
            for j in 0..m {
                table[n + i][n + j][n..].clone_from_slice(&other.table[i][j]);
            }
        }
        LieAlgebra { labels, table }
    }

    pub fn to_json_struct(&self) -> AlgebraJson {
        let n = self.dim();
        let mut brackets = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let terms: Vec<(String, usize)> = self.table[i][j]
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (format_rational(c), k + 1))
                    .collect();
                if !terms.is_empty() {
                    brackets.insert(format!("{},{}", i + 1, j + 1), terms);
                }
            }
        }
        AlgebraJson {
            dim: n,
            basis: Some(self.labels.clone()),
            brackets,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_struct()).expect("serializable")
    }

    pub fn from_json_struct(raw: &AlgebraJson) -> Result<Self> {
        let dim = raw.dim;
        let labels = match &raw.basis {
            Some(b) if b.len() != dim => {
                return Err(Error::malformed(format!(
                    "field \"basis\": {} names for dim {dim}",
                    b.len()
                )))
            }
            Some(b) => b.clone(),
            None => default_labels(dim),
        };
        let mut brackets = Vec::new();
        for (key, terms) in &raw.brackets {
            let bad_key = || Error::malformed(format!("field \"brackets\": bad key {key:?}, expected \"i,j\""));
            let (a, b) = key.split_once(',').ok_or_else(bad_key)?;
            let i: usize = a.trim().parse().map_err(|_| bad_key())?;
            let j: usize = b.trim().parse().map_err(|_| bad_key())?;
            if i == 0 || j == 0 || i >= j || j > dim {
                return Err(Error::malformed(format!(
                    "field \"brackets\": key {key:?} must satisfy 1 <= i < j <= {dim}"
                )));
            }
            let mut v = zero_vec(dim);
            for (coeff, k) in terms {
                if *k == 0 || *k > dim {
                    return Err(Error::malformed(format!(
                        "field \"brackets\".{key:?}: basis index {k} out of range 1..={dim}"
                    )));
                }
                let c = parse_rational(coeff)
                    .map_err(|e| Error::malformed(format!("field \"brackets\".{key:?}: {e}")))?;
                v[k - 1] += c;
            }
            brackets.push((i - 1, j - 1, v));
        }
        Self::from_brackets(labels, brackets)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: AlgebraJson = serde_json::from_str(text).map_err(|e| {
            Error::malformed(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        Self::from_json_struct(&raw)
    }

    /// Content hash of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        hex::encode(&digest[..16])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn sl2() -> LieAlgebra {
        // e, h, f
        LieAlgebra::from_brackets(
            vec!["e".into(), "h".into(), "f".into()],
            vec![
                (0, 1, vec![rat(-2), rat(0), rat(0)]),
                (0, 2, vec![rat(0), rat(1), rat(0)]),
                (1, 2, vec![rat(0), rat(0), rat(-2)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(LieAlgebra::validate(default_labels(3), vec![vec![zero_vec(3); 3]; 3]).is_ok());
        sl2();
        let bad = LieAlgebra::from_brackets(
            vec!["e".into(), "h".into(), "f".into()],
            vec![
                (0, 1, vec![rat(-2), rat(0), rat(0)]),
                (0, 2, vec![rat(0), rat(1), rat(0)]),
                (1, 2, vec![rat(0), rat(0), rat(2)]),
            ],
        );
        assert_eq!(bad.unwrap_err(), Error::JacobiViolation(1, 2, 3));
        assert!(matches!(
            LieAlgebra::validate(default_labels(2), vec![vec![zero_vec(2); 2]; 3]),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn bracket_examples() {
        let l = sl2();
        let e = vec![rat(1), rat(0), rat(0)];
        let f = vec![rat(0), rat(0), rat(1)];
        assert_eq!(l.bracket(&e, &f).unwrap(), vec![rat(0), rat(1), rat(0)]);
        let x = vec![rat(2), rat(-1), rat(3)];
        assert!(l.bracket(&x, &x).unwrap().iter().all(Zero::is_zero));
        let a = LieAlgebra::abelian(2);
        assert!(a.bracket(&[rat(1), rat(2)], &[rat(3), rat(4)]).unwrap().iter().all(Zero::is_zero));
        assert!(l.bracket(&e, &[rat(1)]).is_err());
    }

    #[test]
    fn killing_sl2() {
        // oracle: traces of explicit 3x3 adjoint matrices in the basis (e, h, f)
        // ad e = [[0,-2,0],[0,0,1],[0,0,0]], ad h = diag(2,0,-2), ad f = [[0,0,0],[-1,0,0],[0,2,0]]
        let ad_e = RationalMatrix::from_i64(&[&[0, -2, 0], &[0, 0, 1], &[0, 0, 0]]).unwrap();
        let ad_h = RationalMatrix::from_i64(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]).unwrap();
        let ad_f = RationalMatrix::from_i64(&[&[0, 0, 0], &[-1, 0, 0], &[0, 2, 0]]).unwrap();
        let l = sl2();
        assert_eq!(l.ad_basis(0), ad_e);
        assert_eq!(l.ad_basis(1), ad_h);
        assert_eq!(l.ad_basis(2), ad_f);
        let k = l.killing_form();
        assert_eq!(k.get(1, 1), &rat(8));
        assert_eq!(k.get(0, 2), &rat(4));
        for (i, j) in [(0, 0), (2, 2), (0, 1), (2, 1)] {
            assert_eq!(k.get(i, j), &rat(0));
        }
    }

    #[test]
    fn killing_solvable2_rank_one() {
        let l = LieAlgebra::from_brackets(vec!["e".into(), "f".into()], vec![(0, 1, vec![rat(0), rat(1)])])
            .unwrap();
        let k = l.killing_form();
        assert_eq!(crate::arith::rank(&k, crate::arith::RankMode::Exact).unwrap().rank, 1);
        assert!(LieAlgebra::abelian(4).killing_form().is_zero());
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let l = sl2();
        assert_eq!(LieAlgebra::from_json(&l.to_json()).unwrap(), l);
        let s2 = LieAlgebra::from_json(r#"{"dim": 2, "brackets": {"1,2": [["1", 2]]}}"#).unwrap();
        assert_eq!(s2.basis_bracket(0, 1), &[rat(0), rat(1)]);
        assert!(LieAlgebra::from_json(r#"{"dim": 2, "brackets": {"2,1": [["1", 2]]}}"#).is_err());
        assert!(LieAlgebra::from_json(r#"{"dim": 2, "brackets": {"1,2": [["x", 2]]}}"#).is_err());
        let err = LieAlgebra::from_json("{\"dim\": 2,\n \"bogus\": 1}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn basis_change_preserves_jacobi() {
        let l = sl2();
        let p = RationalMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 2], &[1, 0, 1]]).unwrap();
        let l2 = l.change_basis(&p).unwrap();
        assert_eq!(l2.dim(), 3);
        assert!(l2.jacobi_failure().is_none());
    }
}
