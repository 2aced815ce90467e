use std::fmt;

use crate::error::{Error, Result};

/// A bracketing of variables `x_1, .., x_n` (stored 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LieMonomial {
    Var(usize),
    Bracket(Box<LieMonomial>, Box<LieMonomial>),
}

impl LieMonomial {
    pub fn var(i: usize) -> Self {
        LieMonomial::Var(i)
    }

    pub fn bracket(a: LieMonomial, b: LieMonomial) -> Self {
        LieMonomial::Bracket(Box::new(a), Box::new(b))
    }

    /// The right-normed word `x_{w0}(x_{w1}(..(x_{w(k-2)} x_{w(k-1)})))`.
    pub fn right_normed(letters: &[usize]) -> Self {
        let (last, rest) = letters.split_last().expect("nonempty word");
        rest.iter()
            .rev()
            .fold(LieMonomial::Var(*last), |acc, &x| LieMonomial::bracket(LieMonomial::Var(x), acc))
    }

    pub fn degree(&self) -> usize {
        match self {
            LieMonomial::Var(_) => 1,
            LieMonomial::Bracket(a, b) => a.degree() + b.degree(),
        }
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            LieMonomial::Var(i) => out.push(*i),
            LieMonomial::Bracket(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub(crate) fn contains(&self, v: usize) -> bool {
        match self {
            LieMonomial::Var(i) => *i == v,
            LieMonomial::Bracket(a, b) => a.contains(v) || b.contains(v),
        }
    }

    /// Checks that every variable `0..n` appears exactly once, `n` = degree.
    pub fn check_multilinear(&self) -> Result<usize> {
        let leaves = self.leaves();
        let n = leaves.len();
        let mut seen = vec![false; n];
        for &l in &leaves {
            if l >= n || std::mem::replace(&mut seen[l], true) {
                return Err(Error::malformed(format!(
                    "{self} is not multilinear in x1..x{n}"
                )));
            }
        }
        Ok(n)
    }

    /// Applies a variable renaming `x_i -> x_{map[i]}`.
    pub fn rename(&self, map: &[usize]) -> LieMonomial {
        match self {
            LieMonomial::Var(i) => LieMonomial::Var(map[*i]),
            LieMonomial::Bracket(a, b) => LieMonomial::bracket(a.rename(map), b.rename(map)),
        }
    }
}

impl fmt::Display for LieMonomial {
    /// Juxtaposition with parentheses around composite factors: `x1(x2(x3x4))`, `(x1x2)x3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieMonomial::Var(i) => write!(f, "x{}", i + 1),
            LieMonomial::Bracket(a, b) => {
                for side in [a, b] {
                    match side.as_ref() {
                        LieMonomial::Var(_) => write!(f, "{side}")?,
                        _ => write!(f, "({side})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// Signed associative words: the image of a Lie monomial in the free associative algebra.
pub(crate) type Expansion = Vec<(Vec<usize>, i64)>;

pub(crate) fn concat(a: &Expansion, b: &Expansion, sign: i64) -> Expansion {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (u, cu) in a {
        for (v, cv) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            out.push((w, sign * cu * cv));
        }
    }
    out
}

/// Full commutator expansion `[a, b] = ab - ba`.
pub(crate) fn expand_full(m: &LieMonomial) -> Expansion {
    match m {
        LieMonomial::Var(i) => vec![(vec![*i], 1)],
        LieMonomial::Bracket(a, b) => {
            let (ea, eb) = (expand_full(a), expand_full(b));
            let mut out = concat(&ea, &eb, 1);
            out.extend(concat(&eb, &ea, -1));
            out
        }
    }
}

/// The part of the expansion made of words ending in `last`; `m` must contain `last`.
pub(crate) fn expand_ending(m: &LieMonomial, last: usize) -> Expansion {
    match m {
        LieMonomial::Var(i) => {
            debug_assert_eq!(*i, last);
            vec![(vec![*i], 1)]
        }
        LieMonomial::Bracket(a, b) => {
            if b.contains(last) {
                concat(&expand_full(a), &expand_ending(b, last), 1)
            } else {
                concat(&expand_full(b), &expand_ending(a, last), -1)
            }
        }
    }
}

/// Full expansion of the right-normed word on `letters`, built from the inside out.
pub(crate) fn expand_right_normed(letters: &[usize]) -> Expansion {
    let (last, rest) = letters.split_last().expect("nonempty word");
    let mut cur: Expansion = vec![(vec![*last], 1)];
    for &z in rest.iter().rev() {
        let mut next = Vec::with_capacity(cur.len() * 2);
        for (w, c) in &cur {
            let mut left = Vec::with_capacity(w.len() + 1);
            left.push(z);
            left.extend_from_slice(w);
            next.push((left, *c));
            let mut right = w.clone();
            right.push(z);
            next.push((right, -c));
        }
        cur = next;
    }
    cur
}
