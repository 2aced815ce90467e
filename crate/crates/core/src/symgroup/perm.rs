use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{0, .., n-1}` stored by its images: `σ(i) = images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::malformed(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation { images })
    }

    /// Transposition of `a` and `b` (0-based) in `S_n`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(a, b);
        p
    }

    /// Builds from 1-based cycles, e.g. `&[&[1, 2, 3]]` for (1 2 3).
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a == 0 || a > n || b == 0 || b > n {
                    return Err(Error::malformed(format!("cycle entry out of range 1..={n}")));
                }
                images[a - 1] = b - 1;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// +1 or -1.
    pub fn sign(&self) -> i64 {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All permutations of `S_n` in lexicographic order of image lists.
    pub fn all(n: usize) -> Vec<Permutation> {
        (0..factorial(n)).map(|r| Self::unrank(n, r)).collect()
    }

    /// Lexicographic rank of the image list.
    pub fn rank(&self) -> usize {
        rank_arrangement(&self.images)
    }

    pub fn unrank(n: usize, r: usize) -> Permutation {
        Permutation {
            images: unrank_arrangement(n, r),
        }
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lexicographic rank of an arrangement of `{0, .., len-1}`.
pub fn rank_arrangement(a: &[usize]) -> usize {
    let n = a.len();
    let mut used = vec![false; n];
    let mut r = 0;
    for (pos, &x) in a.iter().enumerate() {
        let smaller = (0..x).filter(|&y| !used[y]).count();
        r += smaller * factorial(n - 1 - pos);
        used[x] = true;
    }
    r
}

pub fn unrank_arrangement(n: usize, mut r: usize) -> Vec<usize> {
    let mut avail: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for pos in 0..n {
        let f = factorial(n - 1 - pos);
        let k = r / f;
        r %= f;
        out.push(avail.remove(k));
    }
    out
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based points; the identity prints as `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut any = false;
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.images[i];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// All permutations of the listed points, as elements of `S_n` fixing everything else.
pub fn permutations_of(n: usize, points: &[usize]) -> Vec<Permutation> {
    let k = points.len();
    (0..factorial(k))
        .map(|r| {
            let arr = unrank_arrangement(k, r);
            let mut images: Vec<usize> = (0..n).collect();
            for (i, &j) in arr.iter().enumerate() {
                images[points[i]] = points[j];
            }
            Permutation { images }
        })
        .collect()
}
