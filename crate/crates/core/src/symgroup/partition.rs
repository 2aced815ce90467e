use std::fmt;

use serde::{Serialize, Serializer};

use super::perm::{factorial, permutations_of, Permutation};
use crate::error::{Error, Result};

/// A partition of `n`: weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::malformed(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::malformed(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn height(&self) -> usize {
        self.parts.len()
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.parts.first().copied().unwrap_or(0);
        Partition {
            parts: (0..width)
                .map(|c| self.parts.iter().filter(|&&p| p > c).count())
                .collect(),
        }
    }

    /// `Σ_{i ≤ rows} λ_i`, the number of boxes in the first `rows` rows.
    pub fn leading_sum(&self, rows: usize) -> usize {
        self.parts.iter().take(rows).sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(&self.parts)
    }
}

/// Partitions of `n` with at most `max_height` rows, in decreasing lexicographic order.
pub fn partitions(n: usize, max_height: Option<usize>) -> Vec<Partition> {
    fn go(rest: usize, cap: usize, rows_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if rows_left == 0 {
            return;
        }
        for p in (1..=cap.min(rest)).rev() {
            cur.push(p);
            go(rest - p, p, rows_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, max_height.unwrap_or(n.max(1)), &mut Vec::new(), &mut out);
    out
}

/// Number of standard tableaux of shape `λ` by the hook length formula.
pub fn hook_dim(lambda: &Partition) -> u128 {
    let conj = lambda.conjugate();
    let mut num: u128 = (1..=lambda.size() as u128).product();
    let mut den: u128 = 1;
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            let hook = (row - j - 1) + (conj.parts()[j] - i - 1) + 1;
            den *= hook as u128;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
    }
    num / den
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A Young tableau filled with `0..n` (one entry per box, rows listed top down).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YoungTableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
}

impl YoungTableau {
    /// The standard tableau filled row by row: first row `0..λ_1`, and so on.
    pub fn row_reading(shape: &Partition) -> Self {
        let mut next = 0;
        let rows = shape
            .parts()
            .iter()
            .map(|&len| {
                let row: Vec<usize> = (next..next + len).collect();
                next += len;
                row
            })
            .collect();
        YoungTableau {
            shape: shape.clone(),
            rows,
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn columns(&self) -> Vec<Vec<usize>> {
        let width = self.rows.first().map_or(0, |r| r.len());
        (0..width)
            .map(|c| self.rows.iter().filter_map(|r| r.get(c).copied()).collect())
            .collect()
    }

    /// Permutations preserving every row.
    pub fn row_group(&self) -> Vec<Permutation> {
        product_of_groups(self.shape.size(), &self.rows)
    }

    /// Permutations preserving every column.
    pub fn column_group(&self) -> Vec<Permutation> {
        product_of_groups(self.shape.size(), &self.columns())
    }
}

fn product_of_groups(n: usize, blocks: &[Vec<usize>]) -> Vec<Permutation> {
    let mut acc = vec![Permutation::identity(n)];
    for b in blocks.iter().filter(|b| b.len() > 1) {
        let local = permutations_of(n, b);
        acc = acc
            .iter()
            .flat_map(|g| local.iter().map(move |h| g.compose(h)))
            .collect();
    }
    debug_assert_eq!(acc.len(), blocks.iter().map(|b| factorial(b.len())).product::<usize>());
    acc
}
