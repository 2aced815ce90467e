use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::modular::{failure_probability_bound, random_prime, rank_mod, Modulus};
use super::rational::{clear_denominators, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds from a list of rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::malformed(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(RationalMatrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::malformed(format!(
                "{} entries do not fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::malformed(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + self.get(i, i))
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut rows = self.to_rows();
        let pivots = rref_in_place(&mut rows, self.cols);
        rows.truncate(pivots.len());
        let m = RationalMatrix::from_rows(self.cols, rows).expect("shape preserved");
        (m, pivots)
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f).clone();
                }
                v
            })
            .collect()
    }

    /// Inverse of a square matrix, if it is nonsingular.
    pub fn inverse(&self) -> Option<RationalMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let pivots = rref_in_place(&mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let data = rows.into_iter().flat_map(|r| r[n..].to_vec()).collect();
        Some(RationalMatrix::from_data(n, n, data).expect("square"))
    }
}

/// Gauss-Jordan on a list of rows; returns pivot columns. Nonzero rows come first.
pub(crate) fn rref_in_place(rows: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut().skip(c) {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = &pivot_row[c];
        for row in tail.iter_mut() {
            let f = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = piv * &row[j] - &f * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = head[r][c].clone();
        r += 1;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum RankMode {
    Exact,
    /// Maximum rank over `trials` random primes of `prime_bits` bits.
    Modular {
        prime_bits: u32,
        trials: u32,
        seed: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub exact: bool,
    pub primes: Vec<u64>,
    /// Probability that the reported rank is below the true rank.
    pub failure_bound: f64,
}

/// Rank over the rationals, exactly or as a randomized modular lower bound.
pub fn rank(m: &RationalMatrix, mode: RankMode) -> Result<RankReport> {
    let int_rows: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| clear_denominators(m.row(i))).collect();
    match mode {
        RankMode::Exact => Ok(RankReport {
            rank: integer_rank(int_rows),
            exact: true,
            primes: vec![],
            failure_bound: 0.0,
        }),
        RankMode::Modular {
            prime_bits,
            trials,
            seed,
        } => {
            if !(31..=62).contains(&prime_bits) {
                return Err(Error::malformed("modular rank needs primes above 2^30 (31..=62 bits)"));
            }
            if trials == 0 {
                return Err(Error::malformed("modular rank needs at least one trial"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best = 0;
            let mut primes = Vec::new();
            for _ in 0..trials {
                let p = random_prime(prime_bits, &mut rng);
                let md = Modulus::new(p);
                let reduced: Vec<Vec<u64>> = int_rows
                    .iter()
                    .map(|r| r.iter().map(|x| md.from_bigint(x)).collect())
                    .collect();
                best = best.max(rank_mod(md, &reduced));
                primes.push(p);
            }
            // Hadamard: any minor is bounded by the product of row norms.
            let minor_bits: u64 = int_rows
                .iter()
                .map(|r| {
                    let sq: BigInt = r.iter().map(|x| x * x).sum();
                    sq.bits() / 2 + 1
                })
                .sum();
            Ok(RankReport {
                rank: best,
                exact: false,
                primes,
                failure_bound: failure_probability_bound(minor_bits, prime_bits, trials),
            })
        }
    }
}

/// Largest absolute entry of an integer matrix, as a bit count.
pub fn max_bits(rows: &[Vec<BigInt>]) -> u64 {
    rows.iter()
        .flat_map(|r| r.iter())
        .map(|x| x.abs().bits())
        .max()
        .unwrap_or(0)
}
