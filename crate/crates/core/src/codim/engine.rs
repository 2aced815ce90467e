//! Modular evaluation of right-normed words at tuples of basis elements.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::modular::{crt_primes, primes_needed, Modulus};
use crate::arith::rational::denominator_lcm;
use crate::arith::Rational;
use crate::freelie::{basis_index, basis_size};
use crate::lie::LieAlgebra;
use crate::symgroup::perm::permutations_of;
use crate::symgroup::Permutation;

/// Structure constants scaled to integers by the common denominator `c`.
///
/// A word of degree `n` evaluated in the scaled algebra equals `c^(n-1)` times
/// its value in the original algebra, so zero tests and ranks carry over.
#[derive(Debug, Clone)]
pub(crate) struct IntegerAlgebra {
    dim: usize,
    /// `(i, j, k, c)` with `[e_i, e_j] = Σ c e_k`, over all ordered pairs.
    consts: Vec<(usize, usize, usize, BigInt)>,
    /// `max_{i,j} Σ_k |c_ijk|`, so `|[x, y]|_1 ≤ gamma |x|_1 |y|_1`.
    gamma: BigInt,
}

impl IntegerAlgebra {
    pub(crate) fn new(l: &LieAlgebra) -> Self {
        let d = l.dim();
        let scale = denominator_lcm((0..d).flat_map(|i| (0..d).flat_map(move |j| l.basis_bracket(i, j).iter())));
        let scale = Rational::from_integer(scale);
        let mut consts = Vec::new();
        let mut gamma = BigInt::zero();
        for i in 0..d {
            for j in 0..d {
                let mut row_sum = BigInt::zero();
                for (k, c) in l.basis_bracket(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        let v = (c * &scale).to_integer();
                        row_sum += v.abs();
                        consts.push((i, j, k, v));
                    }
                }
                if row_sum > gamma {
                    gamma = row_sum;
                }
            }
        }
        IntegerAlgebra { dim: d, consts, gamma }
    }

    /// Bound on every coordinate of a degree-`n` basis word value.
    pub(crate) fn word_bound(&self, n: usize) -> BigInt {
        num_traits::pow(self.gamma.clone(), n.saturating_sub(1)).max(BigInt::one())
    }

    pub(crate) fn reduce(&self, m: Modulus) -> ModAlgebra {
        let mut ad = vec![Vec::new(); self.dim];
        for (i, j, k, c) in &self.consts {
            let r = m.from_bigint(c);
            if r != 0 {
                ad[*i].push((*j, *k, r));
            }
        }
        ModAlgebra { m, dim: self.dim, ad }
    }

    /// Reductions modulo enough fixed primes to decide whether an integer of
    /// absolute value at most `bound` is zero.
    pub(crate) fn reductions(&self, bound: &BigInt) -> Vec<ModAlgebra> {
        crt_primes(primes_needed(bound))
            .into_iter()
            .map(|p| self.reduce(Modulus::new(p)))
            .collect()
    }
}

/// The algebra modulo a prime, with sparse left multiplications by basis elements.
#[derive(Debug, Clone)]
pub(crate) struct ModAlgebra {
    m: Modulus,
    dim: usize,
    /// `ad[i]` lists `(j, k, c)` with `[e_i, e_j]` having `e_k`-coordinate `c`.
    ad: Vec<Vec<(usize, usize, u64)>>,
}

impl ModAlgebra {
    pub(crate) fn modulus(&self) -> Modulus {
        self.m
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    /// `out = [e_i, v]`.
    #[inline]
    pub(crate) fn left_mul(&self, i: usize, v: &[u64], out: &mut [u64]) {
        out.fill(0);
        for &(j, k, c) in &self.ad[i] {
            if v[j] != 0 {
                out[k] = self.m.add(out[k], self.m.mul(c, v[j]));
            }
        }
    }

    /// Value of the right-normed word `x_{w0}(x_{w1}(..x_{w(n-1)}))` at `x_i = e_{tuple[i]}`.
    pub(crate) fn eval_word(&self, letters: &[usize], tuple: &[usize]) -> Vec<u64> {
        let (&last, rest) = letters.split_last().expect("nonempty word");
        let mut cur = vec![0u64; self.dim];
        cur[tuple[last]] = 1;
        let mut next = vec![0u64; self.dim];
        for &x in rest.iter().rev() {
            self.left_mul(tuple[x], &cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
            if cur.iter().all(|&c| c == 0) {
                break;
            }
        }
        cur
    }
}

/// Evaluates all canonical basis words of `P_n` at once by sharing inner brackets.
///
/// Words `x_{w0}(..(x_{w(n-2)} x_n))` are built from the inside out, so words
/// with a common suffix share work; the traversal visits about `e (n-1)!` nodes.
#[derive(Debug, Clone)]
pub(crate) struct BasisTrie {
    n: usize,
    /// Canonical index of each leaf in traversal order.
    leaf_index: Vec<usize>,
    /// `subtree[k]` = number of leaves below a node with `k` letters placed.
    subtree: Vec<usize>,
}

impl BasisTrie {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n >= 1);
        let m = n - 1;
        let mut leaf_index = Vec::with_capacity(basis_size(n));
        let mut word = vec![0usize; n];
        word[m] = m;
        fn walk(pos: usize, used: u32, m: usize, word: &mut Vec<usize>, out: &mut Vec<usize>) {
            if pos == 0 {
                out.push(basis_index(word));
                return;
            }
            for x in 0..m {
                if used & (1 << x) == 0 {
                    word[pos - 1] = x;
                    walk(pos - 1, used | (1 << x), m, word, out);
                }
            }
        }
        walk(m, 0, m, &mut word, &mut leaf_index);
        let subtree = (0..=m).map(|k| crate::symgroup::factorial(m - k)).collect();
        BasisTrie {
            n,
            leaf_index,
            subtree,
        }
    }

    pub(crate) fn degree(&self) -> usize {
        self.n
    }

    pub(crate) fn size(&self) -> usize {
        self.leaf_index.len()
    }

    /// Writes the value of basis word `b` into `out[b * dim .. (b + 1) * dim]`.
    pub(crate) fn eval_all(&self, alg: &ModAlgebra, tuple: &[usize], out: &mut [u64]) {
        let d = alg.dim();
        let m = self.n - 1;
        out.fill(0);
        let mut levels = vec![vec![0u64; d]; self.n];
        levels[0][tuple[m]] = 1;
        let mut leaf = 0usize;
        self.walk(alg, tuple, 0, 0, &mut levels, &mut leaf, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        alg: &ModAlgebra,
        tuple: &[usize],
        depth: usize,
        used: u32,
        levels: &mut [Vec<u64>],
        leaf: &mut usize,
        out: &mut [u64],
    ) {
        let d = alg.dim();
        let m = self.n - 1;
        if levels[depth].iter().all(|&c| c == 0) {
            *leaf += self.subtree[depth];
            return;
        }
        if depth == m {
            let b = self.leaf_index[*leaf];
            out[b * d..(b + 1) * d].copy_from_slice(&levels[depth]);
            *leaf += 1;
            return;
        }
        for x in 0..m {
            if used & (1 << x) != 0 {
                continue;
            }
            let (lo, hi) = levels.split_at_mut(depth + 1);
            alg.left_mul(tuple[x], &lo[depth], &mut hi[0]);
            self.walk(alg, tuple, depth + 1, used | (1 << x), levels, leaf, out);
        }
    }
}

/// Decodes tuple number `t` (lexicographic, first variable most significant).
pub(crate) fn decode_tuple(mut t: u128, n: usize, base: usize, out: &mut [usize]) {
    for i in (0..n).rev() {
        out[i] = (t % base as u128) as usize;
        t /= base as u128;
    }
}

pub(crate) fn tuple_count(base: usize, n: usize) -> Option<u128> {
    (base as u128).checked_pow(n as u32)
}

/// Evaluation points sufficient for polynomials alternating on `sets`: the
/// entries on each set are strictly increasing, all other variables are free.
///
/// An alternating multilinear function vanishes when two variables of one set
/// receive the same basis element and changes sign under reordering, so it is
/// an identity iff it vanishes at these points.
pub(crate) struct ReducedTuples {
    n: usize,
    dim: usize,
    sets: Vec<Vec<usize>>,
    free: Vec<usize>,
    choices: Vec<Vec<Vec<usize>>>,
}

impl ReducedTuples {
    pub(crate) fn new(n: usize, dim: usize, sets: &[Vec<usize>]) -> Self {
        let mut in_set = vec![false; n];
        for s in sets {
            for &x in s {
                in_set[x] = true;
            }
        }
        ReducedTuples {
            n,
            dim,
            sets: sets.to_vec(),
            free: (0..n).filter(|&i| !in_set[i]).collect(),
            choices: sets.iter().map(|s| combinations(dim, s.len())).collect(),
        }
    }

    /// Number of reduced points, or `None` on overflow.
    pub(crate) fn count(&self) -> Option<u128> {
        let mut total = tuple_count(self.dim, self.free.len())?;
        for c in &self.choices {
            total = total.checked_mul(c.len() as u128)?;
        }
        Some(total)
    }

    /// Point number `idx`: set choices vary slowest, free variables fastest.
    pub(crate) fn point(&self, idx: u128) -> Vec<usize> {
        let free_total = tuple_count(self.dim, self.free.len()).expect("count checked");
        let mut tuple = vec![0usize; self.n];
        let mut free_vals = vec![0usize; self.free.len()];
        decode_tuple(idx % free_total, self.free.len(), self.dim, &mut free_vals);
        for (&pos, &v) in self.free.iter().zip(&free_vals) {
            tuple[pos] = v;
        }
        let mut rest = idx / free_total;
        for (set, choice) in self.sets.iter().zip(&self.choices).rev() {
            let k = (rest % choice.len() as u128) as usize;
            rest /= choice.len() as u128;
            for (&pos, &v) in set.iter().zip(&choice[k]) {
                tuple[pos] = v;
            }
        }
        tuple
    }
}

/// Sorted `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// The signed permutations of the alternation group `Π Sym(S_j)`.
pub(crate) fn alternation_group(n: usize, sets: &[Vec<usize>]) -> Vec<(Permutation, i64)> {
    let mut acc = vec![(Permutation::identity(n), 1i64)];
    for s in sets {
        let local = permutations_of(n, s);
        acc = acc
            .iter()
            .flat_map(|(g, sg)| local.iter().map(move |h| (g.compose(h), sg * h.sign())))
            .collect();
    }
    acc
}

/// `a ∘ τ`, the point at which `τ f` is evaluated: `(τ f)(a) = f(a ∘ τ)`.
pub(crate) fn permute_point(a: &[usize], tau: &Permutation) -> Vec<usize> {
    (0..a.len()).map(|i| a[tau.apply(i)]).collect()
}
