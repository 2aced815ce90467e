//! Evaluation of multilinear polynomials, identity tests, codimensions,
//! cocharacters and Capelli checks.
//!
//! Exact ranks use the Gram matrix `G = M Mᵀ` of the evaluation matrix `M`
//! (rows: basis monomials of `P_n`, columns: coordinates of values at basis
//! tuples). Over the rationals `rank G = rank M`, and `G` is only
//! `(n-1)! x (n-1)!`, so it is accumulated modulo several primes and recovered
//! exactly by Chinese remaindering from an a-priori entry bound.

pub(crate) mod engine;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::modular::{
    crt_primes, crt_symmetric, failure_probability_bound, primes_needed, random_prime, rank_mod, ModEchelon, Modulus,
};
use crate::arith::rational::clear_denominators;
use crate::arith::{integer_rank, Rational, RationalMatrix};
use crate::error::{Error, Result};
use crate::freelie::{basis_letters, basis_size, AltSpec, MultilinearPolynomial};
use crate::lie::LieAlgebra;
use crate::symgroup::{act, hook_dim, partitions, symmetrizer, Partition};
use engine::{alternation_group, combinations, decode_tuple, permute_point, tuple_count, BasisTrie, IntegerAlgebra, ModAlgebra, ReducedTuples};


/// Work limits for exhaustive computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Maximum number of tuple evaluations in one operation.
    pub tuples: u128,
    /// Largest Gram matrix side accepted by exact rank computations.
    pub exact_rank_dim: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            tuples: 100_000_000,
            exact_rank_dim: 120,
        }
    }
}

impl Budget {
    /// No limit on work.
    pub fn unlimited() -> Self {
        Budget {
            tuples: u128::MAX,
            ..Budget::default()
        }
    }

    pub(crate) fn check_work(&self, what: &str, required: u128) -> Result<()> {
        if required > self.tuples {
            return Err(Error::BudgetExceeded {
                what: what.to_string(),
                required,
                budget: self.tuples,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum IdentityMode {
    /// All evaluation points; sound and complete.
    Exhaustive,
    /// `count` random points; can only refute.
    Sampled { count: u64, seed: u64 },
}

/// A point where a polynomial does not vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Basis element index assigned to each variable.
    pub tuple: Vec<usize>,
    /// Basis monomial with a nonzero value, for checks over all of `P_n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial: Option<usize>,
    /// Alternating set involved, for Capelli checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityVerdict {
    /// In sampled mode `true` only means "not refuted".
    pub holds: bool,
    pub exhaustive: bool,
    pub points_checked: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl IdentityVerdict {
    /// `holds` with the exhaustive/sampled distinction spelled out.
    pub fn describe(&self) -> &'static str {
        match (self.holds, self.exhaustive) {
            (false, _) => "refuted",
            (true, true) => "identity",
            (true, false) => "not refuted",
        }
    }
}

/// Exact value of `f` at a tuple of algebra elements.
pub fn evaluate(f: &MultilinearPolynomial, tuple: &[Vec<Rational>], l: &LieAlgebra) -> Result<Vec<Rational>> {
    let n = f.degree();
    if tuple.len() != n {
        return Err(Error::malformed(format!(
            "a degree-{n} polynomial needs {n} arguments, got {}",
            tuple.len()
        )));
    }
    if let Some(x) = tuple.iter().find(|x| x.len() != l.dim()) {
        return Err(Error::malformed(format!(
            "argument of length {} in a {}-dimensional algebra",
            x.len(),
            l.dim()
        )));
    }
    let mut total = vec![Rational::zero(); l.dim()];
    for (&i, c) in f.terms() {
        let letters = basis_letters(n, i);
        let (&last, rest) = letters.split_last().expect("n >= 1");
        let mut v = tuple[last].clone();
        for &x in rest.iter().rev() {
            v = l.bracket_unchecked(&tuple[x], &v);
        }
        for (t, x) in total.iter_mut().zip(v) {
            *t += c * x;
        }
    }
    Ok(total)
}

/// Evaluates an alternated target at reduced points modulo enough primes to decide zero.
pub(crate) struct Checker {
    algs: Vec<ModAlgebra>,
    trie: Option<BasisTrie>,
    /// Per prime, the sparse coefficients; `None` checks every basis monomial separately.
    poly: Option<Vec<Vec<(usize, u64)>>>,
    letters: Vec<Vec<usize>>,
    group: Vec<(crate::symgroup::Permutation, i64)>,
}

impl Checker {
    pub(crate) fn new(int: &IntegerAlgebra, n: usize, poly: Option<&[(usize, BigInt)]>, sets: &[Vec<usize>]) -> Self {
        let group = alternation_group(n, sets);
        let mut bound = int.word_bound(n) * BigInt::from(group.len());
        if let Some(p) = poly {
            let l1: BigInt = p.iter().map(|(_, c)| c.abs()).sum();
            bound *= l1.max(BigInt::from(1));
        }
        let algs = int.reductions(&bound);
        let dense = poly.is_none_or(|p| p.len() * n > 2 * basis_size(n));
        let trie = dense.then(|| BasisTrie::new(n));
        let letters = match (poly, dense) {
            (Some(p), false) => p.iter().map(|(i, _)| basis_letters(n, *i)).collect(),
            _ => Vec::new(),
        };
        let poly = poly.map(|p| {
            algs.iter()
                .map(|a| p.iter().map(|(i, c)| (*i, a.modulus().from_bigint(c))).collect())
                .collect()
        });
        Checker {
            algs,
            trie,
            poly,
            letters,
            group,
        }
    }

    pub(crate) fn group_order(&self) -> usize {
        self.group.len()
    }

    /// `None` if the target vanishes at `point`, else a nonzero monomial
    /// index (always `0` for polynomial targets).
    pub(crate) fn refute(&self, point: &[usize]) -> Option<usize> {
        for (pi, alg) in self.algs.iter().enumerate() {
            let m = alg.modulus();
            let d = alg.dim();
            match &self.poly {
                None => {
                    let trie = self.trie.as_ref().expect("trie for all monomials");
                    let mut acc = vec![0u64; trie.size() * d];
                    let mut buf = vec![0u64; trie.size() * d];
                    for (tau, s) in &self.group {
                        trie.eval_all(alg, &permute_point(point, tau), &mut buf);
                        accumulate(m, &mut acc, &buf, *s);
                    }
                    if let Some(pos) = acc.iter().position(|&x| x != 0) {
                        return Some(pos / d);
                    }
                }
                Some(per_prime) => {
                    let coeffs = &per_prime[pi];
                    let mut acc = vec![0u64; d];
                    let mut buf = vec![0u64; self.trie.as_ref().map_or(0, |t| t.size() * d)];
                    for (tau, s) in &self.group {
                        let q = permute_point(point, tau);
                        let mut val = vec![0u64; d];
                        if let Some(trie) = &self.trie {
                            trie.eval_all(alg, &q, &mut buf);
                            for &(i, c) in coeffs {
                                for k in 0..d {
                                    val[k] = m.add(val[k], m.mul(c, buf[i * d + k]));
                                }
                            }
                        } else {
                            for (&(_, c), letters) in coeffs.iter().zip(&self.letters) {
                                let w = alg.eval_word(letters, &q);
                                for k in 0..d {
                                    val[k] = m.add(val[k], m.mul(c, w[k]));
                                }
                            }
                        }
                        accumulate(m, &mut acc, &val, *s);
                    }
                    if acc.iter().any(|&x| x != 0) {
                        return Some(0);
                    }
                }
            }
        }
        None
    }
}

fn accumulate(m: Modulus, acc: &mut [u64], v: &[u64], sign: i64) {
    for (a, &x) in acc.iter_mut().zip(v) {
        *a = if sign > 0 { m.add(*a, x) } else { m.sub(*a, x) };
    }
}

/// Scans reduced points for a refutation.
pub(crate) fn scan(
    checker: &Checker,
    points: &ReducedTuples,
    mode: IdentityMode,
    budget: &Budget,
) -> Result<IdentityVerdict> {
    let count = points.count().ok_or_else(|| Error::BudgetExceeded {
        what: "evaluation points".into(),
        required: u128::MAX,
        budget: budget.tuples,
    })?;
    let per_point = checker.group_order() as u128;
    match mode {
        IdentityMode::Exhaustive => {
            budget.check_work("tuple evaluations", count.saturating_mul(per_point))?;
            let found = (0..count as u64)
                .into_par_iter()
                .map(|i| {
                    let p = points.point(i as u128);
                    checker.refute(&p).map(|w| (p, w))
                })
                .find_first(|r| r.is_some())
                .flatten();
            Ok(verdict(found, true, count))
        }
        IdentityMode::Sampled { count: samples, seed } => {
            budget.check_work("tuple evaluations", (samples as u128).saturating_mul(per_point))?;
            if count == 0 {
                return Ok(verdict(None, true, 0));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let picks: Vec<u128> = (0..samples).map(|_| rng.gen_range(0..count)).collect();
            let found = picks
                .par_iter()
                .map(|&i| {
                    let p = points.point(i);
                    checker.refute(&p).map(|w| (p, w))
                })
                .find_first(|r| r.is_some())
                .flatten();
            Ok(verdict(found, false, samples as u128))
        }
    }
}

fn verdict(found: Option<(Vec<usize>, usize)>, exhaustive: bool, checked: u128) -> IdentityVerdict {
    IdentityVerdict {
        holds: found.is_none(),
        exhaustive,
        points_checked: checked,
        counterexample: found.map(|(tuple, _)| Counterexample {
            tuple,
            monomial: None,
            set: None,
        }),
    }
}

fn integer_terms(f: &MultilinearPolynomial) -> Vec<(usize, BigInt)> {
    let (idx, vals): (Vec<usize>, Vec<Rational>) = f.terms().iter().map(|(i, c)| (*i, c.clone())).unzip();
    idx.into_iter().zip(clear_denominators(&vals)).collect()
}

/// Whether `f` vanishes at every tuple of basis elements (hence everywhere, by multilinearity).
pub fn is_identity(f: &MultilinearPolynomial, l: &LieAlgebra, mode: IdentityMode, budget: &Budget) -> Result<IdentityVerdict> {
    alternated_is_identity(f, &AltSpec::empty(), l, mode, budget)
}

/// Whether the alternation of `f` over `spec` is an identity, without expanding it.
///
/// Only points whose entries increase strictly along each alternating set are
/// evaluated; this is complete because the alternated polynomial is skew in
/// each set.
pub fn alternated_is_identity(
    f: &MultilinearPolynomial,
    spec: &AltSpec,
    l: &LieAlgebra,
    mode: IdentityMode,
    budget: &Budget,
) -> Result<IdentityVerdict> {
    let n = f.degree();
    spec.check_degree(n)?;
    if f.is_zero() || n == 0 {
        return Ok(verdict(None, matches!(mode, IdentityMode::Exhaustive), 0));
    }
    let int = IntegerAlgebra::new(l);
    let terms = integer_terms(f);
    let checker = Checker::new(&int, n, Some(&terms), spec.sets());
    let points = ReducedTuples::new(n, l.dim(), spec.sets());
    scan(&checker, &points, mode, budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapelliVerdict {
    pub rank: usize,
    pub n: usize,
    pub holds: bool,
    pub exhaustive: bool,
    pub points_checked: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

/// Whether every polynomial of `P_n` alternating on some `t` variables is an identity.
///
/// For each `t`-subset `S` the alternations of the basis monomials over `S`
/// span the polynomials alternating on `S`, so checking them all is complete.
pub fn capelli_holds(l: &LieAlgebra, t: usize, n: usize, mode: IdentityMode, budget: &Budget) -> Result<CapelliVerdict> {
    if t == 0 || t > n {
        return Err(Error::malformed(format!("Capelli rank {t} needs 1 <= t <= n = {n}")));
    }
    let int = IntegerAlgebra::new(l);
    let subsets = combinations(n, t);
    let mut checked = 0u128;
    let mut exhaustive = matches!(mode, IdentityMode::Exhaustive);
    let per_set = ReducedTuples::new(n, l.dim(), &[subsets[0].clone()])
        .count()
        .unwrap_or(u128::MAX)
        .saturating_mul(crate::symgroup::factorial(t) as u128);
    if exhaustive {
        budget.check_work("tuple evaluations", per_set.saturating_mul(subsets.len() as u128))?;
    }
    for (k, set) in subsets.iter().enumerate() {
        let sets = vec![set.clone()];
        let checker = Checker::new(&int, n, None, &sets);
        let points = ReducedTuples::new(n, l.dim(), &sets);
        let local_mode = match mode {
            IdentityMode::Sampled { count, seed } => IdentityMode::Sampled {
                count,
                seed: seed.wrapping_add(k as u64),
            },
            m => m,
        };
        let count = points.count().unwrap_or(u128::MAX);
        let found = match local_mode {
            IdentityMode::Exhaustive => (0..count as u64)
                .into_par_iter()
                .map(|i| {
                    let p = points.point(i as u128);
                    checker.refute(&p).map(|w| (p, w))
                })
                .find_first(|r| r.is_some())
                .flatten(),
            IdentityMode::Sampled { count: samples, seed } => {
                exhaustive = false;
                if count == 0 {
                    None
                } else {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..samples).map(|_| points.point(rng.gen_range(0..count))).find_map(|p| {
                        checker.refute(&p).map(|w| (p, w))
                    })
                }
            }
        };
        checked += match local_mode {
            IdentityMode::Exhaustive => count,
            IdentityMode::Sampled { count, .. } => count as u128,
        };
        if let Some((tuple, w)) = found {
            return Ok(CapelliVerdict {
                rank: t,
                n,
                holds: false,
                exhaustive,
                points_checked: checked,
                counterexample: Some(Counterexample {
                    tuple,
                    monomial: Some(w),
                    set: Some(set.clone()),
                }),
            });
        }
    }
    Ok(CapelliVerdict {
        rank: t,
        n,
        holds: true,
        exhaustive,
        points_checked: checked,
        counterexample: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum CodimMode {
    /// Exact rank over the rationals from all basis tuples.
    Exact,
    /// Maximum rank modulo `trials` random primes; a lower bound that is exact
    /// except with the reported probability.
    Modular { prime_bits: u32, trials: u32, seed: u64 },
    /// Rank of a seeded sample of columns modulo a prime, stopped after the
    /// rank is unchanged for `plateau` tuples (default `(n-1)!`); a lower bound.
    Sampled { seed: u64, plateau: Option<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certainty {
    Exact,
    Probabilistic,
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codimension {
    pub n: usize,
    pub value: usize,
    pub certainty: Certainty,
    pub tuples: u128,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_bound: Option<f64>,
}

/// Evaluation points used for a Gram matrix.
enum TupleSet {
    All(u64),
    List(Vec<Vec<usize>>),
}

impl TupleSet {
    fn len(&self) -> u64 {
        match self {
            TupleSet::All(t) => *t,
            TupleSet::List(v) => v.len() as u64,
        }
    }

    fn get(&self, i: u64, n: usize, base: usize, out: &mut [usize]) {
        match self {
            TupleSet::All(_) => decode_tuple(i as u128, n, base, out),
            TupleSet::List(v) => out.copy_from_slice(&v[i as usize]),
        }
    }
}

/// `G = M Mᵀ` modulo the prime of `alg`, as a dense `R x R` row-major array.
fn gram_mod(alg: &ModAlgebra, trie: &BasisTrie, tuples: &TupleSet) -> Vec<u64> {
    let r = trie.size();
    let d = alg.dim();
    let n = trie.degree();
    let m = alg.modulus();
    let p = m.prime() as u128;
    let total = tuples.len();
    let chunks = total.clamp(1, 256);
    let partial = |c: u64| -> Vec<u64> {
        let lo = total * c / chunks;
        let hi = total * (c + 1) / chunks;
        let mut g = vec![0u64; r * r];
        let mut vals = vec![0u64; r * d];
        let mut tuple = vec![0usize; n];
        let mut nz = Vec::with_capacity(r);
        for t in lo..hi {
            tuples.get(t, n, d, &mut tuple);
            trie.eval_all(alg, &tuple, &mut vals);
            nz.clear();
            nz.extend((0..r).filter(|&i| vals[i * d..(i + 1) * d].iter().any(|&x| x != 0)));
            for (a, &i) in nz.iter().enumerate() {
                let vi = &vals[i * d..(i + 1) * d];
                for &j in &nz[a..] {
                    let vj = &vals[j * d..(j + 1) * d];
                    let s: u128 = vi.iter().zip(vj).map(|(&x, &y)| x as u128 * y as u128).sum();
                    let e = &mut g[i * r + j];
                    *e = ((*e as u128 + s) % p) as u64;
                }
            }
        }
        g
    };
    let mut g = (0..chunks)
        .into_par_iter()
        .map(partial)
        .reduce(
            || vec![0u64; r * r],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = m.add(*x, y);
                }
                a
            },
        );
    for i in 0..r {
        for j in 0..i {
            g[i * r + j] = g[j * r + i];
        }
    }
    g
}

/// A Gram matrix known exactly or modulo some primes.
enum Gram {
    Exact(Vec<Vec<BigInt>>),
    Modular(Vec<(Modulus, Vec<u64>)>),
}

struct GramRun {
    gram: Gram,
    certainty: Certainty,
    tuples: u128,
    primes: Vec<u64>,
    prime_bits: u32,
    trials: u32,
    /// Bit size bound on any minor of `G`.
    minor_bits: u64,
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::malformed("degree must be at least 1"));
    }
    if n > 12 {
        return Err(Error::BudgetExceeded {
            what: "degree".into(),
            required: n as u128,
            budget: 12,
        });
    }
    Ok(())
}

fn all_tuples(l: &LieAlgebra, n: usize, budget: &Budget) -> Result<u64> {
    let total = tuple_count(l.dim(), n).unwrap_or(u128::MAX);
    budget.check_work("basis tuples", total)?;
    Ok(total as u64)
}

fn build_gram(l: &LieAlgebra, n: usize, mode: CodimMode, budget: &Budget) -> Result<GramRun> {
    let int = IntegerAlgebra::new(l);
    let trie = BasisTrie::new(n);
    let r = trie.size();
    let d = l.dim();
    let entry_bound = |cols: u128| -> BigInt {
        let b = int.word_bound(n);
        &b * &b * BigInt::from(cols.max(1))
    };
    let minor_bits = |bound: &BigInt| -> u64 { r as u64 * (bound.bits() + (r as f64).log2().ceil() as u64 / 2 + 1) };
    match mode {
        CodimMode::Exact => {
            if r > budget.exact_rank_dim {
                return Err(Error::BudgetExceeded {
                    what: "exact rank dimension".into(),
                    required: r as u128,
                    budget: budget.exact_rank_dim as u128,
                });
            }
            let total = all_tuples(l, n, budget)?;
            let bound = entry_bound(total as u128 * d as u128);
            let primes = crt_primes(primes_needed(&bound));
            let tuples = TupleSet::All(total);
            let residues: Vec<Vec<u64>> = primes
                .iter()
                .map(|&p| gram_mod(&int.reduce(Modulus::new(p)), &trie, &tuples))
                .collect();
            let mut g = vec![vec![BigInt::zero(); r]; r];
            let mut res = vec![0u64; primes.len()];
            for i in 0..r {
                for j in 0..r {
                    for (k, rs) in residues.iter().enumerate() {
                        res[k] = rs[i * r + j];
                    }
                    g[i][j] = crt_symmetric(&res, &primes);
                }
            }
            Ok(GramRun {
                gram: Gram::Exact(g),
                certainty: Certainty::Exact,
                tuples: total as u128,
                primes,
                prime_bits: 31,
                trials: 0,
                minor_bits: 0,
            })
        }
        CodimMode::Modular {
            prime_bits,
            trials,
            seed,
        } => {
            if !(31..=62).contains(&prime_bits) {
                return Err(Error::malformed("modular mode needs prime bits in 31..=62"));
            }
            if trials == 0 {
                return Err(Error::malformed("modular mode needs at least one trial"));
            }
            let total = all_tuples(l, n, budget)?;
            let tuples = TupleSet::All(total);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut grams = Vec::new();
            let mut primes = Vec::new();
            for _ in 0..trials {
                let p = random_prime(prime_bits, &mut rng);
                let m = Modulus::new(p);
                grams.push((m, gram_mod(&int.reduce(m), &trie, &tuples)));
                primes.push(p);
            }
            Ok(GramRun {
                gram: Gram::Modular(grams),
                certainty: Certainty::Probabilistic,
                tuples: total as u128,
                primes,
                prime_bits,
                trials,
                minor_bits: minor_bits(&entry_bound(total as u128 * d as u128)),
            })
        }
        CodimMode::Sampled { seed, plateau } => {
            let (used, _) = sample_columns(&int, &trie, l.dim(), n, seed, plateau.unwrap_or(r), budget)?;
            let p = crt_primes(1)[0];
            let m = Modulus::new(p);
            let count = used.len() as u128;
            let g = gram_mod(&int.reduce(m), &trie, &TupleSet::List(used));
            Ok(GramRun {
                gram: Gram::Modular(vec![(m, g)]),
                certainty: Certainty::LowerBound,
                tuples: count,
                primes: vec![p],
                prime_bits: 31,
                trials: 1,
                minor_bits: 0,
            })
        }
    }
}

/// Streams seeded random tuples into an echelon form modulo a fixed prime until
/// the rank is full or has not grown for `plateau` consecutive tuples.
fn sample_columns(
    int: &IntegerAlgebra,
    trie: &BasisTrie,
    dim: usize,
    n: usize,
    seed: u64,
    plateau: usize,
    budget: &Budget,
) -> Result<(Vec<Vec<usize>>, usize)> {
    let total = tuple_count(dim, n).unwrap_or(u128::MAX);
    let limit = total.min(budget.tuples);
    let m = Modulus::new(crt_primes(1)[0]);
    let alg = int.reduce(m);
    let r = trie.size();
    let mut ech = ModEchelon::new(m, r);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order: Option<Vec<u64>> = (total <= 1 << 20).then(|| {
        let mut v: Vec<u64> = (0..total as u64).collect();
        rand::seq::SliceRandom::shuffle(&mut v[..], &mut rng);
        v
    });
    let mut used = Vec::new();
    let mut vals = vec![0u64; r * dim];
    let mut stale = 0usize;
    let mut k: u128 = 0;
    while k < limit && !ech.is_full() && stale < plateau.max(1) {
        let t = match &order {
            Some(o) => o[k as usize] as u128,
            None => rng.gen_range(0..total),
        };
        k += 1;
        let mut tuple = vec![0usize; n];
        decode_tuple(t, n, dim, &mut tuple);
        trie.eval_all(&alg, &tuple, &mut vals);
        let mut grew = false;
        for c in 0..dim {
            let col: Vec<u64> = (0..r).map(|b| vals[b * dim + c]).collect();
            if col.iter().any(|&x| x != 0) {
                grew |= ech.insert(col);
            }
        }
        stale = if grew { 0 } else { stale + 1 };
        used.push(tuple);
    }
    Ok((used, ech.rank()))
}

fn gram_rank(run: &GramRun, transform: Option<&[Vec<i64>]>) -> usize {
    match &run.gram {
        Gram::Exact(g) => {
            let rows = match transform {
                None => g.clone(),
                Some(e) => multiply_exact(e, g),
            };
            integer_rank(rows)
        }
        Gram::Modular(list) => list
            .iter()
            .map(|(m, g)| {
                let r = (g.len() as f64).sqrt() as usize;
                let rows: Vec<Vec<u64>> = match transform {
                    None => g.chunks(r).map(|c| c.to_vec()).collect(),
                    Some(e) => multiply_mod(*m, e, g, r),
                };
                rank_mod(*m, &rows)
            })
            .max()
            .unwrap_or(0),
    }
}

fn multiply_exact(e: &[Vec<i64>], g: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    e.iter()
        .map(|row| {
            let mut out = vec![BigInt::zero(); g[0].len()];
            for (k, &c) in row.iter().enumerate() {
                if c != 0 {
                    for (o, x) in out.iter_mut().zip(&g[k]) {
                        *o += x * c;
                    }
                }
            }
            out
        })
        .collect()
}

fn multiply_mod(m: Modulus, e: &[Vec<i64>], g: &[u64], r: usize) -> Vec<Vec<u64>> {
    e.iter()
        .map(|row| {
            let mut out = vec![0u64; r];
            for (k, &c) in row.iter().enumerate() {
                if c != 0 {
                    let cm = m.from_i64(c);
                    for (o, &x) in out.iter_mut().zip(&g[k * r..(k + 1) * r]) {
                        *o = m.add(*o, m.mul(cm, x));
                    }
                }
            }
            out
        })
        .collect()
}

fn failure_bound(run: &GramRun) -> Option<f64> {
    (run.certainty == Certainty::Probabilistic)
        .then(|| failure_probability_bound(run.minor_bits, run.prime_bits, run.trials))
}

/// `c_n(L) = dim P_n / (P_n ∩ Id(L))`.
pub fn codimension(l: &LieAlgebra, n: usize, mode: CodimMode, budget: &Budget) -> Result<Codimension> {
    check_degree(n)?;
    if let CodimMode::Sampled { seed, plateau } = mode {
        let int = IntegerAlgebra::new(l);
        let trie = BasisTrie::new(n);
        let (used, rank) = sample_columns(&int, &trie, l.dim(), n, seed, plateau.unwrap_or(trie.size()), budget)?;
        return Ok(Codimension {
            n,
            value: rank,
            certainty: Certainty::LowerBound,
            tuples: used.len() as u128,
            primes: vec![crt_primes(1)[0]],
            failure_bound: None,
        });
    }
    let run = build_gram(l, n, mode, budget)?;
    let value = gram_rank(&run, None);
    if value > basis_size(n) {
        return Err(Error::Invariant(format!("c_{n} = {value} exceeds (n-1)!")));
    }
    Ok(Codimension {
        n,
        value,
        certainty: run.certainty,
        tuples: run.tuples,
        failure_bound: failure_bound(&run),
        primes: run.primes,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocharacterRow {
    pub partition: Partition,
    pub multiplicity: usize,
    pub dim: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CocharacterTable {
    pub n: usize,
    pub rows: Vec<CocharacterRow>,
    /// `l_n = Σ m_λ`.
    pub colength: usize,
    /// `Σ m_λ d_λ`.
    pub weighted_sum: u128,
    /// Codimension computed from the same evaluation data.
    pub codimension: usize,
    pub certainty: Certainty,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_bound: Option<f64>,
}

impl CocharacterTable {
    pub fn multiplicity(&self, parts: &[usize]) -> Option<usize> {
        self.rows
            .iter()
            .find(|r| r.partition.parts() == parts)
            .map(|r| r.multiplicity)
    }

    /// Checks `Σ m_λ d_λ = c_n`; exact tables must satisfy it.
    pub fn is_consistent(&self) -> bool {
        self.weighted_sum == self.codimension as u128
    }
}

/// Rows of `e_{T_λ}` acting on the canonical basis: row `j` holds the
/// coordinates of `e_{T_λ} b_j`.
pub(crate) fn symmetrizer_matrix(lambda: &Partition) -> Result<Vec<Vec<i64>>> {
    let n = lambda.size();
    let e = symmetrizer(lambda);
    (0..basis_size(n))
        .map(|j| {
            let img = act(&e, &MultilinearPolynomial::basis_element(n, j))?;
            img.to_dense()
                .iter()
                .map(|c| {
                    use num_traits::ToPrimitive;
                    c.to_integer()
                        .to_i64()
                        .ok_or_else(|| Error::Invariant("symmetrizer coefficient overflow".into()))
                })
                .collect()
        })
        .collect()
}

/// Multiplicities `m_λ = dim e_{T_λ} P_n(L)` of the `n`-th cocharacter.
///
/// Partitions with more rows than `dim L` get `m_λ = 0` without computation:
/// a polynomial alternating on more than `dim L` variables is an identity.
pub fn cocharacter(l: &LieAlgebra, n: usize, mode: CodimMode, budget: &Budget) -> Result<CocharacterTable> {
    check_degree(n)?;
    let run = build_gram(l, n, mode, budget)?;
    let codimension = gram_rank(&run, None);
    let mut rows = Vec::new();
    for lambda in partitions(n, None) {
        let dim = hook_dim(&lambda);
        let multiplicity = if lambda.height() > l.dim() || codimension == 0 {
            0
        } else {
            gram_rank(&run, Some(&symmetrizer_matrix(&lambda)?))
        };
        rows.push(CocharacterRow {
            partition: lambda,
            multiplicity,
            dim,
        });
    }
    let colength = rows.iter().map(|r| r.multiplicity).sum();
    let weighted_sum = rows.iter().map(|r| r.multiplicity as u128 * r.dim).sum();
    let table = CocharacterTable {
        n,
        rows,
        colength,
        weighted_sum,
        codimension,
        certainty: run.certainty,
        failure_bound: failure_bound(&run),
    };
    if table.certainty == Certainty::Exact && !table.is_consistent() {
        return Err(Error::Invariant(format!(
            "cocharacter sum {} differs from c_{n} = {codimension}",
            table.weighted_sum
        )));
    }
    Ok(table)
}

/// The evaluation matrix with exact rational entries, for small cases.
#[derive(Debug, Clone)]
pub struct EvaluationMatrix {
    pub n: usize,
    /// `(tuple, coordinate)` labels of the columns.
    pub columns: Vec<(Vec<usize>, usize)>,
    /// Rows indexed by canonical basis monomials.
    pub matrix: RationalMatrix,
}

impl EvaluationMatrix {
    pub fn rank(&self) -> usize {
        self.matrix.rref().1.len()
    }
}

/// Builds the full evaluation matrix by exact rational evaluation.
pub fn evaluation_matrix(l: &LieAlgebra, n: usize, budget: &Budget) -> Result<EvaluationMatrix> {
    check_degree(n)?;
    let d = l.dim();
    let total = all_tuples(l, n, budget)?;
    let r = basis_size(n);
    let basis: Vec<Vec<Rational>> = (0..d)
        .map(|i| (0..d).map(|k| Rational::from_integer(BigInt::from((i == k) as i64))).collect())
        .collect();
    let mut columns = Vec::new();
    let mut data = vec![Vec::with_capacity(total as usize * d); r];
    let mut tuple = vec![0usize; n];
    for t in 0..total {
        decode_tuple(t as u128, n, d, &mut tuple);
        let point: Vec<Vec<Rational>> = tuple.iter().map(|&i| basis[i].clone()).collect();
        for (b, row) in data.iter_mut().enumerate() {
            row.extend(evaluate(&MultilinearPolynomial::basis_element(n, b), &point, l)?);
        }
        columns.extend((0..d).map(|c| (tuple.clone(), c)));
    }
    let cols = columns.len();
    Ok(EvaluationMatrix {
        n,
        columns,
        matrix: RationalMatrix::from_rows(cols, data)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::freelie::{rewrite_combination, LieMonomial};
    use crate::lie::catalog;

    fn unit(d: usize, i: usize) -> Vec<Rational> {
        (0..d).map(|k| rat((k == i) as i64)).collect()
    }

    #[test]
    fn evaluate_examples() {
        let sl2 = catalog::sl2();
        let f = MultilinearPolynomial::basis_element(2, 0);
        let v = evaluate(&f, &[unit(3, 0), unit(3, 2)], &sl2).unwrap();
        assert_eq!(v, unit(3, 1));
        let h = catalog::heisenberg3();
        let g = MultilinearPolynomial::basis_element(3, 0);
        let v = evaluate(&g, &[unit(3, 2), unit(3, 0), unit(3, 1)], &h).unwrap();
        assert!(v.iter().all(|x| x.is_zero()));
        assert!(evaluate(&g, &[unit(3, 0)], &h).is_err());
        let ab = LieAlgebra::abelian(2);
        let v = evaluate(&f, &[vec![rat(1), rat(2)], vec![rat(3), rat(-1)]], &ab).unwrap();
        assert!(v.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn identity_examples() {
        let b = Budget::default();
        let ab = LieAlgebra::abelian(2);
        let f = MultilinearPolynomial::basis_element(2, 0);
        assert!(is_identity(&f, &ab, IdentityMode::Exhaustive, &b).unwrap().holds);
        assert!(is_identity(&MultilinearPolynomial::zero(3), &catalog::sl2(), IdentityMode::Exhaustive, &b)
            .unwrap()
            .holds);
        let v = is_identity(&f, &catalog::sl2(), IdentityMode::Exhaustive, &b).unwrap();
        assert!(!v.holds);
        assert!(v.counterexample.is_some());
        let sampled = is_identity(&f, &catalog::sl2(), IdentityMode::Sampled { count: 50, seed: 3 }, &b).unwrap();
        assert!(!sampled.holds);
        let tight = Budget { tuples: 10, ..b };
        assert!(matches!(
            is_identity(&MultilinearPolynomial::basis_element(4, 0), &catalog::sl2(), IdentityMode::Exhaustive, &tight),
            Err(Error::BudgetExceeded { required: 81, .. })
        ));
    }

    #[test]
    fn class_two_identity_in_heisenberg() {
        let b = Budget::default();
        let h = catalog::heisenberg3();
        for n in 3..=5 {
            for i in 0..basis_size(n) {
                let f = MultilinearPolynomial::basis_element(n, i);
                assert!(is_identity(&f, &h, IdentityMode::Exhaustive, &b).unwrap().holds);
            }
        }
    }

    #[test]
    fn codimension_examples() {
        let b = Budget::default();
        assert_eq!(codimension(&LieAlgebra::abelian(3), 2, CodimMode::Exact, &b).unwrap().value, 0);
        assert_eq!(codimension(&LieAlgebra::abelian(3), 1, CodimMode::Exact, &b).unwrap().value, 1);
        assert_eq!(codimension(&catalog::sl2(), 2, CodimMode::Exact, &b).unwrap().value, 1);
        for n in 3..=6 {
            assert_eq!(codimension(&catalog::heisenberg3(), n, CodimMode::Exact, &b).unwrap().value, 0);
        }
        assert_eq!(codimension(&catalog::heisenberg3(), 2, CodimMode::Exact, &b).unwrap().value, 1);
    }

    #[test]
    fn gram_rank_matches_explicit_evaluation_matrix() {
        let b = Budget::default();
        for name in ["sl2", "gl2", "heisenberg3", "sl2_natural", "solvable2"] {
            let l = catalog::lookup(name).unwrap();
            for n in 1..=4 {
                let explicit = evaluation_matrix(&l, n, &b).unwrap().rank();
                let gram = codimension(&l, n, CodimMode::Exact, &b).unwrap().value;
                assert_eq!(explicit, gram, "{name} n={n}");
            }
        }
    }

    #[test]
    fn modes_are_coherent() {
        let b = Budget::default();
        let l = catalog::sl2_natural();
        for n in 2..=5 {
            let exact = codimension(&l, n, CodimMode::Exact, &b).unwrap().value;
            let modular = codimension(
                &l,
                n,
                CodimMode::Modular {
                    prime_bits: 61,
                    trials: 2,
                    seed: 1,
                },
                &b,
            )
            .unwrap();
            assert_eq!(modular.value, exact);
            assert!(modular.failure_bound.unwrap() < 1e-6);
            let sampled = codimension(&l, n, CodimMode::Sampled { seed: 9, plateau: None }, &b).unwrap();
            assert!(sampled.value <= exact);
            assert_eq!(sampled.certainty, Certainty::LowerBound);
        }
    }

    #[test]
    fn cocharacter_examples() {
        let b = Budget::default();
        let t = cocharacter(&LieAlgebra::abelian(2), 2, CodimMode::Exact, &b).unwrap();
        assert_eq!(t.colength, 0);
        assert!(t.rows.iter().all(|r| r.multiplicity == 0));
        let t = cocharacter(&LieAlgebra::abelian(2), 1, CodimMode::Exact, &b).unwrap();
        assert_eq!(t.multiplicity(&[1]), Some(1));
        let t = cocharacter(&catalog::sl2(), 3, CodimMode::Exact, &b).unwrap();
        assert!(t.is_consistent());
        assert_eq!(t.codimension, codimension(&catalog::sl2(), 3, CodimMode::Exact, &b).unwrap().value);
        // P_2 is spanned by the skew x1x2
        let t = cocharacter(&catalog::sl2(), 2, CodimMode::Exact, &b).unwrap();
        assert_eq!(t.multiplicity(&[1, 1]), Some(1));
        assert_eq!(t.multiplicity(&[2]), Some(0));
    }

    #[test]
    fn capelli_examples() {
        let b = Budget::default();
        let e = IdentityMode::Exhaustive;
        assert!(capelli_holds(&LieAlgebra::abelian(2), 2, 2, e, &b).unwrap().holds);
        assert!(capelli_holds(&catalog::heisenberg3(), 3, 3, e, &b).unwrap().holds);
        assert!(capelli_holds(&catalog::sl2(), 4, 4, e, &b).unwrap().holds);
        // the alternating part of P_3 is zero (twice the Jacobi sum)
        assert!(capelli_holds(&catalog::sl2(), 3, 3, e, &b).unwrap().holds);
        let v = capelli_holds(&catalog::sl2(), 3, 4, e, &b).unwrap();
        assert!(!v.holds);
        let c = v.counterexample.unwrap();
        let spec = AltSpec::new(vec![c.set.unwrap()]).unwrap();
        let f = MultilinearPolynomial::basis_element(4, c.monomial.unwrap());
        assert!(!alternation_by_expansion(&catalog::sl2(), &f, &spec));
        assert!(capelli_holds(&catalog::sl2(), 0, 3, e, &b).is_err());
    }

    /// Oracle: expand the alternation explicitly and scan every basis tuple.
    fn alternation_by_expansion(l: &LieAlgebra, f: &MultilinearPolynomial, spec: &AltSpec) -> bool {
        let a = crate::freelie::alternate(f, spec).unwrap();
        let d = l.dim();
        let n = f.degree();
        let mut tuple = vec![0; n];
        for t in 0..tuple_count(d, n).unwrap() {
            decode_tuple(t, n, d, &mut tuple);
            let point: Vec<Vec<Rational>> = tuple.iter().map(|&i| unit(d, i)).collect();
            if evaluate(&a, &point, l).unwrap().iter().any(|x| !x.is_zero()) {
                return false;
            }
        }
        true
    }

    #[test]
    fn reduced_alternation_matches_expansion() {
        let b = Budget::default();
        let specs = [
            AltSpec::new(vec![vec![0, 1, 2]]).unwrap(),
            AltSpec::new(vec![vec![1, 3]]).unwrap(),
            AltSpec::new(vec![vec![0, 3], vec![1, 2]]).unwrap(),
        ];
        for name in ["sl2", "sl2_natural", "heisenberg3", "gl2"] {
            let l = catalog::lookup(name).unwrap();
            for i in 0..basis_size(4) {
                let f = MultilinearPolynomial::basis_element(4, i);
                for spec in &specs {
                    let fast = alternated_is_identity(&f, spec, &l, IdentityMode::Exhaustive, &b).unwrap();
                    assert_eq!(fast.holds, alternation_by_expansion(&l, &f, spec), "{name} {i} {spec}");
                }
            }
        }
    }

    #[test]
    fn dense_and_sparse_evaluation_agree() {
        let b = Budget::default();
        let ones = MultilinearPolynomial::from_dense(4, &vec![rat(1); 6]);
        assert!(is_identity(&ones, &catalog::heisenberg3(), IdentityMode::Exhaustive, &b).unwrap().holds);
        assert!(!is_identity(&ones, &catalog::sl2(), IdentityMode::Exhaustive, &b).unwrap().holds);
        // (x1x2)(x3x4) rewrites to two terms and vanishes when [L, L] is central
        let m = LieMonomial::bracket(LieMonomial::right_normed(&[0, 1]), LieMonomial::right_normed(&[2, 3]));
        let f = rewrite_combination(&[(rat(1), m)]).unwrap();
        assert_eq!(f.terms().len(), 2);
        assert!(is_identity(&f, &catalog::heisenberg3(), IdentityMode::Exhaustive, &b).unwrap().holds);
        assert!(!is_identity(&f, &catalog::sl2_adjoint(), IdentityMode::Exhaustive, &b).unwrap().holds);
    }
}
