use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codim::engine::{IntegerAlgebra, ReducedTuples};
use crate::codim::{scan, Budget, Checker, Counterexample, IdentityMode};
use crate::error::{Error, Result};
use crate::freelie::{basis_letters, basis_size, LieMonomial};
use crate::lie::LieAlgebra;
use num_bigint::BigInt;

/// Shape of multialternating polynomials: `k` disjoint alternating sets of
/// size `r` plus `s` free variables, in degree `n = r k + s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPolySpec {
    pub r: usize,
    pub k: usize,
    pub s: usize,
}

impl QPolySpec {
    pub fn new(r: usize, k: usize, n: usize) -> Result<Self> {
        if r * k > n {
            return Err(Error::malformed(format!("{k} sets of size {r} do not fit in degree {n}")));
        }
        if n == 0 {
            return Err(Error::malformed("degree must be at least 1"));
        }
        Ok(QPolySpec { r, k, s: n - r * k })
    }

    pub fn degree(&self) -> usize {
        self.r * self.k + self.s
    }

    /// The standard placement: set `j` holds variables `j r .. (j + 1) r - 1`.
    pub fn standard_sets(&self) -> Vec<Vec<usize>> {
        (0..self.k).map(|j| (j * self.r..(j + 1) * self.r).collect()).collect()
    }
}

/// All ways to place `k` disjoint `r`-sets among `n` variables, sets listed
/// by increasing least element.
pub fn disjoint_set_assignments(n: usize, r: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(
        free: &[usize],
        r: usize,
        k: usize,
        cur: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        // the next set starts at some remaining point; earlier points stay free
        for (pos, &first) in free.iter().enumerate() {
            let rest = &free[pos + 1..];
            for others in crate::codim::engine::combinations(rest.len(), r - 1) {
                let mut set = vec![first];
                set.extend(others.iter().map(|&i| rest[i]));
                let remaining: Vec<usize> = rest.iter().copied().filter(|x| !set.contains(x)).collect();
                cur.push(set);
                go(&remaining, r, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if r == 0 || k == 0 {
        if r * k == 0 {
            out.push(vec![vec![]; k]);
        }
        return out;
    }
    go(&(0..n).collect::<Vec<_>>(), r, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum UpperMode {
    /// Every set placement with every basis monomial.
    Full,
    /// `count` distinct (monomial, placement) pairs drawn with `seed`.
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperFailure {
    pub monomial: String,
    pub sets: Vec<Vec<usize>>,
    pub counterexample: Counterexample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperVerdict {
    pub spec: QPolySpec,
    pub n: usize,
    pub mode: UpperMode,
    pub passed: bool,
    /// Number of (monomial, placement) pairs spanning the space.
    pub total_checks: u128,
    pub checks_run: u128,
    /// Every individual check scans all evaluation points.
    pub each_check_exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<UpperFailure>,
}

/// Checks that every alternation of a basis monomial over `k` disjoint
/// `r`-sets is an identity of `L`.
///
/// These alternations span the multialternating polynomials of this shape in
/// degree `n`, so a full pass covers all of them.
pub fn verify_upper(l: &LieAlgebra, spec: QPolySpec, mode: UpperMode, budget: &Budget) -> Result<UpperVerdict> {
    let n = spec.degree();
    if spec.r == 0 {
        return Err(Error::malformed("alternating sets must be nonempty"));
    }
    let placements = disjoint_set_assignments(n, spec.r, spec.k);
    let monomials = basis_size(n);
    let total = placements.len() as u128 * monomials as u128;
    let points = ReducedTuples::new(n, l.dim(), &placements[0])
        .count()
        .unwrap_or(u128::MAX);
    let per_check = points.saturating_mul(
        placements[0]
            .iter()
            .map(|s| crate::symgroup::factorial(s.len()) as u128)
            .product::<u128>(),
    );
    let items: Vec<(usize, usize)> = match mode {
        UpperMode::Full => {
            budget.check_work("tuple evaluations", total.saturating_mul(per_check))?;
            (0..placements.len())
                .flat_map(|p| (0..monomials).map(move |m| (m, p)))
                .collect()
        }
        UpperMode::Sampled { count, seed } => {
            let count = (count as u128).min(total) as usize;
            budget.check_work("tuple evaluations", (count as u128).saturating_mul(per_check))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picks: Vec<usize> = sample(&mut rng, total as usize, count).into_vec();
            picks.sort_unstable();
            picks.into_iter().map(|i| (i % monomials, i / monomials)).collect()
        }
    };
    let int = IntegerAlgebra::new(l);
    let one = [(0usize, BigInt::from(1))];
    let results: Vec<Result<Option<Counterexample>>> = items
        .par_iter()
        .map(|&(m, p)| {
            let sets = &placements[p];
            let term = [(m, one[0].1.clone())];
            let checker = Checker::new(&int, n, Some(&term), sets);
            let pts = ReducedTuples::new(n, l.dim(), sets);
            let v = scan(&checker, &pts, IdentityMode::Exhaustive, &Budget::unlimited())?;
            Ok(v.counterexample)
        })
        .collect();
    let mut failure = None;
    for (&(m, p), r) in items.iter().zip(results) {
        if let Some(c) = r? {
            failure = Some(UpperFailure {
                monomial: LieMonomial::right_normed(&basis_letters(n, m)).to_string(),
                sets: placements[p].clone(),
                counterexample: c,
            });
            break;
        }
    }
    Ok(UpperVerdict {
        spec,
        n,
        mode,
        passed: failure.is_none(),
        total_checks: total,
        checks_run: items.len() as u128,
        each_check_exhaustive: true,
        failure,
    })
}
