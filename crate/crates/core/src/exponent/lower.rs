use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::upper::QPolySpec;
use crate::arith::rational::serde_rational_vec;
use crate::arith::{Rational, RationalMatrix};
use crate::codim::engine::{IntegerAlgebra, ReducedTuples};
use crate::codim::{evaluate, Budget, Checker};
use crate::error::{Error, Result};
use crate::freelie::{alternate, basis_letters, AltSpec, LieMonomial, MultilinearPolynomial};
use crate::lie::{LieAlgebra, StructureReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessOptions {
    /// Largest degree tried.
    pub max_n: usize,
}

/// A multialternating polynomial together with a point where it does not vanish.
#[derive(Debug, Clone, Serialize)]
pub struct LowerWitness {
    pub spec: QPolySpec,
    pub n: usize,
    /// Right-normed monomial that was alternated.
    pub monomial: String,
    /// Alternating sets (1-based variables).
    pub sets: Vec<Vec<usize>>,
    /// The alternated polynomial in canonical coordinates.
    pub polynomial: String,
    /// Value assigned to each variable, in basis labels.
    pub point: Vec<String>,
    /// Number of nilradical elements in the point.
    pub nil_factors: usize,
    #[serde(with = "serde_rational_vec")]
    pub value: Vec<Rational>,
    #[serde(skip)]
    pub alternated: Option<MultilinearPolynomial>,
    #[serde(skip)]
    pub point_vectors: Vec<Vec<Rational>>,
}

/// Searches for a polynomial with `k` alternating sets of size `r` that is
/// not an identity of `L`, in degrees `r k ..= max_n`.
///
/// Evaluation points draw from the adapted basis (component preimages, then
/// the nilradical basis); sets receive strictly increasing entries. Points are
/// tried by increasing degree, then by the number of nilradical entries. The
/// nonzero value is recomputed exactly before returning. `None` is
/// inconclusive.
pub fn find_lower_witness(
    l: &LieAlgebra,
    report: &StructureReport,
    r: usize,
    k: usize,
    opts: WitnessOptions,
    budget: &Budget,
) -> Result<Option<LowerWitness>> {
    if r == 0 {
        return Err(Error::HypothesisFailure(
            "no simple components: the lower witness search needs sets of size d >= 1".into(),
        ));
    }
    let adapted: Vec<Vec<Rational>> = report
        .components
        .iter()
        .flat_map(|c| c.adapted_basis.iter().cloned())
        .chain(report.nilradical_basis.iter().cloned())
        .collect();
    let semisimple_part = adapted.len() - report.nilradical_basis.len();
    let change = RationalMatrix::from_rows(l.dim(), adapted.clone())?;
    let la = l.change_basis(&change)?;
    let int = IntegerAlgebra::new(&la);
    let mut spent: u128 = 0;
    for n in (r * k).max(1)..=opts.max_n {
        let spec = QPolySpec::new(r, k, n)?;
        let sets = spec.standard_sets();
        let group: u128 = (crate::symgroup::factorial(r) as u128).pow(k as u32);
        let points = ReducedTuples::new(n, la.dim(), &sets);
        let count = points.count().unwrap_or(u128::MAX);
        spent = spent.saturating_add(count.saturating_mul(group));
        budget.check_work("tuple evaluations", spent)?;
        let mut order: Vec<(usize, u128)> = (0..count)
            .map(|i| {
                let p = points.point(i);
                (p.iter().filter(|&&x| x >= semisimple_part).count(), i)
            })
            .collect();
        order.sort();
        let checker = Checker::new(&int, n, None, &sets);
        let hit = order
            .par_iter()
            .map(|&(_, i)| {
                let p = points.point(i);
                checker.refute(&p).map(|m| (p, m))
            })
            .find_first(Option::is_some)
            .flatten();
        if let Some((p, m)) = hit {
            return certify(l, spec, n, &sets, m, &p, &adapted, semisimple_part).map(Some);
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn certify(
    l: &LieAlgebra,
    spec: QPolySpec,
    n: usize,
    sets: &[Vec<usize>],
    monomial: usize,
    point: &[usize],
    adapted: &[Vec<Rational>],
    semisimple_part: usize,
) -> Result<LowerWitness> {
    let alt = AltSpec::new(sets.to_vec())?;
    let f = alternate(&MultilinearPolynomial::basis_element(n, monomial), &alt)?;
    let vectors: Vec<Vec<Rational>> = point.iter().map(|&i| adapted[i].clone()).collect();
    let value = evaluate(&f, &vectors, l)?;
    if value.iter().all(Zero::is_zero) {
        return Err(Error::Invariant("modular witness did not survive exact evaluation".into()));
    }
    Ok(LowerWitness {
        spec,
        n,
        monomial: LieMonomial::right_normed(&basis_letters(n, monomial)).to_string(),
        sets: sets.iter().map(|s| s.iter().map(|x| x + 1).collect()).collect(),
        polynomial: f.to_string(),
        point: vectors.iter().map(|v| l.format_element(v)).collect(),
        nil_factors: point.iter().filter(|&&x| x >= semisimple_part).count(),
        value,
        alternated: Some(f),
        point_vectors: vectors,
    })
}
