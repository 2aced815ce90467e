use serde::Serialize;

use crate::codim::{cocharacter, Budget, Certainty, CodimMode};
use crate::error::{Error, Result};
use crate::freelie::basis_size;
use crate::lie::LieAlgebra;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub codimension: usize,
    pub colength: usize,
    /// `c_n^(1/n)`.
    pub root: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    /// `d(L)`, when the structure hypotheses hold.
    pub d: Option<usize>,
    pub certainty: Certainty,
    pub note: String,
}

/// Codimensions, colengths and their `n`-th roots for `n = 1 ..= n_max`.
pub fn growth_report(l: &LieAlgebra, n_max: usize, mode: CodimMode, budget: &Budget) -> Result<GrowthReport> {
    if n_max == 0 {
        return Err(Error::malformed("n_max must be at least 1"));
    }
    let mut rows = Vec::new();
    let mut certainty = Certainty::Exact;
    for n in 1..=n_max {
        let t = cocharacter(l, n, mode, budget)?;
        if t.codimension > basis_size(n) {
            return Err(Error::Invariant(format!("c_{n} exceeds (n-1)!")));
        }
        if t.certainty == Certainty::Exact && !t.is_consistent() {
            return Err(Error::Invariant(format!("cocharacter of degree {n} does not sum to c_{n}")));
        }
        if t.certainty != Certainty::Exact {
            certainty = t.certainty;
        }
        rows.push(GrowthRow {
            n,
            codimension: t.codimension,
            colength: t.colength,
            root: (t.codimension as f64).powf(1.0 / n as f64),
        });
    }
    let d = match super::pi_exponent_candidate(l) {
        Ok(r) => Some(r.d),
        Err(Error::HypothesisFailure(_)) => None,
        Err(e) => return Err(e),
    };
    let note = "n-th roots at these degrees are far from the limit; they illustrate growth and \
                certify nothing about the exponent"
        .to_string();
    Ok(GrowthReport {
        rows,
        d,
        certainty,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog;

    #[test]
    fn growth_examples() {
        let b = Budget::default();
        let h = growth_report(&catalog::heisenberg3(), 6, CodimMode::Exact, &b).unwrap();
        assert!(h.rows[2..].iter().all(|r| r.codimension == 0 && r.root == 0.0));
        assert_eq!(h.d, Some(0));
        let a = growth_report(&LieAlgebra::abelian(1), 4, CodimMode::Exact, &b).unwrap();
        let cs: Vec<usize> = a.rows.iter().map(|r| r.codimension).collect();
        assert_eq!(cs, vec![1, 0, 0, 0]);
        let s = growth_report(&catalog::sl2(), 5, CodimMode::Exact, &b).unwrap();
        assert_eq!(s.d, Some(3));
        assert!(s.rows.iter().all(|r| r.codimension <= basis_size(r.n)));
        assert_eq!(growth_report(&catalog::solvable2(), 3, CodimMode::Exact, &b).unwrap().d, None);
    }
}
