//! The integer `d(L)`: the largest total dimension of distinct simple
//! components of `L/N` whose preimages, together with elements of `N`, have a
//! nonzero product. Multialternating checks test both sides of the bound.

mod growth;
mod lower;
mod spans;
mod upper;

use serde::Serialize;

use crate::arith::rational::serde_rational_vec;
use crate::arith::Rational;
use crate::error::Result;
use crate::lie::{analyze, LieAlgebra, StructureOptions, StructureReport};

pub use growth::{growth_report, GrowthReport, GrowthRow};
pub use lower::{find_lower_witness, LowerWitness, WitnessOptions};
pub use spans::{height_spans, Derivation, HeightSpan, HeightSpanTable, MAX_COMPONENTS};
pub use upper::{disjoint_set_assignments, verify_upper, QPolySpec, UpperMode, UpperVerdict};

#[derive(Debug, Clone, Serialize)]
pub struct ExponentReport {
    pub d: usize,
    /// 1-based component numbers of a maximizing set.
    pub components: Vec<usize>,
    pub component_dims: Vec<usize>,
    pub nil_class: usize,
    /// A nonzero product realizing `d`, as a bracketed expression.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(with = "serde_rational_vec")]
    pub witness_value: Vec<Rational>,
    pub spans: HeightSpanTable,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub upper_checks: Vec<UpperVerdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lower_witnesses: Vec<LowerWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthReport>,
}

/// `d(L)` from a finished structure analysis.
pub fn exponent_from_structure(l: &LieAlgebra, report: &StructureReport) -> Result<ExponentReport> {
    let table = height_spans(l, report)?;
    let best = table
        .spans
        .iter()
        .filter(|h| h.mask != 0 && !h.span.is_zero())
        .max_by_key(|h| (table.height(h.mask), std::cmp::Reverse(h.mask)));
    let (d, components, witness, witness_value) = match best {
        None => (0, vec![], None, vec![Rational::from_integer(0.into()); l.dim()]),
        Some(h) => {
            let (v, how) = &h.generators[0];
            let recomputed = how.evaluate(l, report);
            if &recomputed != v {
                return Err(crate::Error::Invariant("witness derivation does not reproduce its vector".into()));
            }
            (
                table.height(h.mask),
                h.components().iter().map(|i| i + 1).collect(),
                Some(how.render(l, report)),
                v.clone(),
            )
        }
    };
    Ok(ExponentReport {
        d,
        components,
        component_dims: table.component_dims.clone(),
        nil_class: report.nil_class,
        witness,
        witness_value,
        spans: table,
        upper_checks: vec![],
        lower_witnesses: vec![],
        growth: None,
    })
}

/// Runs the structure analysis and computes `d(L)`.
pub fn pi_exponent_candidate(l: &LieAlgebra) -> Result<ExponentReport> {
    let report = analyze(l, StructureOptions::default())?;
    exponent_from_structure(l, &report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::catalog;

    #[test]
    fn catalog_values() {
        for (name, d) in [
            ("sl2", 3),
            ("gl2", 3),
            ("sl2_plus_sl2", 3),
            ("sl2_natural", 3),
            ("sl2_adjoint", 3),
            ("heisenberg3", 0),
            ("abelian3", 0),
        ] {
            let r = pi_exponent_candidate(&catalog::lookup(name).unwrap()).unwrap();
            assert_eq!(r.d, d, "{name}");
        }
        assert!(matches!(
            pi_exponent_candidate(&catalog::solvable2()),
            Err(crate::Error::HypothesisFailure(_))
        ));
    }

    #[test]
    fn span_examples() {
        let h = catalog::heisenberg3();
        let rep = analyze(&h, StructureOptions::default()).unwrap();
        let t = height_spans(&h, &rep).unwrap();
        assert_eq!(t.spans.len(), 1);
        assert_eq!(t.get(0).span.dim(), 3);

        let s = catalog::sl2_plus_sl2();
        let rep = analyze(&s, StructureOptions::default()).unwrap();
        let t = height_spans(&s, &rep).unwrap();
        assert!(t.get(0b11).span.is_zero());
        assert_eq!(t.get(0b01).span.dim(), 3);

        let v = catalog::sl2_natural();
        let rep = analyze(&v, StructureOptions::default()).unwrap();
        let t = height_spans(&v, &rep).unwrap();
        assert!(!t.get(1).span.is_zero());
        // N is stable under bracketing with the component preimages
        assert!(t.get(1).span.dim() >= 3);
    }

    #[test]
    fn witness_reproduces_value() {
        let l = catalog::sl2_adjoint();
        let r = pi_exponent_candidate(&l).unwrap();
        assert!(r.witness.is_some());
        assert!(r.witness_value.iter().any(|x| *x != Rational::from_integer(0.into())));
        let rep = analyze(&l, StructureOptions::default()).unwrap();
        for h in &r.spans.spans {
            for (v, how) in &h.generators {
                assert_eq!(&how.evaluate(&l, &rep), v);
            }
        }
    }
}
