use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{Rational, Subspace};
use crate::error::{Error, Result};
use crate::lie::{LieAlgebra, StructureReport};

/// How a spanning vector of a height span was produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    /// Element `index` of the adapted basis of component `component`.
    Component { component: usize, index: usize },
    /// Element `index` of the nilradical basis.
    Nil { index: usize },
    Bracket(Box<Derivation>, Box<Derivation>),
}

impl Derivation {
    /// Recomputes the vector this derivation stands for.
    pub fn evaluate(&self, l: &LieAlgebra, report: &StructureReport) -> Vec<Rational> {
        match self {
            Derivation::Component { component, index } => report.components[*component].adapted_basis[*index].clone(),
            Derivation::Nil { index } => report.nilradical_basis[*index].clone(),
            Derivation::Bracket(a, b) => {
                let x = a.evaluate(l, report);
                let y = b.evaluate(l, report);
                l.bracket(&x, &y).expect("dimensions agree")
            }
        }
    }

    /// Number of nilradical factors.
    pub fn nil_factors(&self) -> usize {
        match self {
            Derivation::Component { .. } => 0,
            Derivation::Nil { .. } => 1,
            Derivation::Bracket(a, b) => a.nil_factors() + b.nil_factors(),
        }
    }

    /// Bracketed expression with every factor written in basis labels.
    pub fn render(&self, l: &LieAlgebra, report: &StructureReport) -> String {
        match self {
            Derivation::Bracket(a, b) => format!("[{}, {}]", a.render(l, report), b.render(l, report)),
            leaf => {
                let s = l.format_element(&leaf.evaluate(l, report));
                if s.contains(' ') {
                    format!("({s})")
                } else {
                    s
                }
            }
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::Component { component, index } => write!(f, "B{}[{}]", component + 1, index + 1),
            Derivation::Nil { index } => write!(f, "N[{}]", index + 1),
            Derivation::Bracket(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

/// `D(T)` for one set `T` of components, with a derivation for each spanning vector.
#[derive(Debug, Clone)]
pub struct HeightSpan {
    /// Bit `i` set iff component `i` belongs to `T`.
    pub mask: u32,
    pub span: Subspace,
    pub generators: Vec<(Vec<Rational>, Derivation)>,
}

impl HeightSpan {
    /// 0-based component indices of `T`.
    pub fn components(&self) -> Vec<usize> {
        (0..32).filter(|i| self.mask & (1 << i) != 0).collect()
    }

    fn absorb(&mut self, v: Vec<Rational>, how: Derivation) -> bool {
        if v.iter().all(Zero::is_zero) {
            return false;
        }
        if self.span.push(v.clone()) {
            self.generators.push((v, how));
            true
        } else {
            false
        }
    }
}

/// Least fixpoint of `D(∅) = N`, `D({i}) ⊇ span(B_i)` and
/// `D(T) ⊇ [D(T1), D(T2)]` for disjoint `T1 ∪ T2 = T`.
///
/// Every bracketing of factors drawn once from each `B_i`, `i ∈ T`, and any
/// number of times from `N` splits at its root into two such products over
/// disjoint sets, so `D(T)` is exactly the span of those products.
#[derive(Debug, Clone)]
pub struct HeightSpanTable {
    pub spans: Vec<HeightSpan>,
    pub component_dims: Vec<usize>,
}

#[derive(Serialize)]
struct SpanSummary {
    components: Vec<usize>,
    dim: usize,
    height: usize,
}

impl Serialize for HeightSpanTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.spans.iter().map(|h| SpanSummary {
            components: h.components().iter().map(|i| i + 1).collect(),
            dim: h.span.dim(),
            height: self.height(h.mask),
        }))
    }
}

impl HeightSpanTable {
    pub fn get(&self, mask: u32) -> &HeightSpan {
        &self.spans[mask as usize]
    }

    /// `Σ_{i ∈ T} dim G_i`.
    pub fn height(&self, mask: u32) -> usize {
        self.component_dims
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, d)| d)
            .sum()
    }
}

pub const MAX_COMPONENTS: usize = 16;

pub fn height_spans(l: &LieAlgebra, report: &StructureReport) -> Result<HeightSpanTable> {
    let m = report.components.len();
    if m > MAX_COMPONENTS {
        return Err(Error::BudgetExceeded {
            what: "simple components".into(),
            required: m as u128,
            budget: MAX_COMPONENTS as u128,
        });
    }
    let d = l.dim();
    let mut spans: Vec<HeightSpan> = (0..1u32 << m)
        .map(|mask| HeightSpan {
            mask,
            span: Subspace::zero(d),
            generators: Vec::new(),
        })
        .collect();
    for (index, v) in report.nilradical_basis.iter().enumerate() {
        spans[0].absorb(v.clone(), Derivation::Nil { index });
    }
    for (component, c) in report.components.iter().enumerate() {
        for (index, v) in c.adapted_basis.iter().enumerate() {
            spans[1 << component].absorb(v.clone(), Derivation::Component { component, index });
        }
    }
    let mut order: Vec<u32> = (1..1u32 << m).collect();
    order.sort_by_key(|t| (t.count_ones(), *t));
    loop {
        let mut changed = false;
        for &t in &order {
            // proper nonempty splits: each unordered pair once, both orders of bracket
            // are the same span up to sign
            let mut sub = (t - 1) & t;
            while sub > 0 {
                let other = t & !sub;
                if sub < other {
                    changed |= bracket_into(l, &mut spans, t, sub, other);
                }
                sub = (sub - 1) & t;
            }
            // closure under the nilradical
            while bracket_into(l, &mut spans, t, 0, t) {
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if spans[0].span != report.nilradical {
        return Err(Error::Invariant("D(∅) differs from the nilradical".into()));
    }
    Ok(HeightSpanTable {
        spans,
        component_dims: report.components.iter().map(|c| c.dim).collect(),
    })
}

/// Adds `[D(a), D(b)]` to `D(t)`; returns whether `D(t)` grew.
fn bracket_into(l: &LieAlgebra, spans: &mut [HeightSpan], t: u32, a: u32, b: u32) -> bool {
    let left = spans[a as usize].generators.clone();
    let right = spans[b as usize].generators.clone();
    let mut grew = false;
    for (x, dx) in &left {
        for (y, dy) in &right {
            let v = l.bracket_unchecked(x, y);
            grew |= spans[t as usize].absorb(v, Derivation::Bracket(Box::new(dx.clone()), Box::new(dy.clone())));
        }
    }
    grew
}
