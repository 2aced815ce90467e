//! Radical, nilradical, semisimple quotient and its decomposition into simple
//! ideals, plus the adapted bases used by the exponent computation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LieAlgebra;
use crate::arith::modular::is_prime;
use crate::arith::rational::{clear_denominators, serde_rational_vecs};
use crate::arith::{rank, RankMode, Rational, RationalMatrix, Subspace};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureOptions {
    /// Seed for the random centroid element.
    pub seed: u64,
    /// Attempts at a generic centroid element before giving up.
    pub retries: usize,
}

impl Default for StructureOptions {
    fn default() -> Self {
        StructureOptions {
            seed: 0x5eed,
            retries: 16,
        }
    }
}

pub fn derived_algebra(l: &LieAlgebra) -> Subspace {
    let full = Subspace::full(l.dim());
    l.bracket_spaces(&full, &full)
}

fn is_solvable(l: &LieAlgebra, s: &Subspace) -> bool {
    let mut cur = s.clone();
    for _ in 0..=l.dim() {
        if cur.is_zero() {
            return true;
        }
        let next = l.bracket_spaces(&cur, &cur);
        if next == cur {
            return false;
        }
        cur = next;
    }
    cur.is_zero()
}

/// Least `q` with `N^q = 0`, where `N^1 = N` and `N^{k+1} = [N, N^k]`;
/// `None` when the series stabilizes at a nonzero subspace.
pub fn nilpotency_class(l: &LieAlgebra, n: &Subspace) -> Option<usize> {
    let mut power = n.clone();
    let mut k = 1;
    loop {
        if power.is_zero() {
            return Some(k);
        }
        let next = l.bracket_spaces(n, &power);
        if next == power {
            return None;
        }
        power = next;
        k += 1;
    }
}

/// The solvable radical: the Killing-orthogonal complement of `[L, L]`.
pub fn radical(l: &LieAlgebra) -> Result<Subspace> {
    let n = l.dim();
    let kappa = l.killing_form();
    let derived = derived_algebra(l);
    let rows: Vec<Vec<Rational>> = derived
        .basis()
        .iter()
        .map(|d| kappa.transpose().apply(d))
        .collect();
    let r = if rows.is_empty() {
        Subspace::full(n)
    } else {
        let m = RationalMatrix::from_rows(n, rows)?;
        Subspace::from_generators(n, m.nullspace())?
    };
    if !is_solvable(l, &r) {
        return Err(Error::Invariant("computed radical is not solvable".into()));
    }
    let full = Subspace::full(n);
    if !l.bracket_spaces(&full, &r).is_subspace_of(&r) {
        return Err(Error::Invariant("computed radical is not an ideal".into()));
    }
    Ok(r)
}

/// `L / I` for an ideal `I`, realized on the span of the non-pivot unit vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    ideal: Subspace,
    complement: Vec<usize>,
    algebra: LieAlgebra,
}

impl Quotient {
    pub fn new(l: &LieAlgebra, ideal: &Subspace) -> Result<Self> {
        let complement: Vec<usize> = (0..l.dim()).filter(|c| !ideal.pivots().contains(c)).collect();
        let labels = complement.iter().map(|&c| l.labels()[c].clone()).collect();
        let m = complement.len();
        let mut brackets = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                let w = l.basis_bracket(complement[a], complement[b]);
                let proj = Self::project_with(ideal, &complement, w);
                if proj.iter().any(|x| !x.is_zero()) {
                    brackets.push((a, b, proj));
                }
            }
        }
        let algebra = LieAlgebra::from_brackets(labels, brackets)
            .map_err(|e| Error::Invariant(format!("quotient by a non-ideal: {e}")))?;
        Ok(Quotient {
            ideal: ideal.clone(),
            complement,
            algebra,
        })
    }

    fn project_with(ideal: &Subspace, complement: &[usize], x: &[Rational]) -> Vec<Rational> {
        let r = ideal.reduce(x);
        complement.iter().map(|&c| r[c].clone()).collect()
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    /// Image of `x` in the quotient.
    pub fn project(&self, x: &[Rational]) -> Vec<Rational> {
        Self::project_with(&self.ideal, &self.complement, x)
    }

    /// A preimage of `g`, supported on the complement coordinates.
    pub fn lift(&self, g: &[Rational], ambient: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); ambient];
        for (&c, x) in self.complement.iter().zip(g) {
            out[c] = x.clone();
        }
        out
    }
}

/// Centroid `{T : T ad x = ad x T for all x}` as a list of matrices.
pub fn centroid(g: &LieAlgebra) -> Vec<RationalMatrix> {
    let n = g.dim();
    let mut rows = Vec::new();
    for x in 0..n {
        let a = g.ad_basis(x);
        for i in 0..n {
            for j in 0..n {
                // (T A - A T)[i][j]
                let mut row = vec![Rational::zero(); n * n];
                for k in 0..n {
                    row[i * n + k] += a.get(k, j);
                    row[k * n + j] -= a.get(i, k);
                }
                if row.iter().any(|v| !v.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let sols = if rows.is_empty() {
        (0..n * n)
            .map(|t| {
                let mut v = vec![Rational::zero(); n * n];
                v[t] = Rational::one();
                v
            })
            .collect()
    } else {
        RationalMatrix::from_rows(n * n, rows).expect("shape").nullspace()
    };
    sols.into_iter()
        .map(|v| RationalMatrix::from_data(n, n, v).expect("square"))
        .collect()
}

/// Monic minimal polynomial of a square matrix, lowest degree coefficient first.
pub fn minimal_polynomial(t: &RationalMatrix) -> Vec<Rational> {
    let n = t.rows();
    let flat = |m: &RationalMatrix| (0..n).flat_map(|i| m.row(i).to_vec()).collect::<Vec<_>>();
    let mut powers = vec![flat(&RationalMatrix::identity(n))];
    let mut cur = RationalMatrix::identity(n);
    loop {
        cur = cur.mul(t).expect("square");
        powers.push(flat(&cur));
        let k = powers.len();
        // columns are the powers
        let mut cols = RationalMatrix::zeros(n * n, k);
        for (j, p) in powers.iter().enumerate() {
            for (i, x) in p.iter().enumerate() {
                cols.set(i, j, x.clone());
            }
        }
        if let Some(v) = cols.nullspace().into_iter().next() {
            let lead = v[k - 1].clone();
            return v.into_iter().map(|c| c / &lead).collect();
        }
    }
}

fn poly_eval(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Prime factorization by trial division; `None` if a large cofactor cannot be certified prime.
fn factor(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return None;
    }
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000u32);
    while &d * &d <= n && d <= limit {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        let certified = &limit * &limit >= n || n.to_u64().is_some_and(is_prime);
        if !certified {
            return None;
        }
        out.push((n, 1));
    }
    Some(out)
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut ds = vec![BigInt::one()];
    for (p, e) in factor(n)? {
        let mut next = Vec::new();
        for d in &ds {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        ds = next;
    }
    Some(ds)
}

/// Distinct rational roots of a polynomial (lowest degree first).
/// `None` when a coefficient is too large to factor.
pub fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut ints = clear_denominators(coeffs);
    while ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let mut roots = Vec::new();
    let lead_zeros = ints.iter().take_while(|c| c.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(Rational::zero());
        ints.drain(..lead_zeros);
    }
    if ints.len() <= 1 {
        return Some(roots);
    }
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let ints: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
    let poly: Vec<Rational> = ints.iter().cloned().map(Rational::from_integer).collect();
    let num = divisors(&ints[0])?;
    let den = divisors(ints.last().unwrap())?;
    let mut cands: Vec<Rational> = Vec::new();
    for u in &num {
        for v in &den {
            for s in [1, -1] {
                let r = Rational::new(u * s, v.clone());
                if !cands.contains(&r) {
                    cands.push(r);
                }
            }
        }
    }
    for r in cands {
        if poly_eval(&poly, &r).is_zero() {
            roots.push(r);
        }
    }
    roots.sort();
    Some(roots)
}

/// Decomposes a semisimple algebra into simple ideals (subspaces of `g`),
/// requiring every simple ideal to be split over Q.
pub fn simple_decomposition(g: &LieAlgebra, opts: StructureOptions) -> Result<Vec<Subspace>> {
    let n = g.dim();
    if n == 0 {
        return Ok(vec![]);
    }
    let kappa = g.killing_form();
    if rank(&kappa, RankMode::Exact)?.rank < n {
        return Err(Error::NotSemisimple(format!(
            "Killing form of the {n}-dimensional input is degenerate"
        )));
    }
    let cent = centroid(g);
    let c = cent.len();
    if c == 1 {
        return Ok(vec![Subspace::full(n)]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.retries.max(1) {
        let mut t = RationalMatrix::zeros(n, n);
        for b in &cent {
            let coef = Rational::from_integer(rng.gen_range(-12i64..=12).into());
            for i in 0..n {
                for j in 0..n {
                    let v = t.get(i, j) + &coef * b.get(i, j);
                    t.set(i, j, v);
                }
            }
        }
        let mu = minimal_polynomial(&t);
        let degree = mu.len() - 1;
        let Some(roots) = rational_roots(&mu) else {
            continue;
        };
        if roots.len() < degree {
            return Err(Error::NotSplit(format!(
                "centroid element has a minimal polynomial of degree {degree} with only {} rational roots",
                roots.len()
            )));
        }
        if degree < c {
            continue;
        }
        let mut ideals: Vec<Subspace> = roots
            .iter()
            .map(|r| {
                let mut shifted = t.clone();
                for i in 0..n {
                    let v = shifted.get(i, i) - r;
                    shifted.set(i, i, v);
                }
                Subspace::from_generators(n, shifted.nullspace()).expect("shape")
            })
            .collect();
        ideals.sort_by_key(|s| s.pivots().to_vec());
        check_decomposition(g, &ideals)?;
        return Ok(ideals);
    }
    Err(Error::NotSplit(format!(
        "no generic centroid element with rational spectrum after {} attempts",
        opts.retries.max(1)
    )))
}

fn check_decomposition(g: &LieAlgebra, ideals: &[Subspace]) -> Result<()> {
    let total: usize = ideals.iter().map(Subspace::dim).sum();
    if total != g.dim() {
        return Err(Error::Invariant("simple ideals do not span the algebra".into()));
    }
    for (i, a) in ideals.iter().enumerate() {
        if &g.bracket_spaces(a, a) != a {
            return Err(Error::Invariant(format!("component {} is not perfect", i + 1)));
        }
        for b in &ideals[i + 1..] {
            if !g.bracket_spaces(a, b).is_zero() {
                return Err(Error::Invariant("distinct components do not commute".into()));
            }
        }
    }
    Ok(())
}

/// One simple component `G_i` of the semisimple quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub dim: usize,
    /// The ideal inside `L/N`, in quotient coordinates.
    pub ideal: Subspace,
    /// Preimages in `L` of a basis of the ideal (the adapted basis `B_i`).
    #[serde(with = "serde_rational_vecs")]
    pub adapted_basis: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub dim: usize,
    pub radical: Subspace,
    pub nilradical: Subspace,
    /// Least `q` with `N^q = 0`.
    pub nil_class: usize,
    /// `dim L/N`.
    pub quotient_dim: usize,
    pub components: Vec<Component>,
    /// Basis `C` of the nilradical.
    #[serde(with = "serde_rational_vecs")]
    pub nilradical_basis: Vec<Vec<Rational>>,
    #[serde(skip)]
    quotient: Option<Quotient>,
    #[serde(skip)]
    splitting: Option<RationalMatrix>,
}

impl StructureReport {
    /// `φ_i(x)` for every component, each in quotient coordinates.
    pub fn project(&self, x: &[Rational]) -> Vec<Vec<Rational>> {
        let (Some(q), Some(inv)) = (&self.quotient, &self.splitting) else {
            return vec![];
        };
        let g = q.project(x);
        // coordinates of g in the stacked component bases
        let coords = inv.transpose().apply(&g);
        let mut out = Vec::new();
        let mut offset = 0;
        for c in &self.components {
            let mut part = vec![Rational::zero(); self.quotient_dim];
            for (k, row) in c.ideal.basis().iter().enumerate() {
                let a = &coords[offset + k];
                if a.is_zero() {
                    continue;
                }
                for (p, r) in part.iter_mut().zip(row) {
                    *p += a * r;
                }
            }
            offset += c.dim;
            out.push(part);
        }
        out
    }

    pub fn quotient_algebra(&self) -> Option<&LieAlgebra> {
        self.quotient.as_ref().map(Quotient::algebra)
    }

    /// `d` candidates are built from these adapted bases plus the nilradical basis.
    pub fn adapted_bases(&self) -> Vec<&[Vec<Rational>]> {
        self.components.iter().map(|c| c.adapted_basis.as_slice()).collect()
    }
}

/// Full structure pipeline; fails unless the radical is nilpotent with a
/// split semisimple quotient.
pub fn analyze(l: &LieAlgebra, opts: StructureOptions) -> Result<StructureReport> {
    let n = l.dim();
    let rad = radical(l)?;
    let nil_class = nilpotency_class(l, &rad).ok_or_else(|| {
        Error::HypothesisFailure(
            "not almost nilpotent-by-semisimple: the radical is not nilpotent, so L/N is not semisimple"
                .into(),
        )
    })?;
    let quotient = Quotient::new(l, &rad)?;
    let g = quotient.algebra();
    let ideals = simple_decomposition(g, opts).map_err(|e| match e {
        Error::NotSemisimple(m) => Error::Invariant(format!("quotient by the radical is not semisimple: {m}")),
        other => other,
    })?;
    let components: Vec<Component> = ideals
        .into_iter()
        .map(|ideal| {
            let adapted_basis = ideal.basis().iter().map(|b| quotient.lift(b, n)).collect();
            Component {
                dim: ideal.dim(),
                ideal,
                adapted_basis,
            }
        })
        .collect();
    let p = g.dim();
    let splitting = if p > 0 {
        let rows: Vec<Vec<Rational>> = components
            .iter()
            .flat_map(|c| c.ideal.basis().iter().cloned())
            .collect();
        let stacked = RationalMatrix::from_rows(p, rows)?;
        Some(
            stacked
                .inverse()
                .ok_or_else(|| Error::Invariant("component bases are dependent".into()))?,
        )
    } else {
        None
    };
    Ok(StructureReport {
        dim: n,
        nilradical_basis: rad.basis().to_vec(),
        radical: rad.clone(),
        nilradical: rad,
        nil_class,
        quotient_dim: p,
        components,
        quotient: Some(quotient),
        splitting,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, rat};
    use crate::lie::catalog;

    #[test]
    fn radical_examples() {
        assert!(radical(&catalog::sl2()).unwrap().is_zero());
        assert_eq!(radical(&catalog::solvable2()).unwrap().dim(), 2);
        let r = radical(&catalog::sl2_natural()).unwrap();
        let expect = Subspace::from_generators(
            5,
            vec![
                vec![rat(0), rat(0), rat(0), rat(1), rat(0)],
                vec![rat(0), rat(0), rat(0), rat(0), rat(1)],
            ],
        )
        .unwrap();
        assert_eq!(r, expect);
    }

    #[test]
    fn radical_is_ideal_and_killing_invariant() {
        for name in catalog::CATALOG_INSTANCES {
            let l = catalog::lookup(name).unwrap();
            let r = radical(&l).unwrap();
            let full = Subspace::full(l.dim());
            assert!(l.bracket_spaces(&full, &r).is_subspace_of(&r), "{name}");
            let k = l.killing_form();
            let n = l.dim();
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(k.get(a, b), k.get(b, a));
                    for c in 0..n {
                        // κ([a,b],c) = κ(a,[b,c])
                        let ab = l.basis_bracket(a, b);
                        let bc = l.basis_bracket(b, c);
                        let lhs: Rational = (0..n).map(|i| &ab[i] * k.get(i, c)).sum();
                        let rhs: Rational = (0..n).map(|i| k.get(a, i) * &bc[i]).sum();
                        assert_eq!(lhs, rhs, "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn analyze_examples() {
        let o = StructureOptions::default();
        let s = analyze(&catalog::sl2(), o).unwrap();
        assert!(s.nilradical.is_zero());
        assert_eq!(s.nil_class, 1);
        assert_eq!(s.components.iter().map(|c| c.dim).collect::<Vec<_>>(), vec![3]);

        let h = analyze(&catalog::heisenberg3(), o).unwrap();
        assert_eq!(h.nilradical.dim(), 3);
        assert_eq!(h.nil_class, 3);
        assert_eq!(h.quotient_dim, 0);
        assert!(h.components.is_empty());

        let g = analyze(&catalog::gl2(), o).unwrap();
        assert_eq!(g.nilradical.dim(), 1);
        assert_eq!(g.nil_class, 2);
        assert_eq!(g.components.len(), 1);
        assert_eq!(g.components[0].dim, 3);

        assert!(matches!(
            analyze(&catalog::solvable2(), o),
            Err(Error::HypothesisFailure(_))
        ));
    }

    #[test]
    fn decomposition_examples() {
        let o = StructureOptions::default();
        assert_eq!(simple_decomposition(&catalog::sl2(), o).unwrap().len(), 1);
        let parts = simple_decomposition(&catalog::sl2_plus_sl2(), o).unwrap();
        assert_eq!(parts.iter().map(Subspace::dim).collect::<Vec<_>>(), vec![3, 3]);
        assert!(matches!(
            simple_decomposition(&LieAlgebra::abelian(2), o),
            Err(Error::NotSemisimple(_))
        ));
    }

    #[test]
    fn centroid_of_direct_sum_is_two_dimensional() {
        assert_eq!(centroid(&catalog::sl2_plus_sl2()).len(), 2);
        assert_eq!(centroid(&catalog::sl2()).len(), 1);
    }

    #[test]
    fn so3_over_q_is_simple() {
        // so(3) is not sl2 over Q, but it is central simple: centroid Q, one component
        let l = LieAlgebra::from_brackets(
            vec!["x".into(), "y".into(), "z".into()],
            vec![
                (0, 1, vec![rat(0), rat(0), rat(1)]),
                (1, 2, vec![rat(1), rat(0), rat(0)]),
                (0, 2, vec![rat(0), rat(-1), rat(0)]),
            ],
        )
        .unwrap();
        assert_eq!(simple_decomposition(&l, StructureOptions::default()).unwrap().len(), 1);
    }

    #[test]
    fn non_split_sum_is_rejected() {
        // sl2(Q(√2)) viewed over Q: basis {x, √2 x} for x in (e, h, f).
        // Structure: [a·x, b·y] = ab·[x,y] with √2·√2 = 2.
        let mut br = Vec::new();
        let sl = catalog::sl2();
        let idx = |x: usize, s: usize| x + 3 * s; // s = 0: x, s = 1: √2 x
        for x in 0..3 {
            for y in 0..3 {
                for s in 0..2 {
                    for t in 0..2 {
                        let (i, j) = (idx(x, s), idx(y, t));
                        if i >= j {
                            continue;
                        }
                        let mut v = vec![rat(0); 6];
                        for (k, c) in sl.basis_bracket(x, y).iter().enumerate() {
                            match s + t {
                                0 => v[idx(k, 0)] += c,
                                1 => v[idx(k, 1)] += c,
                                _ => v[idx(k, 0)] += c * rat(2),
                            }
                        }
                        br.push((i, j, v));
                    }
                }
            }
        }
        let labels = (0..6).map(|i| format!("b{i}")).collect();
        let l = LieAlgebra::from_brackets(labels, br).unwrap();
        assert!(matches!(
            simple_decomposition(&l, StructureOptions::default()),
            Err(Error::NotSplit(_))
        ));
    }

    #[test]
    fn roots() {
        // (x - 1/2)(x + 3) x = x^3 + 5/2 x^2 - 3/2 x
        let p = vec![rat(0), frac(-3, 2), frac(5, 2), rat(1)];
        assert_eq!(rational_roots(&p).unwrap(), vec![rat(-3), rat(0), frac(1, 2)]);
        // x^2 - 2
        assert!(rational_roots(&[rat(-2), rat(0), rat(1)]).unwrap().is_empty());
    }

    #[test]
    fn adapted_bases_project_correctly() {
        let o = StructureOptions::default();
        for name in ["sl2_plus_sl2", "sl2_natural", "sl2_adjoint", "gl2"] {
            let l = catalog::lookup(name).unwrap();
            let s = analyze(&l, o).unwrap();
            let total: usize = s.components.iter().map(|c| c.dim).sum();
            assert_eq!(total, s.quotient_dim);
            for (i, c) in s.components.iter().enumerate() {
                assert_eq!(c.adapted_basis.len(), c.dim);
                let mut images = Subspace::zero(s.quotient_dim);
                for b in &c.adapted_basis {
                    let phi = s.project(b);
                    for (j, part) in phi.iter().enumerate() {
                        if j != i {
                            assert!(part.iter().all(Zero::is_zero), "{name}: φ_{j}(B_{i}) ≠ 0");
                        }
                    }
                    images.push(phi[i].clone());
                }
                assert_eq!(images, c.ideal, "{name}: φ_i(B_i) is not a basis of G_i");
            }
        }
    }
}
