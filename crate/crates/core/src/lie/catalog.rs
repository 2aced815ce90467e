//! Built-in algebras addressable by name.

use super::LieAlgebra;
use crate::arith::{rat, Rational};
use crate::error::{Error, Result};

/// Name and dimension of every catalog entry (`abelian(k)` is parametric).
pub const CATALOG: [(&str, &str); 8] = [
    ("abelian(k)", "k"),
    ("heisenberg3", "3"),
    ("sl2", "3"),
    ("gl2", "4"),
    ("sl2_plus_sl2", "6"),
    ("sl2_natural", "5"),
    ("sl2_adjoint", "6"),
    ("solvable2", "2"),
];

/// Concrete names used by test suites that sweep the catalog.
pub const CATALOG_INSTANCES: [&str; 9] = [
    "abelian1",
    "abelian3",
    "heisenberg3",
    "sl2",
    "gl2",
    "sl2_plus_sl2",
    "sl2_natural",
    "sl2_adjoint",
    "solvable2",
];

fn v(dim: usize, terms: &[(i64, usize)]) -> Vec<Rational> {
    let mut out = vec![rat(0); dim];
    for &(c, k) in terms {
        out[k] += rat(c);
    }
    out
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// sl2 brackets on basis positions (e, h, f) = (o, o+1, o+2) inside a `dim`-dimensional algebra.
fn sl2_brackets(dim: usize, o: usize) -> Vec<(usize, usize, Vec<Rational>)> {
    vec![
        (o, o + 1, v(dim, &[(-2, o)])),
        (o, o + 2, v(dim, &[(1, o + 1)])),
        (o + 1, o + 2, v(dim, &[(-2, o + 2)])),
    ]
}

fn build(names: &[&str], brackets: Vec<(usize, usize, Vec<Rational>)>) -> LieAlgebra {
    LieAlgebra::from_brackets(labels(names), brackets).expect("catalog algebra is valid")
}

pub fn sl2() -> LieAlgebra {
    build(&["e", "h", "f"], sl2_brackets(3, 0))
}

pub fn gl2() -> LieAlgebra {
    build(&["e", "h", "f", "z"], sl2_brackets(4, 0))
}

pub fn heisenberg3() -> LieAlgebra {
    build(&["x", "y", "z"], vec![(0, 1, v(3, &[(1, 2)]))])
}

pub fn sl2_plus_sl2() -> LieAlgebra {
    let mut b = sl2_brackets(6, 0);
    b.extend(sl2_brackets(6, 3));
    build(&["e1", "h1", "f1", "e2", "h2", "f2"], b)
}

/// sl2 acting on its natural module Q^2 = span(v1, v2), an abelian ideal.
pub fn sl2_natural() -> LieAlgebra {
    let d = 5;
    let mut b = sl2_brackets(d, 0);
    // e v1 = 0, e v2 = v1, h v1 = v1, h v2 = -v2, f v1 = v2, f v2 = 0
    b.push((0, 4, v(d, &[(1, 3)])));
    b.push((1, 3, v(d, &[(1, 3)])));
    b.push((1, 4, v(d, &[(-1, 4)])));
    b.push((2, 3, v(d, &[(1, 4)])));
    build(&["e", "h", "f", "v1", "v2"], b)
}

/// sl2 acting on a copy of its adjoint module, an abelian ideal (E, H, F).
pub fn sl2_adjoint() -> LieAlgebra {
    let d = 6;
    let mut b = sl2_brackets(d, 0);
    // [x, Y] = copy of [x, y]
    b.push((0, 4, v(d, &[(-2, 3)]))); // [e, H] = -2E
    b.push((0, 5, v(d, &[(1, 4)]))); // [e, F] = H
    b.push((1, 3, v(d, &[(2, 3)]))); // [h, E] = 2E
    b.push((1, 5, v(d, &[(-2, 5)]))); // [h, F] = -2F
    b.push((2, 3, v(d, &[(-1, 4)]))); // [f, E] = -H
    b.push((2, 4, v(d, &[(2, 5)]))); // [f, H] = 2F
    build(&["e", "h", "f", "E", "H", "F"], b)
}

pub fn solvable2() -> LieAlgebra {
    build(&["e", "f"], vec![(0, 1, v(2, &[(1, 1)]))])
}

fn parse_abelian(name: &str) -> Option<usize> {
    let rest = name.strip_prefix("abelian")?;
    let digits = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(rest);
    digits.parse().ok()
}

/// Looks up a catalog algebra: `abelian(k)` / `abelianK`, `heisenberg3`, `sl2`, ...
pub fn lookup(name: &str) -> Result<LieAlgebra> {
    Ok(match name {
        "heisenberg3" => heisenberg3(),
        "sl2" => sl2(),
        "gl2" => gl2(),
        "sl2_plus_sl2" => sl2_plus_sl2(),
        "sl2_natural" => sl2_natural(),
        "sl2_adjoint" => sl2_adjoint(),
        "solvable2" => solvable2(),
        _ => match parse_abelian(name) {
            Some(k) if k >= 1 => LieAlgebra::abelian(k),
            _ => return Err(Error::UnknownAlgebra(name.to_string())),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_is_valid_with_stated_dimension() {
        for (name, dim) in CATALOG {
            let concrete = if name == "abelian(k)" { "abelian(4)" } else { name };
            let l = lookup(concrete).unwrap();
            let expect: usize = dim.parse().unwrap_or(4);
            assert_eq!(l.dim(), expect, "{name}");
            assert!(l.jacobi_failure().is_none());
        }
    }

    #[test]
    fn json_roundtrip_for_catalog() {
        for name in CATALOG_INSTANCES {
            let l = lookup(name).unwrap();
            let back = LieAlgebra::from_json(&l.to_json()).unwrap();
            assert_eq!(back, l, "{name}");
        }
    }

    #[test]
    fn abelian_spellings() {
        assert_eq!(lookup("abelian3").unwrap().dim(), 3);
        assert_eq!(lookup("abelian(2)").unwrap().dim(), 2);
        assert!(matches!(lookup("abelian0"), Err(Error::UnknownAlgebra(_))));
        assert!(matches!(lookup("so3"), Err(Error::UnknownAlgebra(_))));
    }
}
