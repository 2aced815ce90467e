use liepi::arith::{frac, Rational, RationalMatrix};
use liepi::codim::{codimension, Budget, CodimMode};
use liepi::exponent::{
    exponent_from_structure, find_lower_witness, height_spans, verify_upper, QPolySpec, UpperMode, WitnessOptions,
};
use liepi::lie::{analyze, catalog, LieAlgebra, StructureOptions};
use liepi::Error;
use proptest::prelude::*;

#[test]
fn catalog_round_trips_through_json() {
    for name in catalog::CATALOG_INSTANCES {
        let l = catalog::lookup(name).unwrap();
        let back = LieAlgebra::from_json(&l.to_json()).unwrap();
        assert_eq!(back, l, "{name}");
        assert_eq!(back.fingerprint(), l.fingerprint());
    }
}

#[test]
fn derivations_reproduce_span_generators() {
    for name in catalog::CATALOG_INSTANCES {
        let l = catalog::lookup(name).unwrap();
        let Ok(rep) = analyze(&l, StructureOptions::default()) else {
            continue;
        };
        let table = height_spans(&l, &rep).unwrap();
        for h in &table.spans {
            for (v, how) in &h.generators {
                assert_eq!(&how.evaluate(&l, &rep), v, "{name} {how}");
            }
        }
    }
}

#[test]
fn semisimple_exponent_is_largest_component() {
    let l = catalog::sl2_plus_sl2();
    let rep = analyze(&l, StructureOptions::default()).unwrap();
    assert_eq!(rep.nilradical.dim(), 0);
    let e = exponent_from_structure(&l, &rep).unwrap();
    assert_eq!(e.d, rep.components.iter().map(|c| c.dim).max().unwrap());
    assert!(e.spans.get(0b11).span.is_zero());
}

#[test]
fn upper_and_lower_checks_sandwich_the_exponent() {
    let b = Budget::default();
    for name in catalog::CATALOG_INSTANCES {
        let l = catalog::lookup(name).unwrap();
        let Ok(rep) = analyze(&l, StructureOptions::default()) else {
            continue;
        };
        let e = exponent_from_structure(&l, &rep).unwrap();
        let p = rep.nil_class;
        let spec = QPolySpec::new(e.d + 1, p, (e.d + 1) * p).unwrap();
        let v = verify_upper(&l, spec, UpperMode::Sampled { count: 24, seed: 3 }, &b).unwrap();
        assert!(v.passed, "{name}: {v:?}");
        let found = find_lower_witness(&l, &rep, e.d, 1, WitnessOptions { max_n: 6 }, &b);
        if e.d == 0 {
            assert!(matches!(found, Err(Error::HypothesisFailure(_))), "{name}");
        } else {
            assert!(found.unwrap().is_some(), "{name}");
        }
    }
}

fn random_change(dim: usize, entries: &[(i64, i64)]) -> Option<RationalMatrix> {
    let rows: Vec<Vec<Rational>> = entries
        .chunks(dim)
        .take(dim)
        .map(|r| r.iter().map(|&(a, b)| frac(a, b)).collect())
        .collect();
    let m = RationalMatrix::from_rows(dim, rows).ok()?;
    m.inverse().map(|_| m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn codimensions_ignore_the_basis(
        which in 0usize..4,
        entries in prop::collection::vec((-3i64..=3, 1i64..=3), 25),
    ) {
        let l = catalog::lookup(["sl2", "heisenberg3", "gl2", "sl2_natural"][which]).unwrap();
        let Some(m) = random_change(l.dim(), &entries) else {
            return Ok(());
        };
        let l2 = l.change_basis(&m).unwrap();
        for n in 1..=4 {
            let a = codimension(&l, n, CodimMode::Exact, &Budget::default()).unwrap().value;
            let b = codimension(&l2, n, CodimMode::Exact, &Budget::default()).unwrap().value;
            prop_assert_eq!(a, b);
        }
        let d1 = exponent_from_structure(&l, &analyze(&l, StructureOptions::default()).unwrap()).unwrap().d;
        let d2 = exponent_from_structure(&l2, &analyze(&l2, StructureOptions::default()).unwrap()).unwrap().d;
        prop_assert_eq!(d1, d2);
    }

    #[test]
    fn modular_codimension_matches_exact(which in 0usize..5, n in 1usize..=5, seed in any::<u64>()) {
        let l = catalog::lookup(["sl2", "heisenberg3", "gl2", "sl2_natural", "solvable2"][which]).unwrap();
        let exact = codimension(&l, n, CodimMode::Exact, &Budget::default()).unwrap().value;
        let modular = codimension(&l, n, CodimMode::Modular { prime_bits: 61, trials: 2, seed }, &Budget::default())
            .unwrap();
        prop_assert!(modular.value <= exact);
        prop_assert_eq!(modular.value, exact);
        let sampled = codimension(&l, n, CodimMode::Sampled { seed, plateau: None }, &Budget::default()).unwrap();
        prop_assert!(sampled.value <= exact);
    }
}
