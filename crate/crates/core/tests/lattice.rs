mod common;

use common::{frac, q, Q};
use proptest::prelude::*;
use singdelta::{parse_graph, Class, Cycle, Error, Lattice};

fn lat(s: &str) -> Lattice {
    Lattice::new(&parse_graph(s).unwrap()).unwrap()
}

const GRAPHS: &[&str] = &[
    "cqs:15/11",
    "cqs:7/3",
    "sf:-2;(2,1),(3,2),(5,2)",
    "sf:-2;(2,1),(3,2),(5,3)",
    "sf:-4;(2,1)x4",
    "ade:D6",
    "ade:E7",
    r#"{"vertices":[{"e":-3},{"e":-2},{"e":-2},{"e":-3},{"e":-2},{"e":-2},{"e":-4}],"edges":[[0,1],[0,2],[0,3],[3,4],[3,5],[5,6]]}"#,
];

#[test]
fn e_star_and_canonical_cycle_match_direct_solves() {
    for spec in GRAPHS {
        let l = lat(spec);
        let m = l.matrix().to_vec();
        for v in 0..l.len() {
            assert_eq!(l.e_star(v).e_coeffs(), common::e_star(&m, v).as_slice(), "{spec} E*_{v}");
        }
        assert_eq!(l.canonical_cycle().e_coeffs(), common::canonical(&m).as_slice(), "{spec}");
    }
}

#[test]
fn chi_matches_direct_formula() {
    for spec in GRAPHS {
        let l = lat(spec);
        let m = l.matrix().to_vec();
        for a in [vec![1i64; l.len()], (0..l.len() as i64).collect(), vec![2; l.len()]] {
            let c = l.from_dual(&a);
            assert_eq!(l.chi(&c).unwrap(), common::chi(&m, &common::combo(&m, &a)), "{spec} {a:?}");
        }
    }
}

#[test]
fn figure_graph_data() {
    let l = lat("sf:-2;(2,1),(3,2),(5,2)");
    assert_eq!(l.group().order(), 13);
    let ids: Vec<usize> = (0..6).map(|v| l.class_id(&l.class_of(&l.e_star(v)).unwrap())).collect();
    assert_eq!(ids, vec![1, 7, 5, 9, 3, 8]);
    assert_eq!(l.canonical_cycle(), &l.e_star(4));
    assert_eq!(l.canonical_cycle().coeff(0), &frac(12, 13));

    let l = lat("sf:-2;(2,1),(3,2),(5,3)");
    assert_eq!(l.group().order(), 7);
    let ids: Vec<usize> = (0..6).map(|v| l.class_id(&l.class_of(&l.e_star(v)).unwrap())).collect();
    assert_eq!(ids, vec![1, 4, 3, 5, 2, 3]);
    assert_eq!(l.canonical_cycle(), &l.e_star(5));
    assert_eq!(l.canonical_cycle().coeff(0), &frac(6, 7));
}

#[test]
fn four_leg_star_data() {
    let l = lat("sf:-4;(2,1)x4");
    let e0: Vec<Q> = vec![frac(1, 2), frac(1, 4), frac(1, 4), frac(1, 4), frac(1, 4)];
    assert_eq!(l.e_star(0).e_coeffs(), e0.as_slice());
    assert_eq!(l.canonical_cycle(), &(&l.e_star(0) * 2));
}

#[test]
fn ade_canonical_cycle_vanishes() {
    for spec in ["ade:E6", "ade:E7", "ade:E8", "ade:D5", "ade:A4"] {
        assert!(lat(spec).canonical_cycle().is_zero(), "{spec}");
    }
    assert_eq!(lat("ade:E8").group().order(), 1);
    assert_eq!(lat("ade:D6").group().divisors(), &[2, 2]);
    assert_eq!(lat("ade:D5").group().divisors(), &[4]);
}

#[test]
fn r_h_has_coefficients_in_unit_interval() {
    for spec in GRAPHS {
        let l = lat(spec);
        let m = l.matrix().to_vec();
        let mut seen = std::collections::BTreeSet::new();
        for (h, r) in l.enumerate_classes().unwrap() {
            assert!(r.e_coeffs().iter().all(|c| c >= &q(0) && c < &q(1)));
            assert_eq!(l.class_of(&r).unwrap(), h);
            assert!(seen.insert(r.e_coeffs().to_vec()));
            assert!(common::same_class(r.e_coeffs(), &common::combo(&m, &l.group().lift(&h))));
        }
        assert_eq!(seen.len(), l.det() as usize);
    }
}

#[test]
fn errors() {
    let l = lat("cqs:7/3");
    assert_eq!(l.chi(&Cycle::zero(2)), Err(Error::GraphMismatch { expected: 3, found: 2 }));
    let half = Cycle::from_e(vec![frac(1, 2), q(0), q(0)]);
    assert_eq!(l.class_of(&half), Err(Error::NotInLPrime));
    assert_eq!(l.group().index(&Class(vec![3])), 3);
}

fn graph_and_vectors() -> impl Strategy<Value = (String, Vec<i64>, Vec<i64>, Vec<i64>)> {
    proptest::sample::select(GRAPHS).prop_flat_map(|spec| {
        let n = parse_graph(spec).unwrap().len();
        (
            Just(spec.to_string()),
            proptest::collection::vec(-3i64..4, n),
            proptest::collection::vec(-3i64..4, n),
            proptest::collection::vec(-3i64..4, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn class_map_is_additive((spec, a, b, _) in graph_and_vectors()) {
        let l = lat(&spec);
        let (x, y) = (l.from_dual(&a), l.from_dual(&b));
        let sum = l.class_of(&(&x + &y)).unwrap();
        prop_assert_eq!(sum, l.group().add(&l.class_of(&x).unwrap(), &l.class_of(&y).unwrap()));
    }

    #[test]
    fn chi_is_quadratic((spec, a, _, e) in graph_and_vectors()) {
        let l = lat(&spec);
        let x = l.from_dual(&a);
        let y = Cycle::from_e_int(&e);
        let lhs = l.chi(&(&x + &y)).unwrap() - l.chi(&x).unwrap() - l.chi(&y).unwrap();
        prop_assert_eq!(lhs, -l.pairing(&x, &y).unwrap());
        let neg = l.chi(&-&x).unwrap();
        prop_assert_eq!(neg, l.chi(&x).unwrap() - l.pairing(&x, l.canonical_cycle()).unwrap());
    }
}
