use std::time::Instant;

use gca_core::{parse_elem, Elem};
use repscheme::scheme::{bracket, generator_matrix};
use repscheme::{cobar, matrixify, Leibniz, RepError};

#[test]
fn one_by_one_matrices_give_the_abelianization() {
    for n in 1..=4 {
        let a = matrixify(&cobar(n, Leibniz::Left).unwrap(), 1).unwrap();
        assert!(a.presentation.differentials().iter().all(Elem::is_zero), "n={n}");
    }
}

#[test]
fn d_squared_vanishes_up_to_four_variables_and_rank_two() {
    for n in 1..=4 {
        for d in 1..=2 {
            let start = Instant::now();
            let a = matrixify(&cobar(n, Leibniz::Left).unwrap(), d).unwrap();
            assert!(a.presentation.check_d_squared().passed(), "n={n} d={d}");
            assert!(start.elapsed().as_secs() < 120);
        }
    }
}

#[test]
fn commutator_entries_by_hand() {
    let a = matrixify(&cobar(4, Leibniz::Left).unwrap(), 2).unwrap();
    let alg = a.algebra();
    let want = parse_elem(alg, "X1_11*X2_12 + X1_12*X2_22 - X2_11*X1_12 - X2_12*X1_22").unwrap();
    assert_eq!(*a.presentation.diff_by_name("C12_12").unwrap(), want);
    let want = parse_elem(alg, "X1_21*X2_12 - X2_21*X1_12").unwrap();
    assert_eq!(*a.presentation.diff_by_name("C12_22").unwrap(), want);
}

#[test]
fn top_differential_matches_the_left_rule_formula() {
    let a = matrixify(&cobar(4, Leibniz::Left).unwrap(), 2).unwrap();
    let alg = a.algebra();
    let m = |name: &str| generator_matrix(alg, name, 2).unwrap();
    let mut dt = bracket(&m("X1"), 0, &m("S234"), -2);
    for (x, s) in [("X2", "S143"), ("X3", "S124"), ("X4", "S132")] {
        dt = dt.add(&bracket(&m(x), 0, &m(s), -2));
    }
    for (p, q) in [("C12", "C34"), ("C14", "C23")] {
        dt = dt.sub(&bracket(&m(p), -1, &m(q), -1));
    }
    // C42 = −C24
    dt = dt.add(&bracket(&m("C13"), -1, &m("C24"), -1));
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(a.presentation.diff_by_name(&format!("T_{}{}", i + 1, j + 1)).unwrap(), dt.get(i, j));
        }
    }
}

#[test]
fn bad_inputs() {
    let g = cobar(2, Leibniz::Left).unwrap();
    assert!(matches!(matrixify(&g, 0), Err(RepError::Range(_))));
    assert!(matches!(matrixify(&cobar(2, Leibniz::Right).unwrap(), 2), Err(RepError::Input(_))));
}
