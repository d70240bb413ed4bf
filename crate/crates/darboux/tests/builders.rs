use std::sync::Arc;

use darboux::*;
use derham::check_shifted_symplectic;
use gca_core::{parse_elem, Algebra, Elem, Field, Generator, Presentation};
use proptest::prelude::*;

fn s(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn even(f: &[&str], g: &[&str]) -> EvenData {
    EvenData { field: Field::Rationals, vars: s(&["x"]), f: s(f), g: s(g) }
}

#[test]
fn cme_even() {
    let x = s(&["x"]);
    assert!(cme_check_even(Field::Rationals, &x, &s(&["x"]), &s(&["0"])).unwrap().holds);
    assert!(cme_check_even(Field::Rationals, &x, &s(&["x", "x"]), &s(&["x", "-x"])).unwrap().holds);
    let bad = cme_check_even(Field::Rationals, &x, &s(&["x"]), &s(&["x"])).unwrap();
    assert!(!bad.holds);
    assert_eq!(bad.residual.to_string(), "x^2");
    assert!(matches!(cme_check_even(Field::Rationals, &x, &s(&["x"]), &s(&[])), Err(DarbouxError::Length(1, 0))));
}

#[test]
fn cme_general_and_weighted() {
    let x = s(&["x"]);
    assert!(cme_check_general(Field::Gaussian, &x, &s(&["x", "i*x"])).unwrap().holds);
    assert!(cme_check_general(Field::Rationals, &x, &[]).unwrap().holds);
    assert!(!cme_check_general(Field::Rationals, &x, &s(&["x"])).unwrap().holds);
    assert!(cme_check_weighted(Field::Rationals, &x, &[], &s(&["x", "x"]), &s(&["1", "-1"])).unwrap().holds);
    assert!(cme_check_weighted(Field::Rationals, &x, &[], &[], &[]).unwrap().holds);
    assert!(!cme_check_weighted(Field::Rationals, &x, &[], &s(&["x", "x"]), &s(&["1", "1"])).unwrap().holds);
    // single-sign perturbation of a valid family is rejected
    assert!(!cme_check_general(Field::Gaussian, &x, &s(&["x", "-i*x + x"])).unwrap().holds);
}

#[test]
fn even_builder() {
    let a = build_even_darboux(&even(&["x"], &["0"])).unwrap();
    let p = &a.presentation;
    assert!(p.diff_by_name("y1").unwrap().is_zero());
    assert_eq!(p.diff_by_name("z1").unwrap().to_string(), "x");
    assert_eq!(p.diff_by_name("w1").unwrap().to_string(), "y1");

    let b = build_even_darboux(&even(&["x", "x"], &["x", "-x"])).unwrap();
    assert_eq!(b.presentation.diff_by_name("w1").unwrap().to_string(), "y1 + y2 + z1 - z2");
    assert!(b.presentation.check_d_squared().passed());
    assert!(check_shifted_symplectic(&b.dr, &b.omega).passed());

    assert!(matches!(build_even_darboux(&even(&["x"], &["x"])), Err(DarbouxError::Cme(_))));
}

#[test]
fn even_swap_is_an_isomorphism() {
    let a = build_even_darboux(&even(&["x^2", "x"], &["x", "-x^2"])).unwrap();
    let b = build_even_darboux(&even(&["x", "-x^2"], &["x^2", "x"])).unwrap();
    let sw = swap_morphism(&a, &b).unwrap();
    assert!(sw.check().passed());
    let back = swap_morphism(&b, &a).unwrap();
    let round = sw.then(&back).unwrap();
    assert!(round.same_images(&gca_core::Morphism::identity(&a.presentation)));
}

#[test]
fn general_builder() {
    let g = GeneralData { field: Field::Gaussian, vars: s(&["x"]), f: s(&["x", "i*x"]) };
    let a = build_general_darboux(&g).unwrap();
    let p = &a.presentation;
    assert_eq!(p.diff_by_name("y1").unwrap().to_string(), "1/2*x");
    assert_eq!(p.diff_by_name("y2").unwrap(), &parse_elem(p.algebra(), "1/2*i*x").unwrap());
    assert_eq!(p.diff_by_name("z1").unwrap(), &parse_elem(p.algebra(), "y1 + i*y2").unwrap());

    let empty = build_general_darboux(&GeneralData { field: Field::Rationals, vars: s(&["x"]), f: vec![] }).unwrap();
    assert!(empty.presentation.diff_by_name("z1").unwrap().is_zero());
    assert_eq!(empty.omega.leading.to_string(), "ddr(x)*ddr(z1)");

    let bad = GeneralData { field: Field::Rationals, vars: s(&["x"]), f: s(&["x"]) };
    assert!(matches!(build_general_darboux(&bad), Err(DarbouxError::Cme(_))));
}

#[test]
fn weighted_builder() {
    let d = WeightedData { field: Field::Rationals, vars: s(&["x"]), units: vec![], f: s(&["x", "x"]), q: s(&["1", "-1"]) };
    let a = build_weighted_darboux(&d).unwrap();
    let p = &a.presentation;
    assert_eq!(p.diff_by_name("y1").unwrap().to_string(), "1/2*x");
    assert_eq!(p.diff_by_name("y2").unwrap().to_string(), "-1/2*x");
    assert!(check_shifted_symplectic(&a.dr, &a.omega).passed());

    // nonconstant weight: f = (x, x(1+x^2)), q = (-1, (1+x^2)^2), Σ f²/q = -x² + x² = 0
    let nc = WeightedData {
        field: Field::Rationals,
        vars: s(&["x"]),
        units: s(&["1+x^2"]),
        f: s(&["x", "x*(1+x^2)"]),
        q: s(&["-1", "(1+x^2)^2"]),
    };
    let b = build_weighted_darboux(&nc).unwrap();
    assert!(b.presentation.check_d_squared().passed());

    let zero_q = WeightedData { field: Field::Rationals, vars: s(&["x"]), units: vec![], f: s(&["x"]), q: s(&["0"]) };
    assert!(matches!(build_weighted_darboux(&zero_q), Err(DarbouxError::NotInvertible(_))));
}

#[test]
fn truncation() {
    let a = build_even_darboux(&even(&["x", "x"], &["x", "-x"])).unwrap();
    let (b, iota) = darboux_subalgebra(&a.presentation, -5).unwrap();
    assert!(Arc::ptr_eq(&b, &a.presentation));
    assert!(iota.check().passed());
    // keeping w while dropping the degree −1 layer is not closed under d
    let err = subalgebra_without(&a.presentation, |g| g.degree == -1).unwrap_err();
    assert!(matches!(err, DarbouxError::NotClosed { ref generator, .. } if generator == "w1"));
    let (base, _) = darboux_subalgebra(&a.presentation, -1).unwrap();
    assert_eq!(base.algebra().len(), 1);

    // dropping the bottom layer of a three-layer algebra
    let alg = Algebra::new(
        Field::Rationals,
        vec![
            Generator::new("x", 0),
            Generator::new("c1", -1),
            Generator::new("c2", -1),
            Generator::new("s", -2),
            Generator::new("t", -3),
        ],
    )
    .unwrap();
    let p = Arc::new(Presentation::parse(alg, &[("c1", "x"), ("c2", "x"), ("s", "c1 - c2"), ("t", "x*s")]).unwrap());
    let (b, iota) = darboux_subalgebra(&p, -3).unwrap();
    assert_eq!(b.algebra().len(), 4);
    assert!(iota.check().passed());
    assert!(b.check_d_squared().passed());
}

fn random_form(dr: &derham::DeRham, coeffs: &[i64]) -> Elem {
    let names: Vec<String> = dr.base().algebra().generators().iter().map(|g| g.name.clone()).collect();
    let mut e = Elem::zero(dr.algebra());
    for (k, c) in coeffs.iter().enumerate() {
        let a = &names[k % names.len()];
        let b = &names[(k * 7 + 3) % names.len()];
        let t = &(&dr.gen(a).unwrap() * &dr.ddr_gen(b).unwrap()).scale(&(*c).into()) * &dr.ddr_gen(a).unwrap();
        e = &e + &t;
    }
    e
}

proptest! {
    #[test]
    fn differentials_anticommute(coeffs in prop::collection::vec(-3i64..=3, 1..8)) {
        let cases = [
            build_even_darboux(&even(&["x^2", "x"], &["x", "-x^2"])).unwrap(),
            build_general_darboux(&GeneralData { field: Field::Gaussian, vars: s(&["x", "u"]), f: s(&["x*u", "i*x*u"]) }).unwrap(),
        ];
        for a in &cases {
            let dr = &a.dr;
            let f = random_form(dr, &coeffs);
            let d = dr.d(&f).unwrap();
            let dd = dr.ddr(&f).unwrap();
            prop_assert!(dr.d(&d).unwrap().is_zero());
            prop_assert!(dr.ddr(&dd).unwrap().is_zero());
            prop_assert!((&dr.d(&dd).unwrap() + &dr.ddr(&d).unwrap()).is_zero());
        }
    }
}
