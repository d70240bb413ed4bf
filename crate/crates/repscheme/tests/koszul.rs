use gca_core::parse_elem;
use repscheme::{koszul_bimodule_resolution, koszul_check};

#[test]
fn one_variable_is_the_two_term_complex() {
    let k = koszul_bimodule_resolution(1).unwrap();
    assert_eq!(k.window(), (-1, 0));
    assert_eq!(*k.d(-1).get(0, 0), parse_elem(k.ring(), "v1 - u1").unwrap());
    assert!(koszul_check(1, 4).unwrap().passed());
}

#[test]
fn four_variables_use_the_volume_identification() {
    let k = koszul_bimodule_resolution(4).unwrap();
    assert_eq!(k.basis(-4), ["vol"]);
    assert_eq!(k.basis(-3), ["x1*", "x2*", "x3*", "x4*"]);
    assert_eq!(k.basis(-2).len(), 6);
    // ∂(vol) has x1 coefficient along x1* = x2∧x3∧x4
    assert_eq!(*k.d(-4).get(0, 0), parse_elem(k.ring(), "v1 - u1").unwrap());
}

#[test]
fn composites_vanish_and_the_resolution_is_exact() {
    for n in 1..=4 {
        let r = koszul_check(n, 4).unwrap();
        assert!(r.passed(), "n={n}: {:?}", r.failures().collect::<Vec<_>>());
        assert!(r.entries.iter().any(|e| e.name == "weight 4: H^0 = 35" || n != 4));
    }
}
