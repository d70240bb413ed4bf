use std::collections::BTreeMap;

use gca_core::Coeff;
use repscheme::tangent::{build_tangent, l_pairing};
use repscheme::{beta_check, build_f_and_l, build_gamma, cobar, gamma_check, matrixify, serre_pairing_check, DgMap, Leibniz};

fn binom4(k: usize) -> usize {
    [1, 4, 6, 4, 1][k]
}

#[test]
fn l_and_f_have_the_expected_shapes() {
    for d in 1..=2 {
        let (f, l) = build_f_and_l(d).unwrap();
        let want: BTreeMap<i32, usize> = (0..=4).map(|k| (k as i32, d * d * binom4(k))).collect();
        assert_eq!(l.ranks(), want);
        let want: BTreeMap<i32, usize> = (0..=4).map(|k| (-(k as i32), d * binom4(k))).collect();
        assert_eq!(f.ranks(), want);
    }
}

#[test]
fn differentials_square_to_zero() {
    for d in 1..=2 {
        let r = beta_check(d).unwrap();
        assert!(r.passed(), "d={d}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn rank_one_l_has_zero_differential() {
    // 1×1 matrices make A_1 ⊗ ∧V* graded commutative, so [τ, −] = 0: the Koszul
    // differentials X_i − X_i cancel
    let (f, l) = build_f_and_l(1).unwrap();
    assert!(l.diff.iter().all(|v| v.is_empty()));
    let e1 = f.index("f1.e1").unwrap();
    let text = f.to_string(&f.diff[e1]);
    assert!(text.contains("X1_11") && text.contains("x1"), "{text}");
}

#[test]
fn tangent_complex_degrees() {
    let a = matrixify(&cobar(4, Leibniz::Left).unwrap(), 2).unwrap();
    let t = build_tangent(&a).unwrap();
    let ranks: Vec<(i32, usize)> = t.ranks().into_iter().collect();
    assert_eq!(ranks, vec![(-1, 4), (0, 16), (1, 24), (2, 16), (3, 4)]);
    assert!(t.check().passed());
}

#[test]
fn gamma_is_a_chain_isomorphism() {
    for d in 1..=2 {
        let r = gamma_check(d).unwrap();
        assert!(r.passed(), "d={d}: {:?}", r.failures().collect::<Vec<_>>());
    }
    let a = matrixify(&cobar(4, Leibniz::Left).unwrap(), 2).unwrap();
    let g = build_gamma(&a).unwrap();
    let x = g.tangent.index("d/dX1_12").unwrap();
    let (j, c) = g.map.images[x].iter().next().unwrap();
    assert_eq!(g.l1.gens[*j].0, "b1^12");
    assert_eq!(c.as_constant(), Some(Coeff::one()));
    let t = g.tangent.index("d/dT_21").unwrap();
    assert_eq!(g.l1.gens[*g.map.images[t].keys().next().unwrap()].0, "b1234^21");
}

#[test]
fn flipping_one_sign_of_gamma_breaks_it() {
    let a = matrixify(&cobar(4, Leibniz::Left).unwrap(), 2).unwrap();
    let g = build_gamma(&a).unwrap();
    let mut images = g.map.images.clone();
    let i = g.tangent.index("d/dC13_21").unwrap();
    for c in images[i].values_mut() {
        *c = -&*c;
    }
    let bad = DgMap { source: g.tangent.clone(), target: g.l1.clone(), images };
    assert!(!bad.check().passed());
    assert!(bad.is_signed_bijection());
}

#[test]
fn serre_pairing_is_omega0() {
    for d in 1..=2 {
        let r = serre_pairing_check(d).unwrap();
        assert!(r.passed(), "d={d}: {:?}", r.failures().collect::<Vec<_>>());
    }
}

#[test]
fn trace_pairing_on_complementary_degrees() {
    let (_, l) = build_f_and_l(2).unwrap();
    let i = l.index("b13^12").unwrap();
    let j = l.index("b24^21").unwrap();
    // x1∧x3∧x2∧x4 = −vol
    assert_eq!(l_pairing(&l, 4, i, j), -1);
    assert_eq!(l_pairing(&l, 4, i, l.index("b24^12").unwrap()), 0);
    assert_eq!(l_pairing(&l, 4, l.index("b^11").unwrap(), l.index("b1234^11").unwrap()), 1);
}
