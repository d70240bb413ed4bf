use repscheme::{cobar, exterior_coalgebra, h0_hilbert_check, printed_example_check, Leibniz, NcElem, RepError};

fn letter(g: &repscheme::CobarDga, name: &str) -> NcElem {
    NcElem::letter(&g.algebra, name).unwrap()
}

/// `c_lk = −c_kl`.
fn c(g: &repscheme::CobarDga, i: usize, j: usize) -> NcElem {
    if i < j {
        letter(g, &format!("c{i}{j}"))
    } else {
        -&letter(g, &format!("c{j}{i}"))
    }
}

fn x(g: &repscheme::CobarDga, i: usize) -> NcElem {
    letter(g, &format!("x{i}"))
}

#[test]
fn right_leibniz_reproduces_the_printed_example() {
    let g = cobar(4, Leibniz::Right).unwrap();
    for i in 1..=4 {
        assert!(g.differential(&format!("x{i}")).unwrap().is_zero());
        for j in i + 1..=4 {
            let want = x(&g, i).commutator(&x(&g, j));
            assert_eq!(*g.differential(&format!("c{i}{j}")).unwrap(), want, "d c{i}{j}");
        }
    }
    for [i, j, k] in [[1, 3, 2], [1, 2, 4], [1, 4, 3], [2, 3, 4]] {
        let want = &(&x(&g, i).commutator(&c(&g, j, k)) + &x(&g, j).commutator(&c(&g, k, i))) + &x(&g, k).commutator(&c(&g, i, j));
        assert_eq!(*g.differential(&format!("s{i}{j}{k}")).unwrap(), want, "d s{i}{j}{k}");
    }
    let mut dt = NcElem::zero(&g.algebra);
    for (i, s) in [(1, "s234"), (2, "s143"), (3, "s124"), (4, "s132")] {
        dt = &dt + &x(&g, i).commutator(&letter(&g, s));
    }
    for ((a, b), (p, q)) in [((1, 2), (3, 4)), ((1, 3), (4, 2)), ((1, 4), (2, 3))] {
        dt = &dt + &c(&g, a, b).commutator(&c(&g, p, q));
    }
    assert_eq!(*g.differential("t").unwrap(), dt);
    let r = printed_example_check().unwrap();
    assert_eq!(r.entries.len(), 15);
    assert!(r.passed());
}

#[test]
fn left_leibniz_differs_only_in_the_c_c_terms() {
    let left = cobar(4, Leibniz::Left).unwrap();
    let right = cobar(4, Leibniz::Right).unwrap();
    for name in left.generator_names() {
        let (l, r) = (left.differential(&name).unwrap().to_string(), right.differential(&name).unwrap().to_string());
        if name == "t" {
            assert_ne!(l, r);
        } else {
            assert_eq!(l, r, "d {name}");
        }
    }
    let dt = left.differential("t").unwrap().to_string();
    assert!(dt.contains("- c12*c34"), "{dt}");
    assert!(dt.contains("x1*s234"), "{dt}");
}

#[test]
fn d_squared_vanishes_for_both_rules() {
    for n in 1..=4 {
        for rule in [Leibniz::Left, Leibniz::Right] {
            let r = cobar(n, rule).unwrap().check_d_squared();
            assert!(r.passed(), "n={n} {rule:?}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }
}

#[test]
fn coproduct_of_two_variables() {
    let c = exterior_coalgebra(2);
    let top = c.index(&[1, 2]).unwrap();
    assert_eq!(c.coproduct_string(top), "x1 (x) x2 - x2 (x) x1");
    assert_eq!(c.coproduct_string(c.index(&[1]).unwrap()), "0");
}

#[test]
fn generator_degrees() {
    let g = cobar(4, Leibniz::Left).unwrap();
    let mut by_degree = std::collections::BTreeMap::new();
    for l in g.algebra.letters() {
        *by_degree.entry(l.degree).or_insert(0) += 1;
    }
    assert_eq!(by_degree.into_iter().collect::<Vec<_>>(), vec![(-3, 1), (-2, 4), (-1, 6), (0, 4)]);
}

/// Number of monomials of degree w in n variables, by enumeration.
fn monomial_count(n: usize, w: u32) -> usize {
    fn go(vars: usize, w: u32) -> usize {
        if vars == 1 {
            return 1;
        }
        (0..=w).map(|e| go(vars - 1, w - e)).sum()
    }
    go(n, w)
}

#[test]
fn degree_zero_homology_is_the_polynomial_ring() {
    for n in 1..=4 {
        let g = cobar(n, Leibniz::Left).unwrap();
        for w in 0..=5 {
            let (h0, h1) = g.low_homology(w);
            assert_eq!(h0, monomial_count(n, w), "n={n} w={w}");
            assert_eq!(h1, 0, "n={n} w={w}");
        }
        assert!(h0_hilbert_check(&g, 5).passed());
    }
    for (n, dims) in [(2, [1, 2, 3, 4]), (3, [1, 3, 6, 10])] {
        let g = cobar(n, Leibniz::Left).unwrap();
        assert_eq!((0..4).map(|w| g.low_homology(w).0).collect::<Vec<_>>(), dims);
    }
}

#[test]
fn sizes_outside_the_range_are_rejected() {
    assert!(matches!(cobar(0, Leibniz::Left), Err(RepError::Range(_))));
    assert!(matches!(cobar(5, Leibniz::Left), Err(RepError::Range(_))));
}
