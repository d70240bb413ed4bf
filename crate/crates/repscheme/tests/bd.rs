use gca_core::Coeff;
use repscheme::{build_bd, cme_bd, iterated_crit_bd, maindim4};

#[test]
fn classical_master_equation_holds_exactly() {
    for d in 1..=3 {
        let r = cme_bd(d).unwrap();
        assert!(r.passed(), "d={d}: {:?}", r.failures().collect::<Vec<_>>());
    }
    assert!(repscheme::bd::cme_bd_residual(2).unwrap().is_zero());
}

#[test]
fn hamiltonian_identities_and_primitive() {
    for d in 1..=2 {
        let bd = build_bd(d).unwrap();
        let r = bd.check().unwrap();
        assert!(r.passed(), "d={d}: {:?}", r.failures().collect::<Vec<_>>());
        let partials = bd.partial_identities().unwrap();
        assert!(partials.entries.len() >= 10);
        assert!(partials.passed());
    }
}

#[test]
fn perturbed_primitive_fails() {
    let bd = build_bd(2).unwrap();
    assert!(bd.primitive_check(&Coeff::from_int(2)).unwrap().passed());
    let bad = bd.primitive_check(&Coeff::from_int(3)).unwrap();
    assert!(!bad.passed());
    assert!(bad.failures().all(|e| e.residual.is_some()));
}

#[test]
fn omega_has_the_seven_trace_blocks() {
    let bd = build_bd(1).unwrap();
    let m = bd.dr.pairing_matrix(&bd.omega0).unwrap();
    let nonzero: usize = m.iter().map(|row| row.iter().filter(|c| !c.is_zero()).count()).sum();
    // X–S four ways and C–C three ways, each counted in both orders
    assert_eq!(nonzero, 14);
}

#[test]
fn lagrangian_intersection_has_lambda_two() {
    for d in 1..=2 {
        let bd = build_bd(d).unwrap();
        let m = maindim4(&bd).unwrap();
        let r = m.report();
        assert!(r.passed(), "d={d}: {:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(m.residue.lambda, Some(Coeff::from_int(2)));
    }
}

#[test]
fn iterated_critical_locus_is_bd() {
    for d in 1..=2 {
        let bd = build_bd(d).unwrap();
        let it = iterated_crit_bd(&bd).unwrap();
        let r = it.report();
        assert!(r.passed(), "d={d}: {:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(it.table.len(), bd.presentation.algebra().len());
    }
}
