use std::sync::Arc;

use complexes::*;
use darboux::{GeneralData, WeightedData};
use gca_core::{parse_elem, Algebra, Coeff, Field, Generator};

fn s(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn general(field: Field, vars: &[&str], f: &[&str]) -> TqData {
    TqData::general(&GeneralData { field, vars: s(vars), f: s(f) }).unwrap()
}

fn ring(vars: &[&str]) -> Arc<Algebra> {
    Algebra::new(Field::Rationals, vars.iter().map(|v| Generator::new(*v, 0)).collect()).unwrap()
}

fn matrix(r: &Arc<Algebra>, rows: &[&[&str]]) -> Matrix {
    let mut m = Matrix::zeros(r, rows.len(), rows.first().map_or(0, |x| x.len()));
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            m.set(i, j, parse_elem(r, e).unwrap());
        }
    }
    m
}

/// Koszul complex of (x1, x2) in degrees 0..2.
fn koszul2(r: &Arc<Algebra>, corner: &str) -> FreeModuleComplex {
    let d0 = matrix(r, &[&["x1"], &["x2"]]);
    let d1 = matrix(r, &[&["-x2", corner]]);
    FreeModuleComplex::new(r, 0, vec![s(&["1"]), s(&["e1", "e2"]), s(&["e12"])], vec![d0, d1]).unwrap()
}

#[test]
fn check_complex_examples() {
    let tq = build_tq(&general(Field::Rationals, &["x"], &["1"]), -4).unwrap();
    assert_eq!(tq.window(), (-4, 2));
    assert!(tq.check().passed());
    // f = (x) violates Σ h g = 0: d²(y ∂x) = −(∂h/∂x) g y q*∂α.
    let off_shell = build_tq(&general(Field::Rationals, &["x"], &["x"]), -4).unwrap().check();
    assert_eq!(off_shell.failures().next().unwrap().residual.as_deref(), Some("y1*qa_x <- y1*dx_x: -1/2"));

    let r = ring(&["x"]);
    let k = FreeModuleComplex::new(&r, 0, vec![s(&["1"]), s(&["e"])], vec![matrix(&r, &[&["x"]])]).unwrap();
    assert!(k.check().passed());

    let r2 = ring(&["x1", "x2"]);
    assert!(koszul2(&r2, "x1").check().passed());
    let bad = koszul2(&r2, "x1 + 1").check();
    let f: Vec<_> = bad.failures().collect();
    assert_eq!(f.len(), 1);
    assert_eq!(f[0].name, "d^2 at 0");
    assert_eq!(f[0].residual.as_deref(), Some("e12 <- 1: x2"));
}

#[test]
fn tq_degree_zero_block() {
    // h = x/2, g = 1: the columns dx, y·dy, y·q*∂x map to dy, y·q*∂α, q*∂x.
    let tq = build_tq(&general(Field::Rationals, &["x"], &["x"]), -4).unwrap();
    assert_eq!(tq.basis(0), s(&["dx_x", "y1*dy_y1", "y1*qx_x"]).as_slice());
    assert_eq!(tq.basis(1), s(&["dy_y1", "y1*qa_x", "qx_x"]).as_slice());
    assert_eq!(tq.basis(2), s(&["qa_x"]).as_slice());
    let expect = [["1/2", "1/2*x", "0"], ["0", "1", "0"], ["-1", "0", "1/2*x"]];
    let d0 = tq.d(0).to_strings();
    for (row, exp) in d0.iter().zip(expect) {
        assert_eq!(row, &exp.to_vec());
    }

    let tqp = build_tq_prime(&general(Field::Rationals, &["x"], &["x"]), -4).unwrap();
    let expect = [["0", "1/2*x", "0"], ["0", "1", "0"], ["1", "0", "1/2*x"]];
    for (row, exp) in tqp.d(0).to_strings().iter().zip(expect) {
        assert_eq!(row, &exp.to_vec());
    }
    assert!(tqp.check().passed());
}

#[test]
fn zero_data_has_only_identity_blocks() {
    let d = TqData::weighted(&WeightedData {
        field: Field::Rationals,
        vars: s(&["x1", "x2"]),
        units: vec![],
        f: vec![],
        q: vec![],
    })
    .unwrap();
    let tq = build_tq(&d, -3).unwrap();
    assert!(tq.check().passed());
    for k in -3..2 {
        let m = tq.d(k);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let e = m.get(i, j);
                assert!(e.is_zero() || e.as_constant().is_some_and(|c| c == Coeff::from_int(-1)));
            }
        }
    }
    assert_eq!(tq.d(0).to_strings(), vec![s(&["-1", "0"]), s(&["0", "-1"])]);
    let (phi, back) = build_phi(&d, -3).unwrap();
    assert!(phi.is_basis_bijection() && back.is_basis_bijection());
    // Θ_ν kills the acyclic ∂x ↔ q*∂x pairs; on what cancellation leaves it is a bijection of bases.
    let (_, cert) = cancel_units(&build_tq(&d, -3).unwrap()).unwrap();
    assert!(cert.check().passed());
    assert!(cert.i.then(&build_theta_nu(&d, -3).unwrap()).is_basis_bijection());
}

#[test]
fn tq_squares_to_zero_for_gaussian_data() {
    let d = general(Field::Gaussian, &["x"], &["x", "i*x"]);
    assert!(build_tq(&d, -6).unwrap().check().passed());
    assert!(build_tq_prime(&d, -6).unwrap().check().passed());
    let d = general(Field::Gaussian, &["x1", "x2"], &["x1*x2", "i*x1*x2"]);
    assert!(build_tq(&d, -4).unwrap().check().passed());
}

#[test]
fn phi_is_an_involutive_chain_isomorphism() {
    for d in [
        general(Field::Rationals, &["x"], &["1"]),
        general(Field::Gaussian, &["x"], &["x", "i*x"]),
        general(Field::Gaussian, &["x1", "x2"], &["x1", "i*x1", "x2", "i*x2"]),
        general(Field::Gaussian, &["x1", "x2"], &["x1*x2", "i*x1*x2"]),
    ] {
        let (phi, back) = build_phi(&d, -4).unwrap();
        assert!(phi.check().passed(), "{:?}", phi.check().failures().collect::<Vec<_>>());
        assert!(back.check().passed());
        assert!(phi.then(&back).is_identity());
        assert!(back.then(&phi).is_identity());
    }
}

#[test]
fn psi_and_theta_nu() {
    let d = general(Field::Gaussian, &["x"], &["x", "i*x"]);
    let l = build_cotangent(&d, -4).unwrap();
    assert_eq!(l.basis(2), s(&["ddr_x"]).as_slice());
    assert_eq!(l.basis(1), s(&["y1*ddr_x", "y2*ddr_x", "ddr_y1", "ddr_y2"]).as_slice());
    assert!(l.check().passed());
    assert!(build_psi(&d, -4).unwrap().check().passed());
    assert!(build_theta_nu(&d, -4).unwrap().check().passed());

    let (cert, report) = certify_psi(&d, -4).unwrap();
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    assert!(cert.check().passed());
    for k in -3..=2 {
        assert_eq!(cert.reduced.dim(k), l.dim(k), "degree {k}");
    }

    let d2 = general(Field::Gaussian, &["x1", "x2"], &["x1*x2", "i*x1*x2"]);
    assert!(build_theta_nu(&d2, -4).unwrap().check().passed());
    assert!(certify_psi(&d2, -4).unwrap().1.passed());
}

#[test]
fn theta_nu_with_printed_correction_fails_off_the_linear_case() {
    // With ∂g = 0 the two readings agree; with f = (x1 x2, i x1 x2) the printed sign breaks d.
    let lin = general(Field::Gaussian, &["x"], &["x", "i*x"]);
    assert!(build_theta_nu_printed(&lin, -4).unwrap().check().passed());
    let quad = general(Field::Gaussian, &["x1", "x2"], &["x1*x2", "i*x1*x2"]);
    assert!(!build_theta_nu_printed(&quad, -4).unwrap().check().passed());
}

#[test]
fn psi_needs_unit_weights() {
    let d = TqData::weighted(&WeightedData {
        field: Field::Rationals,
        vars: s(&["x"]),
        units: vec![],
        f: s(&["x"]),
        q: s(&["2"]),
    })
    .unwrap();
    assert!(matches!(build_psi(&d, -2), Err(ComplexError::Unsupported(_))));
    assert!(matches!(build_tq(&d, 3), Err(ComplexError::Window(_))));
}

#[test]
fn cancellation() {
    let r = ring(&["x"]);
    let id = Arc::new(FreeModuleComplex::new(&r, 0, vec![s(&["a"]), s(&["b"])], vec![matrix(&r, &[&["1"]])]).unwrap());
    let (red, cert) = cancel_units(&id).unwrap();
    assert_eq!(red.total_rank(), 0);
    assert!(cert.check().passed());

    let k = Arc::new(FreeModuleComplex::new(&r, 0, vec![s(&["1"]), s(&["e"])], vec![matrix(&r, &[&["x"]])]).unwrap());
    let (red, cert) = cancel_units(&k).unwrap();
    assert_eq!(red.basis(0), k.basis(0));
    assert_eq!(red.d(0).to_strings(), k.d(0).to_strings());
    assert!(cert.cancelled.is_empty() && cert.check().passed());

    let d = general(Field::Gaussian, &["x"], &["x", "i*x"]);
    let tq = build_tq(&d, -4).unwrap();
    let (_, cert) = cancel_units(&tq).unwrap();
    assert!(cert.check().passed());
}

#[test]
fn point_probes() {
    let d = general(Field::Gaussian, &["x"], &["x", "i*x"]);
    let theta = build_theta_nu(&d, -4).unwrap();
    let pts = random_points(1, 5, 5, 11);
    let src = point_homology_probe(&theta.source, &pts).unwrap();
    let tgt = point_homology_probe(&theta.target, &pts).unwrap();
    for (a, b) in src.iter().zip(&tgt) {
        for k in -3..=2 {
            assert_eq!(a[&k], b[&k], "degree {k}");
        }
    }

    let r = ring(&["x"]);
    let zero = FreeModuleComplex::new(&r, 0, vec![vec![]], vec![]).unwrap();
    assert!(point_homology_probe(&zero, &[vec![Coeff::from_int(3)]]).unwrap()[0].values().all(|&v| v == 0));
    let k = FreeModuleComplex::new(&r, 0, vec![s(&["1"]), s(&["e"])], vec![matrix(&r, &[&["x"]])]).unwrap();
    let at_one = point_homology_probe(&k, &[vec![Coeff::from_int(1)]]).unwrap();
    assert!(at_one[0].values().all(|&v| v == 0));
    let at_zero = point_homology_probe(&k, &[vec![Coeff::from_int(0)]]).unwrap();
    assert_eq!(at_zero[0][&0], 1);
}

#[test]
fn theta_delta() {
    let r = ring(&["x1", "x2"]);
    let t = build_theta_delta(&r, &s(&["x1", "x2"])).unwrap();
    assert_eq!(t.at(2).to_strings(), vec![s(&["-1", "0"]), s(&["0", "-1"])]);
    assert!(t.is_basis_bijection() && t.check().passed());
    let e = ring(&[]);
    let t = build_theta_delta(&e, &[]).unwrap();
    assert_eq!(t.source.total_rank(), 0);
    assert!(t.is_basis_bijection());
}

#[test]
fn json_round_trip() {
    let tq = build_tq(&general(Field::Gaussian, &["x"], &["x", "i*x"]), -3).unwrap();
    let text = serde_json::to_string(&tq.to_file()).unwrap();
    let back: ComplexFile = serde_json::from_str(&text).unwrap();
    let k = back.build().unwrap();
    assert_eq!(k.window(), tq.window());
    for d in -3..2 {
        assert_eq!(k.d(d).to_strings(), tq.d(d).to_strings());
    }
}
