use std::sync::Arc;

use darboux::*;
use gca_core::{parse_elem, Algebra, Coeff, Elem, Field, Generator, Morphism, Presentation};
use lagrangian::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn s(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn even(vars: &[&str], f: &[&str], g: &[&str]) -> Darboux {
    build_even_darboux(&EvenData { field: Field::Rationals, vars: s(vars), f: s(f), g: s(g) }).unwrap()
}

fn general_ix() -> Darboux {
    build_general_darboux(&GeneralData { field: Field::Gaussian, vars: s(&["x"]), f: s(&["x", "i*x"]) }).unwrap()
}

fn b_of(a: &Darboux) -> Arc<Presentation> {
    subalgebra_without(&a.presentation, |g| g.degree < -1 || g.name.starts_with('z')).unwrap().0
}

#[test]
fn cotangent_carriers() {
    let a = even(&["x"], &["x", "x"], &["x", "-x"]);
    let t = shifted_cotangent(&b_of(&a)).unwrap();
    assert_eq!(t.total.diff_by_name("alpha_x").unwrap().to_string(), "-beta_y1 + beta_y2");
    assert!(t.total.diff_by_name("beta_y1").unwrap().is_zero());
    assert_eq!(t.omega_l.shift, -1);
    assert!(t.check().passed());

    let (a0, _) = darboux_subalgebra(&general_ix().presentation, -1).unwrap();
    let c0 = shifted_cotangent(&a0).unwrap();
    assert!(c0.total.differentials().iter().all(|e| e.is_zero()));
    assert_eq!(c0.omega_l.leading.to_string(), "ddr(x)*ddr(alpha_x)");
    assert!(c0.check().passed());

    let empty = Arc::new(Presentation::from_names(Algebra::new(Field::Rationals, vec![]).unwrap(), Vec::<(String, Elem)>::new()).unwrap());
    let t0 = shifted_cotangent(&empty).unwrap();
    assert!(t0.total.algebra().is_empty());
    assert!(zero_section(&t0).unwrap().same_images(&Morphism::identity(&empty)));

    assert!(matches!(shifted_cotangent(&a.presentation), Err(LagError::NotPolynomial(_))));
}

#[test]
fn sections() {
    let a = even(&["x"], &["x"], &["0"]);
    let t = shifted_cotangent(&b_of(&a)).unwrap();
    assert!(zero_section(&t).unwrap().check().passed());
    let psi = parse_elem(t.base.algebra(), "x*y1").unwrap();
    let gr = graph_section(&t, &psi).unwrap();
    assert_eq!(gr.image_of("alpha_x").unwrap().to_string(), "y1");
    assert_eq!(gr.image_of("beta_y1").unwrap().to_string(), "x");
    assert!(gr.check().passed());
    let zero = graph_section(&t, &Elem::zero(t.base.algebra())).unwrap();
    assert!(zero.same_images(&zero_section(&t).unwrap()));
    let bad = parse_elem(t.base.algebra(), "x").unwrap();
    assert!(matches!(graph_section(&t, &bad), Err(LagError::Degree { .. })));
}

#[test]
fn replacements_and_tensors() {
    let a = even(&["x"], &["x^2", "x"], &["x", "-x^2"]);
    let t = shifted_cotangent(&b_of(&a)).unwrap();
    let d = replacement_d(&t, &Variant::Zero).unwrap();
    assert!(d.check().passed());
    let dalg = d.presentation.algebra();
    assert_eq!(d.presentation.diff_by_name("tau_x").unwrap(), &parse_elem(dalg, "alpha_x + theta_y1 - 2*x*theta_y2").unwrap());
    let psi = parse_elem(t.base.algebra(), "x^2*y1 + x*y2").unwrap();
    let dp = replacement_d(&t, &Variant::Graph(psi.clone())).unwrap();
    assert!(dp.check().passed());
    assert!(matches!(replacement_d(&t, &Variant::GeneralM), Err(LagError::Mismatch(_))));

    let x = derived_tensor(&graph_section(&t, &psi).unwrap(), &d).unwrap();
    let xp = x.presentation.clone();
    assert_eq!(xp.diff_by_name("theta_y1").unwrap().to_string(), "x^2");
    // oracle: Σ ∂f/∂x y + Σ ∂g/∂x θ with f = (x², x), g = (x, −x²)
    assert_eq!(xp.diff_by_name("tau_x").unwrap(), &parse_elem(xp.algebra(), "2*x*y1 + y2 + theta_y1 - 2*x*theta_y2").unwrap());
    assert!(xp.check_d_squared().passed());
    assert!(x.from_repl.check().passed() && x.from_left.check().passed());

    let triv = derived_tensor(&Morphism::identity(&t.total), &ReplacementData::trivial(&t.total)).unwrap();
    assert_eq!(triv.presentation.diff_table(), t.total.diff_table());
}

#[test]
fn kappa_tables() {
    let a = even(&["x"], &["x", "x"], &["x", "-x"]);
    let p = EvenPipeline::new(&a).unwrap();
    assert_eq!(p.kappa.forward.image_of("theta_y2").unwrap().to_string(), "z2");
    assert!(p.kappa.check().passed());
    assert!(kappa(&a.presentation, &a.presentation, &[]).unwrap().check().passed());
    let twice = [("y1".to_string(), "z1".to_string(), 1), ("z1".to_string(), "z1".to_string(), 1)];
    assert!(matches!(kappa(&a.presentation, &a.presentation, &twice), Err(LagError::NotBijective(_))));
    // dy2 = −x but dz2 = x, so swapping them alone breaks the differential
    let sw = [("y2".to_string(), "z2".to_string(), 1), ("z2".to_string(), "y2".to_string(), 1)];
    assert!(matches!(kappa(&a.presentation, &a.presentation, &sw), Err(LagError::Differential(_))));

    let g = GeneralPipeline::new(&general_ix()).unwrap();
    assert_eq!(g.kappa.forward.image_of("z1").unwrap().to_string(), "tau_x");
    assert_eq!(g.tensor.presentation.diff_by_name("tau_x").unwrap(), &parse_elem(g.tensor.presentation.algebra(), "y1 + i*y2").unwrap());
}

#[test]
fn even_pipeline_residue() {
    let a = even(&["x"], &["x", "x"], &["x", "-x"]);
    let p = EvenPipeline::new(&a).unwrap();
    let r = p.check();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    let c = p.residue(&Coeff::one()).unwrap();
    assert_eq!(c.lambda, Some(Coeff::from_int(2)));
    assert!(c.residual.is_zero());
    let c3 = p.residue(&Coeff::from_int(3)).unwrap();
    assert_eq!(c3.lambda, Some(Coeff::from_int(6)));
    assert!(c3.holds());
}

fn random_poly(rng: &mut ChaCha8Rng) -> String {
    let monos = ["1", "x1", "x2", "x1*x2", "x1^2", "x2^2"];
    let mut terms = Vec::new();
    for m in monos {
        let c: i64 = rng.gen_range(-2..=2);
        if c != 0 {
            terms.push(format!("({c})*{m}"));
        }
    }
    if terms.is_empty() {
        "x1".into()
    } else {
        terms.join(" + ")
    }
}

#[test]
fn residue_is_twice_omega_for_random_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        // f = (a, b), g = (b c, −a c) forces Σ f g = 0
        let (pa, pb, pc) = (random_poly(&mut rng), random_poly(&mut rng), random_poly(&mut rng));
        let f = [pa.clone(), pb.clone()];
        let g = [format!("({pb})*({pc})"), format!("-({pa})*({pc})")];
        let a = build_even_darboux(&EvenData { field: Field::Rationals, vars: s(&["x1", "x2"]), f: f.to_vec(), g: g.to_vec() }).unwrap();
        let p = EvenPipeline::new(&a).unwrap();
        let r = p.check();
        assert!(r.passed(), "{f:?} {g:?}: {:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(p.residue(&Coeff::one()).unwrap().lambda, Some(Coeff::from_int(2)));
    }
}

#[test]
fn general_pipeline() {
    let g = GeneralPipeline::new(&general_ix()).unwrap();
    let r = g.check();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    let c = g.residue(&Coeff::one()).unwrap();
    assert_eq!(c.lambda, Some(Coeff::one()));
    assert!(g.delta_on_a0().unwrap().is_zero());

    let empty = build_general_darboux(&GeneralData { field: Field::Rationals, vars: s(&["x"]), f: vec![] }).unwrap();
    assert!(GeneralPipeline::new(&empty).unwrap().check().passed());
}

#[test]
fn weighted_pipeline() {
    let d = WeightedData { field: Field::Rationals, vars: s(&["x"]), units: vec![], f: s(&["x", "x"]), q: s(&["1", "-1"]) };
    let g = GeneralPipeline::new(&build_weighted_darboux(&d).unwrap()).unwrap();
    assert!(g.nu.check().passed());
    assert!(g.check().passed());

    let nc = WeightedData {
        field: Field::Rationals,
        vars: s(&["x"]),
        units: s(&["1+x^2"]),
        f: s(&["x", "x*(1+x^2)"]),
        q: s(&["-1", "(1+x^2)^2"]),
    };
    let g = GeneralPipeline::new(&build_weighted_darboux(&nc).unwrap()).unwrap();
    let r = g.check();
    assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
}

#[test]
fn pipelines_reject_wrong_case() {
    assert!(matches!(EvenPipeline::new(&general_ix()), Err(LagError::Mismatch(_))));
    assert!(matches!(GeneralPipeline::new(&even(&["x"], &["x"], &["0"])), Err(LagError::Mismatch(_))));
}

#[test]
fn superpotential() {
    let a = even(&["x"], &["x"], &["0"]);
    let sp = superpotential_presentation(&EvenPipeline::new(&a).unwrap()).unwrap();
    assert_eq!(sp.epsilon.to_string(), "-beta_y1*y1");
    assert!(sp.check().passed());

    let a = even(&["x"], &["x", "x"], &["x", "-x"]);
    let sp = superpotential_presentation(&EvenPipeline::new(&a).unwrap()).unwrap();
    assert!(sp.check().passed());
    // ε = −Σ(g θ + y β) with g = (x, −x)
    let want = parse_elem(sp.btilde.algebra(), "-(x*theta_y1 - x*theta_y2 + y1*beta_y1 + y2*beta_y2)").unwrap();
    assert_eq!(sp.epsilon, want);
    // the section C → B̃ with α ↦ +Σ ∂g θ does not commute with d once ∂g ≠ 0
    assert!(!sp.printed_section.check().passed());

    let none = even(&["x"], &[], &[]);
    assert!(superpotential_presentation(&EvenPipeline::new(&none).unwrap()).unwrap().epsilon.is_zero());
}

#[test]
fn iterated_critical_loci() {
    // classical stage: Koszul model of Tr-type cubic x y z
    let alg = Algebra::new(Field::Rationals, vec![Generator::new("x", 0), Generator::new("y", 0), Generator::new("z", 0)]).unwrap();
    let base = Arc::new(Presentation::from_names(alg.clone(), Vec::<(String, Elem)>::new()).unwrap());
    let crit = iterated_crit(&base, &parse_elem(&alg, "x*y*z").unwrap(), 0).unwrap();
    assert_eq!(crit.diff_by_name("xi_x").unwrap().to_string(), "y*z");
    assert!(crit.check_d_squared().passed());
    assert!(matches!(iterated_crit(&base, &parse_elem(&alg, "x").unwrap(), -1), Err(LagError::Degree { .. })));

    // zero function on a base with trivial differential: new generators get d = 0
    let alg = Algebra::new(Field::Rationals, vec![Generator::new("w", 0), Generator::new("c", -1)]).unwrap();
    let base = Arc::new(Presentation::from_names(alg.clone(), Vec::<(String, Elem)>::new()).unwrap());
    let crit = iterated_crit(&base, &Elem::zero(&alg), -1).unwrap();
    assert!(crit.differentials().iter().all(|e| e.is_zero()));
    assert_eq!(crit.algebra().len(), 4);
}
