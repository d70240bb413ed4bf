//! Check lists for each subcommand. Builders run inside the checks, so a construction failure
//! becomes an `error` record rather than aborting the run.

use std::sync::Arc;

use complexes::{build_phi, build_theta_nu, build_tq, build_tq_prime, certify_psi, point_homology_probe, random_points, TqData};
use darboux::{
    build_even_darboux, build_general_darboux, build_weighted_darboux, cme_check_even, cme_check_general, cme_check_weighted, Darboux,
    EvenData, GeneralData, WeightedData,
};
use derham::check_shifted_symplectic;
use gca_core::{Coeff, Field, Presentation, Report};
use lagrangian::{EvenPipeline, GeneralPipeline};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use repscheme::{
    beta_check, build_bd, cme_bd, cobar, gamma_check, h0_hilbert_check, koszul_check, maindim4, matrixify, printed_example_check,
    serre_pairing_check, Leibniz,
};

use crate::report::Check;
use crate::CliError;

#[derive(Clone, Debug)]
pub enum Data {
    Even(EvenData),
    General(GeneralData),
    Weighted(WeightedData),
}

impl Data {
    pub fn parse(case: &str, path: &str, bytes: &[u8]) -> Result<Data, CliError> {
        let located = |e: serde_json::Error| CliError::Parse { path: path.into(), line: e.line(), col: e.column(), msg: e.to_string() };
        Ok(match case {
            "even" => Data::Even(serde_json::from_slice(bytes).map_err(located)?),
            "general" => Data::General(serde_json::from_slice(bytes).map_err(located)?),
            "weighted" => Data::Weighted(serde_json::from_slice(bytes).map_err(located)?),
            other => return Err(CliError::Usage(format!("unknown case `{other}` (expected even, general or weighted)"))),
        })
    }

    fn cme(&self) -> Result<Report, darboux::DarbouxError> {
        let c = match self {
            Data::Even(d) => cme_check_even(d.field, &d.vars, &d.f, &d.g)?,
            Data::General(d) => cme_check_general(d.field, &d.vars, &d.f)?,
            Data::Weighted(d) => cme_check_weighted(d.field, &d.vars, &d.units, &d.f, &d.q)?,
        };
        let mut r = Report::new();
        r.zero("classical master equation", &c.residual);
        Ok(r)
    }

    pub fn build(&self) -> Result<Darboux, darboux::DarbouxError> {
        match self {
            Data::Even(d) => build_even_darboux(d),
            Data::General(d) => build_general_darboux(d),
            Data::Weighted(d) => build_weighted_darboux(d),
        }
    }

    fn tq(&self) -> Result<TqData, CliError> {
        Ok(match self {
            Data::General(d) => TqData::general(d)?,
            Data::Weighted(d) => TqData::weighted(d)?,
            Data::Even(_) => return Err(CliError::Usage("the tangent complexes need general or weighted data".into())),
        })
    }
}

fn darboux_report(a: &Darboux) -> Report {
    let mut r = Report::new();
    r.extend("d^2 ", a.presentation.check_d_squared());
    r.extend("omega ", check_shifted_symplectic(&a.dr, &a.omega));
    r
}

pub fn darboux(data: Data) -> Vec<Check> {
    let data = Arc::new(data);
    let d2 = data.clone();
    vec![Check::new("cme", move || data.cme()), Check::new("builder", move || d2.build().map(|a| darboux_report(&a)))]
}

fn pipeline_report(a: &Darboux) -> Result<Report, lagrangian::LagError> {
    let (mut r, residue, want) = match a.case {
        darboux::Case::Even => {
            let p = EvenPipeline::new(a)?;
            (p.check(), p.residue(&Coeff::one())?, 2)
        }
        _ => {
            let p = GeneralPipeline::new(a)?;
            (p.check(), p.residue(&Coeff::one())?, 1)
        }
    };
    let ok = residue.holds() && residue.lambda == Some(Coeff::from_int(want));
    let found = residue.lambda.map_or("none".into(), |l| l.to_string());
    r.record(format!("residue is {want} omega"), ok, format!("lambda = {found}, residual {}", residue.residual));
    Ok(r)
}

pub fn lagint(data: Data) -> Vec<Check> {
    vec![Check::new("pipeline", move || -> Result<Report, String> {
        let a = data.build().map_err(|e| e.to_string())?;
        pipeline_report(&a).map_err(|e| e.to_string())
    })]
}

fn random_poly(rng: &mut ChaCha8Rng) -> String {
    let terms: Vec<String> = ["1", "x1", "x2", "x1*x2", "x1^2", "x2^2"]
        .iter()
        .filter_map(|m| {
            let c: i64 = rng.gen_range(-2..=2);
            (c != 0).then(|| format!("({c})*{m}"))
        })
        .collect();
    if terms.is_empty() {
        "x1".into()
    } else {
        terms.join(" + ")
    }
}

/// Even data satisfying the master equation by construction: alternately the pairing
/// `f = (p, p), g = (r, −r)` and the rotation `f = (a, b), g = (bc, −ac)`.
pub fn seeded_even_data(seed: u64, count: usize) -> Vec<EvenData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = vec!["x1".to_string(), "x2".to_string()];
    (0..count)
        .map(|i| {
            let (f, g) = if i % 2 == 0 {
                let (p, r) = (random_poly(&mut rng), random_poly(&mut rng));
                (vec![p.clone(), p], vec![r.clone(), format!("-({r})")])
            } else {
                let (a, b, c) = (random_poly(&mut rng), random_poly(&mut rng), random_poly(&mut rng));
                (vec![a.clone(), b.clone()], vec![format!("({b})*({c})"), format!("-({a})*({c})")])
            };
            EvenData { field: Field::Rationals, vars: vars.clone(), f, g }
        })
        .collect()
}

pub fn seeded_lagint(seed: u64, count: usize) -> Vec<Check> {
    seeded_even_data(seed, count)
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            Check::new(format!("even data set {i:03}"), move || -> Result<Report, String> {
                let a = build_even_darboux(&d).map_err(|e| e.to_string())?;
                pipeline_report(&a).map_err(|e| e.to_string())
            })
        })
        .collect()
}

pub struct ComplexOptions {
    pub lo: i32,
    pub suites: Vec<String>,
    pub seed: u64,
    pub points: usize,
}

pub fn complexes(data: Data, opts: ComplexOptions) -> Result<Vec<Check>, CliError> {
    let tq = Arc::new(data.tq()?);
    let lo = opts.lo;
    let mut checks = Vec::new();
    let t = tq.clone();
    checks.push(Check::new("T_q", move || build_tq(&t, lo).map(|k| k.check())));
    let t = tq.clone();
    checks.push(Check::new("T'_q", move || build_tq_prime(&t, lo).map(|k| k.check())));
    for s in &opts.suites {
        let t = tq.clone();
        match s.as_str() {
            "phi" => checks.push(Check::new("phi", move || {
                build_phi(&t, lo).map(|(phi, back)| {
                    let mut r = Report::new();
                    r.extend("forward ", phi.check());
                    r.extend("backward ", back.check());
                    r.record("phi then back = id", phi.then(&back).is_identity(), "composite is not the identity");
                    r.record("back then phi = id", back.then(&phi).is_identity(), "composite is not the identity");
                    r
                })
            })),
            "psi" => checks.push(Check::new("psi", move || certify_psi(&t, lo).map(|(_, r)| r))),
            "probe" => {
                let (seed, count) = (opts.seed, opts.points);
                checks.push(Check::new("probe", move || -> Result<Report, complexes::ComplexError> {
                    let theta = build_theta_nu(&t, lo)?;
                    let mut r = Report::new();
                    r.extend("theta_nu ", theta.check());
                    let pts = random_points(t.vars.len(), count, 5, seed);
                    let src = point_homology_probe(&theta.source, &pts)?;
                    let tgt = point_homology_probe(&theta.target, &pts)?;
                    for (i, (a, b)) in src.iter().zip(&tgt).enumerate() {
                        // the bottom degree is truncated differently on the two sides
                        let bad: Vec<String> = (lo + 1..=2)
                            .filter(|k| a.get(k) != b.get(k))
                            .map(|k| format!("H^{k}: {:?} vs {:?}", a.get(&k), b.get(&k)))
                            .collect();
                        r.record(format!("point {i} homology agrees"), bad.is_empty(), bad.join(", "));
                    }
                    Ok(r)
                }));
            }
            other => return Err(CliError::Usage(format!("unknown complexes suite `{other}` (expected phi, psi, probe)"))),
        }
    }
    Ok(checks)
}

pub const REPSCHEME_SUITES: [&str; 7] = ["cobar", "cme", "primitive", "koszul", "gamma", "serre", "maindim4"];

pub struct RepOptions {
    pub n: usize,
    pub d: usize,
    pub suites: Vec<String>,
    pub weight_bound: Option<u32>,
}

pub fn repscheme(opts: RepOptions) -> Result<Vec<Check>, CliError> {
    let RepOptions { n, d, weight_bound, .. } = opts;
    let mut checks = Vec::new();
    for s in &opts.suites {
        if !REPSCHEME_SUITES.contains(&s.as_str()) {
            return Err(CliError::Usage(format!("unknown repscheme suite `{s}` (expected one of {})", REPSCHEME_SUITES.join(", "))));
        }
        if s != "cobar" && s != "koszul" && n != 4 {
            return Err(CliError::Usage(format!("suite `{s}` concerns affine 4-space; it needs --n 4")));
        }
        match s.as_str() {
            "cobar" => {
                let bound = weight_bound.unwrap_or(5);
                checks.push(Check::new(format!("cobar n={n}"), move || -> Result<Report, repscheme::RepError> {
                    let left = cobar(n, Leibniz::Left)?;
                    let right = cobar(n, Leibniz::Right)?;
                    let mut r = Report::new();
                    r.extend("left d^2 ", left.check_d_squared());
                    r.extend("right d^2 ", right.check_d_squared());
                    r.extend("", h0_hilbert_check(&left, bound));
                    if n == 4 {
                        r.extend("", printed_example_check()?);
                    }
                    Ok(r)
                }));
                checks.push(Check::new(format!("A_d n={n} d={d}"), move || {
                    cobar(n, Leibniz::Left).and_then(|g| matrixify(&g, d)).map(|a| a.presentation.check_d_squared())
                }));
            }
            "cme" => checks.push(Check::new(format!("cme d={d}"), move || cme_bd(d))),
            "primitive" => checks.push(Check::new(format!("primitive d={d}"), move || build_bd(d).and_then(|b| b.check()))),
            "koszul" => {
                let bound = weight_bound.unwrap_or(4);
                checks.push(Check::new(format!("koszul n={n}"), move || koszul_check(n, bound)));
            }
            "gamma" => {
                checks.push(Check::new(format!("beta d={d}"), move || beta_check(d)));
                checks.push(Check::new(format!("gamma d={d}"), move || gamma_check(d)));
            }
            "serre" => checks.push(Check::new(format!("serre d={d}"), move || serre_pairing_check(d))),
            "maindim4" => checks.push(Check::new(format!("maindim4 d={d}"), move || {
                build_bd(d).and_then(|b| maindim4(&b)).map(|m| m.report())
            })),
            _ => unreachable!(),
        }
    }
    Ok(checks)
}

/// `check FILE`: d² = 0 on a presentation file.
pub fn presentation(p: Presentation) -> Vec<Check> {
    vec![Check::new("presentation", move || Ok::<_, String>(p.check_d_squared()))]
}
