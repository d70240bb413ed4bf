//! B_d(n=4) as an iterated derived critical locus: first of Tr(X[Y,Z]) on triples of matrices,
//! then of the shifted function Ψ on that locus times a fourth matrix W.

use std::collections::HashSet;
use std::sync::Arc;

use complexes::Matrix;
use gca_core::{Algebra, Coeff, Elem, Field, Generator, Presentation, Report};
use lagrangian::{iterated_crit, kappa, xi, Kappa};

use crate::bd::Bd;
use crate::scheme::{bracket, entry_name, generator_matrix, trace};
use crate::{RepError, Result};

const LETTERS: [&str; 4] = ["X", "Y", "Z", "W"];

#[derive(Clone, Debug)]
pub struct IteratedCrit {
    /// derived critical locus of Tr(X[Y,Z])
    pub three: Arc<Presentation>,
    /// `three ⊗ k[W]`
    pub base: Arc<Presentation>,
    pub psi: Elem,
    /// derived critical locus of Ψ
    pub four: Arc<Presentation>,
    /// signed generator table `four → B_d`
    pub table: Vec<(String, String, i64)>,
    pub kappa: Kappa,
}

impl IteratedCrit {
    pub fn report(&self) -> Report {
        let mut r = Report::new();
        r.extend("V(3) ", self.three.check_d_squared());
        r.extend("V(3) x W ", self.base.check_d_squared());
        r.extend("V(4) ", self.four.check_d_squared());
        r.extend("to B_d ", self.kappa.check());
        r
    }
}

/// The matrix `C_M` with `C_M^{ab} = ξ_{M^{ba}}`.
fn xi_matrix(alg: &Arc<Algebra>, m: &str, d: usize) -> Result<Matrix> {
    let mut out = Matrix::zeros(alg, d, d);
    for a in 0..d {
        for b in 0..d {
            out.set(a, b, Elem::gen(alg, &xi(&entry_name(m, b, a)))?);
        }
    }
    Ok(out)
}

pub fn iterated_crit_bd(bd: &Bd) -> Result<IteratedCrit> {
    let d = bd.d;
    let smooth_gens: Vec<Generator> = LETTERS[..3]
        .iter()
        .flat_map(|m| (0..d).flat_map(move |a| (0..d).map(move |b| Generator::new(entry_name(m, a, b), 0))))
        .collect();
    let smooth = Algebra::new(Field::Rationals, smooth_gens)?;
    let smooth = Arc::new(Presentation::new(smooth.clone(), vec![Elem::zero(&smooth); smooth.len()])?);
    let s = smooth.algebra();
    let mx = |m: &str| generator_matrix(s, m, d);
    let cubic = trace(&mx("X")?.mul(&bracket(&mx("Y")?, 0, &mx("Z")?, 0)));
    let three = iterated_crit(&smooth, &cubic, 0)?;

    // adjoin W with zero differential
    let mut gens = three.algebra().generators().to_vec();
    gens.extend((0..d).flat_map(|a| (0..d).map(move |b| Generator::new(entry_name("W", a, b), 0))));
    let alg = Algebra::new(Field::Rationals, gens)?;
    let mut diff = Vec::new();
    for (g, dg) in three.algebra().generators().iter().zip(three.differentials()) {
        diff.push((g.name.clone(), dg.embed(&alg)?));
    }
    let base = Arc::new(Presentation::from_names(alg.clone(), diff)?);

    let m = |name: &str| generator_matrix(&alg, name, d);
    let w = m("W")?;
    let mut psi = Elem::zero(&alg);
    for l in &LETTERS[..3] {
        psi = &psi + &trace(&bracket(&w, 0, &m(l)?, 0).mul(&xi_matrix(&alg, l, d)?));
    }
    let four = iterated_crit(&base, &psi, -1)?;

    let table = match_generators(&four, &bd.presentation, d)?;
    let kappa = kappa(&four, &bd.presentation, &table)?;
    Ok(IteratedCrit { three, base, psi, four, table, kappa })
}

/// Extend `X,Y,Z,W → X1..X4` degree by degree, pairing each source generator with an unused
/// target generator whose differential is ± the image of its own.
fn match_generators(src: &Arc<Presentation>, tgt: &Arc<Presentation>, d: usize) -> Result<Vec<(String, String, i64)>> {
    let salg = src.algebra();
    let talg = tgt.algebra();
    let mut images = vec![Elem::zero(talg); salg.len()];
    let mut table = Vec::new();
    let mut used = HashSet::new();
    for (l, x) in LETTERS.iter().zip(["X1", "X2", "X3", "X4"]) {
        for a in 0..d {
            for b in 0..d {
                let (sn, tn) = (entry_name(l, a, b), entry_name(x, a, b));
                images[salg.id(&sn)? as usize] = Elem::gen(talg, &tn)?;
                used.insert(tn.clone());
                table.push((sn, tn, 1));
            }
        }
    }
    let mut degrees: Vec<i32> = salg.generators().iter().map(|g| g.degree).filter(|&k| k < 0).collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    degrees.dedup();
    for k in degrees {
        for (i, g) in salg.generators().iter().enumerate() {
            if g.degree != k {
                continue;
            }
            let want = src.differential_of(i as u32).substitute(talg, &images)?;
            let hit = talg.generators().iter().enumerate().find_map(|(j, t)| {
                if t.degree != k || used.contains(&t.name) {
                    return None;
                }
                let dt = tgt.differential_of(j as u32);
                if *dt == want {
                    Some((t.name.clone(), 1))
                } else if *dt == -&want {
                    Some((t.name.clone(), -1))
                } else {
                    None
                }
            });
            let (tn, sign) = hit.ok_or_else(|| RepError::Input(format!("no generator of B_d matches d({}) = {want}", g.name)))?;
            images[i] = Elem::gen(talg, &tn)?.scale(&Coeff::from_int(sign));
            used.insert(tn.clone());
            table.push((g.name.clone(), tn, sign));
        }
    }
    Ok(table)
}
