//! The Darboux subalgebra B_d ⊂ A_d for n = 4: Hamiltonian, symplectic form, primitive 1-form,
//! and the critical-locus comparison.

use std::sync::Arc;

use complexes::Matrix;
use darboux::{build_even_darboux_named, darboux_subalgebra, Darboux, EvenData, EvenNames};
use derham::{pullback_form, DeRham};
use gca_core::{partial_by_name, Algebra, Coeff, Elem, Field, Generator, Morphism, Presentation, Report};
use lagrangian::{kappa, EvenPipeline, Kappa, ResidueComparison};

use crate::cobar::cobar;
use crate::nc::Leibniz;
use crate::scheme::{bracket, entry_name, matrixify, signed_matrix, trace, RepScheme};
use crate::{RepError, Result};

/// Hamiltonian pairs `(C_p, C_q)`: `Φ ∋ Tr(C_p dC_q + C_q dC_p)`, `ω⁰ ∋ Tr(ddr C_p ddr C_q)`.
pub const C_PAIRS: [(&str, &str); 3] = [("C12", "C34"), ("C13", "C42"), ("C14", "C23")];

/// `X_l` with its partner `S` (the oriented complement of `l`).
pub const X_PAIRS: [(&str, &str); 4] = [("X1", "S234"), ("X2", "S143"), ("X3", "S124"), ("X4", "S132")];

/// `∂Φ/∂X_l` as a sum of transposed brackets `[X_i, C_jk]^T`.
const X_BRACKETS: [[(&str, &str); 3]; 4] = [
    [("X2", "C34"), ("X3", "C42"), ("X4", "C23")],
    [("X4", "C31"), ("X3", "C14"), ("X1", "C43")],
    [("X4", "C12"), ("X2", "C41"), ("X1", "C24")],
    [("X3", "C21"), ("X2", "C13"), ("X1", "C32")],
];

#[derive(Clone, Debug)]
pub struct Bd {
    pub d: usize,
    pub a: RepScheme,
    pub presentation: Arc<Presentation>,
    pub iota: Morphism,
    pub dr: Arc<DeRham>,
    /// Φ ∈ B_d^{−1}
    pub hamiltonian: Elem,
    pub omega0: Elem,
    /// the primitive with its printed coefficient 2
    pub primitive: Elem,
}

fn commutator(alg: &Arc<Algebra>, d: usize, p: &str, q: &str) -> Result<Matrix> {
    Ok(bracket(&signed_matrix(alg, p, d)?, 0, &signed_matrix(alg, q, d)?, 0))
}

fn ddr_matrix(dr: &DeRham, m: &Matrix) -> Result<Matrix> {
    let mut out = Matrix::zeros(dr.algebra(), m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, dr.ddr(m.get(i, j))?);
        }
    }
    Ok(out)
}

pub fn build_bd(d: usize) -> Result<Bd> {
    let a = matrixify(&cobar(4, Leibniz::Left)?, d)?;
    let (b, iota) = darboux_subalgebra(&a.presentation, -3)?;
    let alg = b.algebra().clone();
    let m = |name: &str| signed_matrix(&alg, name, d);
    let c = |p: &str, q: &str| commutator(&alg, d, p, q);

    let terms = [
        m("C12")?.mul(&c("X3", "X4")?),
        m("C13")?.mul(&c("X4", "X2")?),
        m("C14")?.mul(&c("X2", "X3")?),
        m("C34")?.mul(&c("X1", "X2")?),
        m("C42")?.mul(&c("X1", "X3")?),
        m("C23")?.mul(&c("X1", "X4")?),
    ];
    let hamiltonian = terms.iter().fold(Elem::zero(&alg), |acc, t| &acc + &trace(t));

    let dr = DeRham::new(&b)?;
    let fm = |name: &str| signed_matrix(dr.algebra(), name, d);
    let mut omega0 = Elem::zero(dr.algebra());
    for (x, s) in X_PAIRS {
        omega0 = &omega0 + &trace(&ddr_matrix(&dr, &fm(x)?)?.mul(&ddr_matrix(&dr, &fm(s)?)?));
    }
    for (p, q) in C_PAIRS {
        omega0 = &omega0 + &trace(&ddr_matrix(&dr, &fm(p)?)?.mul(&ddr_matrix(&dr, &fm(q)?)?));
    }
    let mut bd = Bd { d, a, presentation: b, iota, dr, hamiltonian, omega0, primitive: Elem::zero(&alg) };
    bd.primitive = bd.primitive_with(&Coeff::from_int(2))?;
    Ok(bd)
}

impl Bd {
    fn form_matrix(&self, name: &str) -> Result<Matrix> {
        signed_matrix(self.dr.algebra(), name, self.d)
    }

    /// `Tr(c·Σ S_l ddr X_l − Σ (C_p ddr C_q + C_q ddr C_p))`.
    pub fn primitive_with(&self, coefficient: &Coeff) -> Result<Elem> {
        let dr = &self.dr;
        let mut s_part = Elem::zero(dr.algebra());
        for (x, s) in X_PAIRS {
            s_part = &s_part + &trace(&self.form_matrix(s)?.mul(&ddr_matrix(dr, &self.form_matrix(x)?)?));
        }
        let mut c_part = Elem::zero(dr.algebra());
        for (p, q) in C_PAIRS {
            c_part = &c_part + &trace(&self.form_matrix(p)?.mul(&ddr_matrix(dr, &self.form_matrix(q)?)?));
            c_part = &c_part + &trace(&self.form_matrix(q)?.mul(&ddr_matrix(dr, &self.form_matrix(p)?)?));
        }
        Ok(&s_part.scale(coefficient) - &c_part)
    }

    /// `∂Φ/∂M^{ab}` where `M` may be a reversed `C` name (`C42 = −C24`).
    pub fn partial(&self, matrix: &str, a: usize, b: usize) -> Result<Elem> {
        let m = signed_matrix(self.presentation.algebra(), matrix, self.d)?;
        let g = m.get(a, b);
        let (mono, c) = g.terms().iter().next().ok_or_else(|| RepError::Input(format!("no entry {matrix}")))?;
        let gid = mono.factors()[0].0;
        let name = &self.presentation.algebra().generator(gid).name;
        Ok(partial_by_name(&self.hamiltonian, name)?.scale(c))
    }

    fn d_entry(&self, matrix: &str, a: usize, b: usize) -> Result<Elem> {
        let m = signed_matrix(self.presentation.algebra(), matrix, self.d)?;
        Ok(self.presentation.d(m.get(a, b)))
    }

    /// The displayed partial-derivative identities, entry by entry.
    pub fn partial_identities(&self) -> Result<Report> {
        let d = self.d;
        let alg = self.presentation.algebra();
        let mut r = Report::new();
        let mut check = |name: String, parts: Vec<(Elem, Elem)>| {
            let bad = parts.iter().find(|(l, rt)| l != rt);
            match bad {
                None => r.pass(name),
                Some((l, rt)) => r.fail(name, format!("{l} != {rt}"), 1),
            }
        };
        for (p, q) in C_PAIRS {
            let dq = commutator(alg, d, &format!("X{}", &q[1..2]), &format!("X{}", &q[2..3]))?;
            let dp = commutator(alg, d, &format!("X{}", &p[1..2]), &format!("X{}", &p[2..3]))?;
            let mut first = Vec::new();
            let mut second = Vec::new();
            for mu in 0..d {
                for nu in 0..d {
                    let lhs = self.partial(p, mu, nu)?;
                    first.push((lhs.clone(), dq.get(nu, mu).clone()));
                    first.push((lhs, self.d_entry(q, nu, mu)?));
                    let lhs = self.partial(q, nu, mu)?;
                    second.push((lhs.clone(), dp.get(mu, nu).clone()));
                    second.push((lhs, self.d_entry(p, mu, nu)?));
                }
            }
            check(format!("dPhi/d{p} = d({q}^T)"), first);
            check(format!("dPhi/d({q}^T) = d({p})"), second);
        }
        for (l, (x, s)) in X_PAIRS.iter().enumerate() {
            let mut brackets = Matrix::zeros(alg, d, d);
            for (xi, c) in X_BRACKETS[l] {
                brackets = brackets.add(&bracket(&signed_matrix(alg, xi, d)?, 0, &signed_matrix(alg, c, d)?, -1));
            }
            let mut parts = Vec::new();
            for mu in 0..d {
                for nu in 0..d {
                    let lhs = self.partial(x, mu, nu)?;
                    parts.push((lhs.clone(), brackets.get(nu, mu).clone()));
                    parts.push((lhs, self.d_entry(s, nu, mu)?));
                }
            }
            check(format!("dPhi/d{x} = d({s}^T)"), parts);
        }
        let mut parts = Vec::new();
        for (_, s) in X_PAIRS {
            for mu in 0..d {
                for nu in 0..d {
                    parts.push((self.partial(s, mu, nu)?, Elem::zero(alg)));
                }
            }
        }
        check("dPhi/dS = 0".into(), parts);
        Ok(r)
    }

    /// `dφ = −ddr Φ` and `ddr φ = −2ω⁰` for φ built with the given coefficient.
    pub fn primitive_check(&self, coefficient: &Coeff) -> Result<Report> {
        let phi = self.primitive_with(coefficient)?;
        let mut r = Report::new();
        r.zero("d phi = -ddr Phi", &(&self.dr.d(&phi)? + &self.dr.ddr(&self.hamiltonian)?));
        r.zero("ddr phi = -2 omega0", &(&self.dr.ddr(&phi)? + &self.omega0.scale(&Coeff::from_int(2))));
        Ok(r)
    }

    pub fn check(&self) -> Result<Report> {
        let mut r = Report::new();
        r.extend("A_d ", self.a.presentation.check_d_squared());
        r.extend("B_d ", self.presentation.check_d_squared());
        r.extend("iota ", self.iota.check());
        r.extend("", self.partial_identities()?);
        r.extend("", self.primitive_check(&Coeff::from_int(2))?);
        Ok(r)
    }
}

/// `Tr([X₁,X₂][X₃,X₄] + [X₁,X₃][X₄,X₂] + [X₁,X₄][X₂,X₃])` over the entries of four d×d matrices.
pub fn cme_bd_residual(d: usize) -> Result<Elem> {
    if d < 1 {
        return Err(RepError::Range("d must be at least 1".into()));
    }
    let mut gens = Vec::new();
    for x in ["X1", "X2", "X3", "X4"] {
        for a in 0..d {
            for b in 0..d {
                gens.push(Generator::new(entry_name(x, a, b), 0));
            }
        }
    }
    let alg = Algebra::new(Field::Rationals, gens)?;
    let c = |p: &str, q: &str| commutator(&alg, d, p, q);
    let sum = c("X1", "X2")?
        .mul(&c("X3", "X4")?)
        .add(&c("X1", "X3")?.mul(&c("X4", "X2")?))
        .add(&c("X1", "X4")?.mul(&c("X2", "X3")?));
    Ok(trace(&sum))
}

pub fn cme_bd(d: usize) -> Result<Report> {
    let mut r = Report::new();
    r.zero(format!("classical master equation d={d}"), &cme_bd_residual(d)?);
    Ok(r)
}

/// B_d in the even Darboux normal form, with its comparison to the critical-locus model.
#[derive(Clone, Debug)]
pub struct MainDim4 {
    pub darboux: Darboux,
    pub pipeline: EvenPipeline,
    /// even Darboux algebra → B_d
    pub kappa: Kappa,
    pub residue: ResidueComparison,
    /// ω of the even Darboux algebra transported to B_d, minus ω⁰
    pub omega_residual: Elem,
}

impl MainDim4 {
    pub fn report(&self) -> Report {
        let mut r = Report::new();
        r.extend("pipeline ", self.pipeline.check());
        r.extend("to B_d ", self.kappa.check());
        r.zero("kappa_* omega = omega0", &self.omega_residual);
        let two = self.residue.lambda.as_ref().is_some_and(|l| *l == Coeff::from_int(2));
        r.record("lambda = 2", two && self.residue.holds(), format!("lambda {:?}", self.residue.lambda.as_ref().map(|l| l.to_string())));
        r
    }
}

/// Pairs `y = C_p^{ab}`, `z = C_q^{ba}` and `w(X_l^{ab}) = S_l^{ba}`; the Darboux data is read off Φ.
pub fn maindim4(bd: &Bd) -> Result<MainDim4> {
    let d = bd.d;
    let balg = bd.presentation.algebra();
    let mut vars = Vec::new();
    let mut ws = Vec::new();
    for (x, s) in X_PAIRS {
        for a in 0..d {
            for b in 0..d {
                vars.push(entry_name(x, a, b));
                ws.push(entry_name(s, b, a));
            }
        }
    }
    let (mut ys, mut zs, mut f, mut g) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut table = Vec::new();
    for (p, q) in C_PAIRS {
        for a in 0..d {
            for b in 0..d {
                ys.push(entry_name(p, a, b));
                zs.push(entry_name(q, b, a));
                f.push(bd.partial(p, a, b)?.to_string());
                g.push(bd.partial(q, b, a)?.to_string());
                if !balg.has(&entry_name(q, b, a)) {
                    let flipped = format!("C{}{}", &q[2..3], &q[1..2]);
                    table.push((entry_name(q, b, a), entry_name(&flipped, b, a), -1));
                }
            }
        }
    }
    let data = EvenData { field: Field::Rationals, vars, f, g };
    let darboux = build_even_darboux_named(&data, &EvenNames { ys, zs, ws })?;
    let kappa = kappa(&darboux.presentation, &bd.presentation, &table)?;
    let omega = pullback_form(&kappa.forward, &darboux.dr, &bd.dr, &darboux.omega.leading)?;
    let omega_residual = &omega - &bd.omega0;
    let pipeline = EvenPipeline::new(&darboux)?;
    let residue = pipeline.residue(&Coeff::one())?;
    Ok(MainDim4 { darboux, pipeline, kappa, residue, omega_residual })
}
