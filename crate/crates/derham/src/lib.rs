//! Differential forms on a semifree cdga.
//!
//! Forms live in the algebra obtained by adjoining `ddr(g)` (form degree 1, same internal
//! degree) for every generator `g`; signs follow the Koszul rule in total degree. The
//! internal differential is extended by `d(ddr g) = -ddr(d g)`, so `d` and `ddr` anticommute.

use std::sync::Arc;

use gca_core::{
    linalg, parse_elem, partial_derivative, Algebra, Coeff, Derivation, Elem, Generator, Gid, Morphism, Presentation,
    PresentationFile, Report,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormError {
    #[error(transparent)]
    Algebra(#[from] gca_core::GcaError),
    #[error("form is not a constant-coefficient pairing: {0}")]
    NonConstant(String),
    #[error("form belongs to a different carrier")]
    Carrier,
}

pub type Result<T> = std::result::Result<T, FormError>;

pub fn ddr_name(g: &str) -> String {
    format!("ddr({g})")
}

#[derive(Debug)]
pub struct DeRham {
    base: Arc<Presentation>,
    pres: Arc<Presentation>,
    ddr: Derivation,
    // base gid -> ddr(gid) in the form algebra, base gid -> gid in the form algebra
    dgen: Vec<Gid>,
    bgen: Vec<Gid>,
}

impl DeRham {
    pub fn new(base: &Arc<Presentation>) -> Result<Arc<DeRham>> {
        let balg = base.algebra();
        let mut gens: Vec<Generator> = balg.generators().to_vec();
        for g in balg.generators() {
            gens.push(Generator::form(ddr_name(&g.name), g.degree));
        }
        let alg = Algebra::with_units(balg.field(), gens, &balg.unit_strings())?;
        let mut diff = vec![Elem::zero(&alg); alg.len()];
        let mut ddr_spec = Vec::new();
        let mut dgen = Vec::new();
        let mut bgen = Vec::new();
        for (i, g) in balg.generators().iter().enumerate() {
            let gid = alg.id(&g.name)?;
            let did = alg.id(&ddr_name(&g.name))?;
            dgen.push(did);
            bgen.push(gid);
            diff[gid as usize] = base.differential_of(i as Gid).embed(&alg)?;
            ddr_spec.push((gid, Elem::from_gid(&alg, did)));
        }
        let ddr = Derivation::new(&alg, &alg, ddr_spec, 1)?;
        for (i, _) in balg.generators().iter().enumerate() {
            let dg = &diff[bgen[i] as usize];
            diff[dgen[i] as usize] = -ddr.apply(dg)?;
        }
        let pres = Arc::new(Presentation::new(alg, diff)?);
        Ok(Arc::new(DeRham { base: base.clone(), pres, ddr, dgen, bgen }))
    }

    pub fn base(&self) -> &Arc<Presentation> {
        &self.base
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        self.pres.algebra()
    }

    /// The form algebra with the extended internal differential.
    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    fn lift(&self, e: &Elem) -> Result<Elem> {
        if e.algebra().same_as(self.algebra()) {
            Ok(e.clone())
        } else if e.algebra().same_as(self.base.algebra()) {
            Ok(e.embed(self.algebra())?)
        } else {
            Err(FormError::Carrier)
        }
    }

    /// Parse a form written with `ddr(name)` atoms.
    pub fn form(&self, s: &str) -> Result<Elem> {
        Ok(parse_elem(self.algebra(), s)?)
    }

    pub fn embed(&self, e: &Elem) -> Result<Elem> {
        self.lift(e)
    }

    pub fn gen(&self, name: &str) -> Result<Elem> {
        Ok(Elem::gen(self.algebra(), name)?)
    }

    pub fn ddr_gen(&self, name: &str) -> Result<Elem> {
        let g = self.base.algebra().id(name)?;
        Ok(Elem::from_gid(self.algebra(), self.dgen[g as usize]))
    }

    /// de Rham differential; accepts base elements or forms.
    pub fn ddr(&self, e: &Elem) -> Result<Elem> {
        Ok(self.ddr.apply(&self.lift(e)?)?)
    }

    pub fn d(&self, e: &Elem) -> Result<Elem> {
        Ok(self.pres.d(&self.lift(e)?))
    }

    pub fn wedge(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.lift(a)?.try_mul(&self.lift(b)?)?)
    }

    /// Interior product with the vector field dual to the generator `name`.
    pub fn contract(&self, name: &str, e: &Elem) -> Result<Elem> {
        let g = self.base.algebra().id(name)?;
        Ok(partial_derivative(&self.lift(e)?, self.dgen[g as usize]))
    }

    /// `(form degree, internal degree)` of a homogeneous nonzero form.
    pub fn bidegree(&self, e: &Elem) -> Result<Option<(u32, i32)>> {
        let e = self.lift(e)?;
        match (e.form_degree()?, e.degree()?) {
            (Some(p), Some(q)) => Ok(Some((p, q))),
            _ => Ok(None),
        }
    }

    /// Matrix `ι_h ι_g ω` over the base generators; entries must be constants.
    pub fn pairing_matrix(&self, omega: &Elem) -> Result<Vec<Vec<Coeff>>> {
        let omega = self.lift(omega)?;
        let n = self.base.algebra().len();
        let mut m = vec![vec![Coeff::zero(); n]; n];
        for g in 0..n {
            let ig = partial_derivative(&omega, self.dgen[g]);
            if ig.is_zero() {
                continue;
            }
            for h in 0..n {
                let ihg = partial_derivative(&ig, self.dgen[h]);
                m[g][h] = ihg.as_constant().ok_or_else(|| FormError::NonConstant(omega.to_string()))?;
            }
        }
        Ok(m)
    }
}

/// Transport a form along a cdga map: generators go to their images, `ddr g` to `ddr` of the image.
pub fn pullback_form(phi: &Morphism, src: &DeRham, tgt: &DeRham, omega: &Elem) -> Result<Elem> {
    if !phi.source().algebra().same_as(src.base.algebra()) || !phi.target().algebra().same_as(tgt.base.algebra()) {
        return Err(FormError::Carrier);
    }
    let omega = src.lift(omega)?;
    let salg = src.algebra();
    let mut images = vec![Elem::zero(tgt.algebra()); salg.len()];
    for (i, img) in phi.images().iter().enumerate() {
        let lifted = tgt.lift(img)?;
        images[src.dgen[i] as usize] = tgt.ddr(&lifted)?;
        images[src.bgen[i] as usize] = lifted;
    }
    Ok(omega.substitute(tgt.algebra(), &images)?)
}

/// A closed form `(leading, 0, 0, ...)` of the given shift.
#[derive(Clone, Debug)]
pub struct ShiftedForm {
    pub shift: i32,
    pub leading: Elem,
}

impl ShiftedForm {
    pub fn new(shift: i32, leading: Elem) -> Self {
        ShiftedForm { shift, leading }
    }

    pub fn scaled(&self, c: &Coeff) -> ShiftedForm {
        ShiftedForm { shift: self.shift, leading: self.leading.scale(c) }
    }
}

pub fn check_closed(dr: &DeRham, omega: &ShiftedForm) -> Report {
    let mut r = Report::new();
    match dr.bidegree(&omega.leading) {
        Ok(Some((2, q))) if q == omega.shift => r.pass("bidegree"),
        Ok(Some((p, q))) => r.fail("bidegree", format!("({p}, {q})"), 0),
        Ok(None) => r.fail("bidegree", "zero or inhomogeneous form", 0),
        Err(e) => r.fail("bidegree", e.to_string(), 0),
    }
    match (dr.d(&omega.leading), dr.ddr(&omega.leading)) {
        (Ok(d), Ok(dd)) => {
            r.zero("d closed", &d);
            r.zero("ddr closed", &dd);
        }
        (Err(e), _) | (_, Err(e)) => r.fail("closed", e.to_string(), 0),
    }
    r
}

pub fn check_shifted_symplectic(dr: &DeRham, omega: &ShiftedForm) -> Report {
    let mut r = check_closed(dr, omega);
    match dr.pairing_matrix(&omega.leading) {
        Ok(m) => {
            let n = m.len();
            let rank = linalg::rank(&m);
            r.record("nondegenerate", rank == n, format!("pairing rank {rank} of {n}"));
        }
        Err(e) => r.fail("nondegenerate", e.to_string(), 0),
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Pullback,
    Pushforward,
}

/// `h` on the target of `morphism` with `d h` equal to the transported `omega`.
#[derive(Clone, Debug)]
pub struct IsotropyWitness {
    pub morphism: Morphism,
    pub omega: ShiftedForm,
    pub h: Elem,
}

/// Both directions transport the form through the same algebra map; the flag only names
/// which geometric reading is intended.
pub fn check_isotropic(w: &IsotropyWitness, src: &DeRham, tgt: &DeRham, direction: Direction) -> Report {
    let mut r = Report::new();
    let label = match direction {
        Direction::Pullback => "pullback",
        Direction::Pushforward => "pushforward",
    };
    let transported = match pullback_form(&w.morphism, src, tgt, &w.omega.leading) {
        Ok(t) => t,
        Err(e) => {
            r.fail(format!("{label} transport"), e.to_string(), 0);
            return r;
        }
    };
    match (tgt.d(&w.h), tgt.ddr(&w.h)) {
        (Ok(dh), Ok(ddh)) => {
            r.zero(format!("d h = {label} omega"), &(&dh - &transported));
            r.zero("ddr h = 0", &ddh);
        }
        (Err(e), _) | (_, Err(e)) => r.fail("homotopy", e.to_string(), 0),
    }
    r
}

/// Presentation plus a shifted 2-form in poly-string form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormFile {
    pub presentation: PresentationFile,
    pub shift: i32,
    pub form: String,
}

impl FormFile {
    pub fn new(p: &Presentation, omega: &ShiftedForm) -> FormFile {
        FormFile { presentation: PresentationFile::from_presentation(p), shift: omega.shift, form: omega.leading.to_string() }
    }

    pub fn load(&self) -> Result<(Arc<DeRham>, ShiftedForm)> {
        let p = Arc::new(self.presentation.build()?);
        let dr = DeRham::new(&p)?;
        let leading = dr.form(&self.form)?;
        Ok((dr, ShiftedForm::new(self.shift, leading)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gca_core::Field;

    #[test]
    fn anticommuting_differentials() {
        let a = Algebra::new(Field::Rationals, vec![Generator::new("x", 0), Generator::new("y", -1)]).unwrap();
        let p = Arc::new(Presentation::parse(a, &[("y", "x^2")]).unwrap());
        let dr = DeRham::new(&p).unwrap();
        let f = dr.form("x*y*ddr(y) + x^3*ddr(x)*ddr(y)").unwrap();
        let lhs = &dr.d(&dr.ddr(&f).unwrap()).unwrap() + &dr.ddr(&dr.d(&f).unwrap()).unwrap();
        assert!(lhs.is_zero());
        assert!(dr.ddr(&dr.ddr(&f).unwrap()).unwrap().is_zero());
    }
}
