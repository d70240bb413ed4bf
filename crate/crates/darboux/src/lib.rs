//! Darboux-form (−2)-shifted symplectic cdgas: the even, general and weighted families,
//! plus degree truncation to dg-subalgebras.

use std::sync::Arc;

use derham::{check_closed, check_shifted_symplectic, DeRham, FormError, ShiftedForm};
use gca_core::{
    parse_elem, partial_by_name, sum_in, Algebra, Coeff, Elem, Field, GcaError, Generator, Gid, Morphism, Presentation, Report,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DarbouxError {
    #[error("classical master equation fails: residual {0}")]
    Cme(String),
    #[error("length mismatch: {0} vs {1}")]
    Length(usize, usize),
    #[error("weight `{0}` is not invertible (declare it as a unit)")]
    NotInvertible(String),
    #[error("subalgebra not closed under d: d({generator}) mentions {dropped}")]
    NotClosed { generator: String, dropped: String },
    #[error("built presentation failed its own checks: {0}")]
    Check(String),
    #[error(transparent)]
    Algebra(#[from] GcaError),
    #[error(transparent)]
    Form(#[from] FormError),
}

pub type Result<T> = std::result::Result<T, DarbouxError>;

fn default_vars() -> Vec<String> {
    vec!["x".to_string()]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvenData {
    pub field: Field,
    #[serde(default = "default_vars")]
    pub vars: Vec<String>,
    pub f: Vec<String>,
    pub g: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralData {
    pub field: Field,
    #[serde(default = "default_vars")]
    pub vars: Vec<String>,
    pub f: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedData {
    pub field: Field,
    #[serde(default = "default_vars")]
    pub vars: Vec<String>,
    #[serde(default)]
    pub units: Vec<String>,
    pub f: Vec<String>,
    pub q: Vec<String>,
}

impl GeneralData {
    pub fn weighted(&self) -> WeightedData {
        WeightedData {
            field: self.field,
            vars: self.vars.clone(),
            units: Vec::new(),
            f: self.f.clone(),
            q: vec!["1".to_string(); self.f.len()],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Even,
    General,
    Weighted,
}

/// A built Darboux cdga together with the data the later constructions need.
#[derive(Clone, Debug)]
pub struct Darboux {
    pub case: Case,
    pub presentation: Arc<Presentation>,
    pub dr: Arc<DeRham>,
    pub omega: ShiftedForm,
    pub vars: Vec<String>,
    /// even: (f, g); general/weighted: (h, empty)
    pub f: Vec<Elem>,
    pub g: Vec<Elem>,
    /// general/weighted: `gk[k][j] = g_k^j`
    pub gk: Vec<Vec<Elem>>,
    pub q: Vec<Elem>,
    /// weighted isotropic form `-Σ ddr(q_j y_j) ddr(y_j)` (general: q = 1)
    pub nu: Option<Elem>,
    /// generator names: degree −1 pairs (y, z) in the even case, z of degree −2 otherwise
    pub ys: Vec<String>,
    pub zs: Vec<String>,
    pub ws: Vec<String>,
}

/// Generator names for the even builder; `y_i` pairs with `z_i`, `w_j` with `vars[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenNames {
    pub ys: Vec<String>,
    pub zs: Vec<String>,
    pub ws: Vec<String>,
}

impl EvenNames {
    pub fn standard(m0: usize, m1: usize) -> EvenNames {
        EvenNames { ys: (0..m1).map(y).collect(), zs: (0..m1).map(z).collect(), ws: (0..m0).map(w).collect() }
    }
}

pub fn y(i: usize) -> String {
    format!("y{}", i + 1)
}
pub fn z(i: usize) -> String {
    format!("z{}", i + 1)
}
pub fn w(j: usize) -> String {
    format!("w{}", j + 1)
}

#[derive(Clone, Debug)]
pub struct CmeResult {
    pub holds: bool,
    pub residual: Elem,
}

fn base_algebra(field: Field, vars: &[String], units: &[String]) -> Result<Arc<Algebra>> {
    let gens = vars.iter().map(|v| Generator::new(v.clone(), 0)).collect();
    Ok(Algebra::with_units(field, gens, units)?)
}

fn parse_all(a: &Arc<Algebra>, polys: &[String]) -> Result<Vec<Elem>> {
    polys.iter().map(|p| Ok(parse_elem(a, p)?)).collect()
}

fn cme(residual: Elem) -> CmeResult {
    CmeResult { holds: residual.is_zero(), residual }
}

pub fn cme_check_even(field: Field, vars: &[String], f: &[String], g: &[String]) -> Result<CmeResult> {
    if f.len() != g.len() {
        return Err(DarbouxError::Length(f.len(), g.len()));
    }
    let a = base_algebra(field, vars, &[])?;
    let (f, g) = (parse_all(&a, f)?, parse_all(&a, g)?);
    Ok(cme(sum_in(&a, f.iter().zip(&g).map(|(x, y)| x * y))))
}

pub fn cme_check_general(field: Field, vars: &[String], f: &[String]) -> Result<CmeResult> {
    let a = base_algebra(field, vars, &[])?;
    let f = parse_all(&a, f)?;
    Ok(cme(sum_in(&a, f.iter().map(|x| x * x))))
}

pub fn cme_check_weighted(field: Field, vars: &[String], units: &[String], f: &[String], q: &[String]) -> Result<CmeResult> {
    if f.len() != q.len() {
        return Err(DarbouxError::Length(f.len(), q.len()));
    }
    let a = base_algebra(field, vars, units)?;
    let (f, q) = (parse_all(&a, f)?, parse_all(&a, q)?);
    let mut terms = Vec::new();
    for (fj, qj) in f.iter().zip(&q) {
        let inv = qj.try_inverse().map_err(|_| DarbouxError::NotInvertible(qj.to_string()))?;
        terms.push(&(fj * fj) * &inv);
    }
    Ok(cme(sum_in(&a, terms)))
}

fn assert_report(r: Report) -> Result<()> {
    if r.passed() {
        Ok(())
    } else {
        let msg = r.failures().map(|e| format!("{}: {}", e.name, e.residual.clone().unwrap_or_default())).collect::<Vec<_>>();
        Err(DarbouxError::Check(msg.join("; ")))
    }
}

fn embed_all(v: &[Elem], a: &Arc<Algebra>) -> Result<Vec<Elem>> {
    v.iter().map(|e| Ok(e.embed(a)?)).collect()
}

pub fn build_even_darboux(data: &EvenData) -> Result<Darboux> {
    build_even_darboux_named(data, &EvenNames::standard(data.vars.len(), data.f.len()))
}

pub fn build_even_darboux_named(data: &EvenData, names: &EvenNames) -> Result<Darboux> {
    let c = cme_check_even(data.field, &data.vars, &data.f, &data.g)?;
    if !c.holds {
        return Err(DarbouxError::Cme(c.residual.to_string()));
    }
    let m1 = data.f.len();
    if names.ys.len() != m1 || names.zs.len() != m1 {
        return Err(DarbouxError::Length(m1, names.ys.len().min(names.zs.len())));
    }
    if names.ws.len() != data.vars.len() {
        return Err(DarbouxError::Length(data.vars.len(), names.ws.len()));
    }
    let (y, z, w) = (|i: usize| names.ys[i].clone(), |i: usize| names.zs[i].clone(), |j: usize| names.ws[j].clone());
    let mut gens: Vec<Generator> = data.vars.iter().map(|v| Generator::new(v.clone(), 0)).collect();
    for i in 0..m1 {
        gens.push(Generator::new(y(i), -1));
        gens.push(Generator::new(z(i), -1));
    }
    for j in 0..data.vars.len() {
        gens.push(Generator::new(w(j), -2));
    }
    let a = Algebra::new(data.field, gens)?;
    let f = parse_all(&a, &data.f)?;
    let g = parse_all(&a, &data.g)?;
    // Φ = Σ f_i y_i + g_i z_i; the differential is read off from its partial derivatives
    let phi = sum_in(&a, (0..m1).map(|i| &(&f[i] * &Elem::gen(&a, &y(i)).unwrap()) + &(&g[i] * &Elem::gen(&a, &z(i)).unwrap())));
    let mut diff = Vec::new();
    for i in 0..m1 {
        diff.push((y(i), partial_by_name(&phi, &z(i))?));
        diff.push((z(i), partial_by_name(&phi, &y(i))?));
    }
    for (j, x) in data.vars.iter().enumerate() {
        diff.push((w(j), partial_by_name(&phi, x)?));
    }
    let p = Arc::new(Presentation::from_names(a, diff)?);
    let dr = DeRham::new(&p)?;
    let mut omega = Elem::zero(dr.algebra());
    for i in 0..m1 {
        omega = &omega + &(&dr.ddr_gen(&y(i))? * &dr.ddr_gen(&z(i))?);
    }
    for (j, x) in data.vars.iter().enumerate() {
        omega = &omega + &(&dr.ddr_gen(x)? * &dr.ddr_gen(&w(j))?);
    }
    let omega = ShiftedForm::new(-2, omega);
    assert_report(p.check_d_squared())?;
    assert_report(check_shifted_symplectic(&dr, &omega))?;
    Ok(Darboux {
        case: Case::Even,
        presentation: p,
        dr,
        omega,
        vars: data.vars.clone(),
        f,
        g,
        gk: Vec::new(),
        q: Vec::new(),
        nu: None,
        ys: names.ys.clone(),
        zs: names.zs.clone(),
        ws: names.ws.clone(),
    })
}

/// The generator swap `y_i <-> z_i` from the (f, g) algebra to the (g, f) algebra.
pub fn swap_morphism(a: &Darboux, b: &Darboux) -> Result<Morphism> {
    let m1 = a.f.len();
    let bp = b.presentation.algebra();
    let mut images = Vec::new();
    for i in 0..m1 {
        images.push((a.ys[i].clone(), Elem::gen(bp, &b.zs[i])?));
        images.push((a.zs[i].clone(), Elem::gen(bp, &b.ys[i])?));
    }
    Ok(Morphism::new(&a.presentation, &b.presentation, images)?)
}

pub fn build_general_darboux(data: &GeneralData) -> Result<Darboux> {
    let c = cme_check_general(data.field, &data.vars, &data.f)?;
    if !c.holds {
        return Err(DarbouxError::Cme(c.residual.to_string()));
    }
    let mut d = build_weighted_inner(&data.weighted())?;
    d.case = Case::General;
    Ok(d)
}

pub fn build_weighted_darboux(data: &WeightedData) -> Result<Darboux> {
    let c = cme_check_weighted(data.field, &data.vars, &data.units, &data.f, &data.q)?;
    if !c.holds {
        return Err(DarbouxError::Cme(c.residual.to_string()));
    }
    build_weighted_inner(data)
}

/// `h_j = f_j / 2q_j` and `g_k^j = ∂f_j/∂x_k − h_j ∂q_j/∂x_k` over the base ring, without
/// checking the master equation. Returns (base ring, h, g with `g[k][j]`, q).
pub fn weighted_coefficients(data: &WeightedData) -> Result<(Arc<Algebra>, Vec<Elem>, Vec<Vec<Elem>>, Vec<Elem>)> {
    if data.f.len() != data.q.len() {
        return Err(DarbouxError::Length(data.f.len(), data.q.len()));
    }
    let m1 = data.f.len();
    let base = base_algebra(data.field, &data.vars, &data.units)?;
    let fb = parse_all(&base, &data.f)?;
    let qb = parse_all(&base, &data.q)?;
    let half = Coeff::from_ratio(1, 2);
    let mut h = Vec::new();
    for (fj, qj) in fb.iter().zip(&qb) {
        let inv = qj.try_inverse().map_err(|_| DarbouxError::NotInvertible(qj.to_string()))?;
        h.push((fj * &inv).scale(&half));
    }
    let mut gk = Vec::new();
    for x in &data.vars {
        let row = (0..m1)
            .map(|j| Ok(&partial_by_name(&fb[j], x)? - &(&h[j] * &partial_by_name(&qb[j], x)?)))
            .collect::<Result<Vec<_>>>()?;
        gk.push(row);
    }
    Ok((base, h, gk, qb))
}

fn build_weighted_inner(data: &WeightedData) -> Result<Darboux> {
    let m1 = data.f.len();
    let (_, h, gk, qb) = weighted_coefficients(data)?;
    let mut gens: Vec<Generator> = data.vars.iter().map(|v| Generator::new(v.clone(), 0)).collect();
    for j in 0..m1 {
        gens.push(Generator::new(y(j), -1));
    }
    for k in 0..data.vars.len() {
        gens.push(Generator::new(z(k), -2));
    }
    let a = Algebra::with_units(data.field, gens, &data.units)?;
    let h = embed_all(&h, &a)?;
    let q = embed_all(&qb, &a)?;
    let gk: Vec<Vec<Elem>> = gk.iter().map(|r| embed_all(r, &a)).collect::<Result<_>>()?;
    let ys: Vec<Elem> = (0..m1).map(|j| Elem::gen(&a, &y(j)).unwrap()).collect();
    let mut diff = Vec::new();
    for j in 0..m1 {
        diff.push((y(j), h[j].clone()));
    }
    for k in 0..data.vars.len() {
        diff.push((z(k), sum_in(&a, (0..m1).map(|j| &gk[k][j] * &ys[j]))));
    }
    let p = Arc::new(Presentation::from_names(a, diff)?);
    let dr = DeRham::new(&p)?;
    let mut omega = Elem::zero(dr.algebra());
    for (k, x) in data.vars.iter().enumerate() {
        omega = &omega + &(&dr.ddr_gen(x)? * &dr.ddr_gen(&z(k))?);
    }
    let mut qy_block = Elem::zero(dr.algebra());
    for j in 0..m1 {
        let qy = dr.ddr(&(&q[j] * &ys[j]))?;
        qy_block = &qy_block + &(&qy * &dr.ddr_gen(&y(j))?);
    }
    omega = &omega + &qy_block;
    let omega = ShiftedForm::new(-2, omega);
    assert_report(p.check_d_squared())?;
    if q.iter().all(|qj| qj.as_constant().is_some()) {
        assert_report(check_shifted_symplectic(&dr, &omega))?;
    } else {
        // pairing has nonconstant entries; only closedness is decidable here
        assert_report(check_closed(&dr, &omega))?;
    }
    Ok(Darboux {
        case: Case::Weighted,
        presentation: p,
        dr,
        omega,
        vars: data.vars.clone(),
        f: h,
        g: Vec::new(),
        gk,
        q,
        nu: Some(-qy_block),
        ys: (0..m1).map(y).collect(),
        zs: (0..data.vars.len()).map(z).collect(),
        ws: Vec::new(),
    })
}

/// Keep the generators of degree > `cutoff`; fails when a kept differential mentions a dropped one.
pub fn darboux_subalgebra(a: &Arc<Presentation>, cutoff: i32) -> Result<(Arc<Presentation>, Morphism)> {
    subalgebra_without(a, |g| g.degree <= cutoff)
}

/// Drop the generators matching `drop`; fails when a kept differential mentions a dropped one.
pub fn subalgebra_without(a: &Arc<Presentation>, drop: impl Fn(&Generator) -> bool) -> Result<(Arc<Presentation>, Morphism)> {
    let alg = a.algebra();
    let kept: Vec<Generator> = alg.generators().iter().filter(|g| !drop(g)).cloned().collect();
    if kept.len() == alg.len() {
        return Ok((a.clone(), Morphism::identity(a)));
    }
    let balg = Algebra::with_units(alg.field(), kept, &alg.unit_strings())?;
    let images: Vec<Elem> = alg
        .generators()
        .iter()
        .map(|g| if drop(g) { Elem::zero(&balg) } else { Elem::gen(&balg, &g.name).unwrap() })
        .collect();
    let mut diff = Vec::new();
    for (i, g) in alg.generators().iter().enumerate() {
        if drop(g) {
            continue;
        }
        let dg = a.differential_of(i as Gid);
        if let Some(bad) = dg.support().into_iter().find(|&h| drop(alg.generator(h))) {
            return Err(DarbouxError::NotClosed { generator: g.name.clone(), dropped: alg.generator(bad).name.clone() });
        }
        diff.push((g.name.clone(), dg.substitute(&balg, &images)?));
    }
    let b = Arc::new(Presentation::from_names(balg, diff)?);
    let iota = Morphism::new(&b, a, Vec::new())?;
    assert_report(iota.check())?;
    Ok((b, iota))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn weighted_with_unit_weights_is_general() {
        let g = GeneralData { field: Field::Gaussian, vars: s(&["x"]), f: s(&["x", "i*x"]) };
        let a = build_general_darboux(&g).unwrap();
        let b = build_weighted_darboux(&g.weighted()).unwrap();
        assert_eq!(a.presentation.diff_table(), b.presentation.diff_table());
        assert_eq!(a.omega.leading.to_string(), b.omega.leading.to_string());
    }
}
