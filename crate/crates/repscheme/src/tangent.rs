//! Representative-level comparison on A_d: the resolution F• of F_d = A_d ⊗ W, the complex
//! L• computing RHom(F_d, F_d), the tangent complex h*T, the map γ: h*T → L•[1] and the
//! Serre pairing on L•.
//!
//! L• is modelled as End(W) ⊗ A_d ⊗ ∧V* with differential d + [τ, −], where
//! τ = Σ_P ε_P G_P ⊗ e_P* is the Maurer–Cartan element assembled from the generator matrices.

use std::collections::BTreeMap;
use std::sync::Arc;

use gca_core::{partial_by_name, Algebra, Coeff, Elem, Generator, Presentation, Report};

use crate::bd::build_bd;
use crate::cobar::cobar;
use crate::module::{add_to, DgMap, DgModule, Vector};
use crate::nc::Leibniz;
use crate::scheme::{entry_name, matrixify, RepScheme};
use crate::{RepError, Result};

type Mask = u8;

fn bits(m: Mask) -> Vec<usize> {
    (0..8).filter(|i| m & (1 << i) != 0).map(|i| i + 1).collect()
}

fn mask(s: &[usize]) -> Mask {
    s.iter().fold(0, |m, &i| m | (1 << (i - 1)))
}

fn size(m: Mask) -> usize {
    m.count_ones() as usize
}

/// Sign of `e_P ∧ e_Q = ± e_{P∪Q}` for disjoint P, Q.
fn wedge_sign(p: Mask, q: Mask) -> i64 {
    let inv: u32 = bits(p).iter().map(|&a| bits(q).iter().filter(|&&b| b < a).count() as u32).sum();
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn sign(odd: bool) -> Coeff {
    if odd {
        Coeff::from_int(-1)
    } else {
        Coeff::one()
    }
}

fn pm(s: i64) -> Coeff {
    Coeff::from_int(s)
}

fn digits(m: Mask) -> String {
    bits(m).iter().map(|i| i.to_string()).collect()
}

/// Element of End(W) ⊗ A_d ⊗ ∧V*: `(μ, ν, S) ↦ a` for `E_{μν} ⊗ a ⊗ e_S*`.
type Conv = BTreeMap<(usize, usize, Mask), Elem>;

fn conv_add(v: &mut Conv, k: (usize, usize, Mask), c: Elem) {
    if c.is_zero() {
        return;
    }
    let sum = match v.remove(&k) {
        Some(old) => &old + &c,
        None => c,
    };
    if !sum.is_zero() {
        v.insert(k, sum);
    }
}

/// `(E_{μν} a e_S)(E_{ρσ} a' e_R) = δ_{νρ} (−1)^{|S||a'|} E_{μσ} aa' e_S∧e_R`.
fn conv_mul(x: &Conv, y: &Conv) -> Result<Conv> {
    let mut out = Conv::new();
    for (&(mu, nu, s), a) in x {
        for (&(rho, sg, r), b) in y {
            if nu != rho || s & r != 0 {
                continue;
            }
            let odd = size(s) % 2 == 1 && b.degree()?.unwrap_or(0).rem_euclid(2) == 1;
            let c = (a * b).scale(&(&sign(odd) * &pm(wedge_sign(s, r))));
            conv_add(&mut out, (mu, sg, s | r), c);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Twisting {
    pub scheme: RepScheme,
    pub tau: Conv,
}

/// `τ = Σ_P (−1)^{|P|(|P|−1)/2} σ_P G_P ⊗ e_P*`; the sign is forced by the Maurer–Cartan equation.
pub fn twisting(a: &RepScheme) -> Result<Twisting> {
    let mut tau = Conv::new();
    for (i, s) in a.subsets.iter().enumerate() {
        let m = a.matrix(&a.matrices[i])?;
        let eps = &sign(s.len() % 4 >= 2) * &pm(a.orientation[i]);
        for al in 0..a.d {
            for be in 0..a.d {
                conv_add(&mut tau, (al, be, mask(s)), m.get(al, be).scale(&eps));
            }
        }
    }
    Ok(Twisting { scheme: a.clone(), tau })
}

impl Twisting {
    /// `dτ + τ²`, rendered entry by entry.
    pub fn maurer_cartan(&self) -> Result<Report> {
        let mut res = self.tau.iter().map(|(k, c)| (*k, self.scheme.presentation.d(c))).collect::<Conv>();
        res.retain(|_, c| !c.is_zero());
        for (k, c) in conv_mul(&self.tau, &self.tau)? {
            conv_add(&mut res, k, c);
        }
        let mut r = Report::new();
        match res.iter().next() {
            None => r.pass("d tau + tau^2 = 0"),
            Some(((mu, nu, s), c)) => r.fail("d tau + tau^2 = 0", format!("E_{}{} e*{}: {c}", mu + 1, nu + 1, digits(*s)), res.len()),
        }
        Ok(r)
    }
}

pub fn l_label(s: Mask, mu: usize, nu: usize) -> String {
    format!("b{}^{}{}", digits(s), mu + 1, nu + 1)
}

/// L•: generators `b_S^{μν} = E_{μν} ⊗ e_S*` in degree |S|, `D b = τb − (−1)^{|S|} bτ`.
pub fn build_l(t: &Twisting) -> Result<DgModule> {
    let a = &t.scheme;
    let (n, d) = (a.n, a.d);
    let alg = a.algebra();
    let mut keys = Vec::new();
    for s in 0..(1u16 << n) {
        for mu in 0..d {
            for nu in 0..d {
                keys.push((mu, nu, s as Mask));
            }
        }
    }
    keys.sort_by_key(|&(mu, nu, s)| (size(s), s, mu, nu));
    let index: BTreeMap<(usize, usize, Mask), usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let gens = keys.iter().map(|&(mu, nu, s)| (l_label(s, mu, nu), size(s) as i32)).collect();
    let mut diff = Vec::new();
    for &(mu, nu, s) in &keys {
        let b = Conv::from([((mu, nu, s), Elem::one(alg))]);
        let mut db = conv_mul(&t.tau, &b)?;
        for (k, c) in conv_mul(&b, &t.tau)? {
            conv_add(&mut db, k, c.scale(&sign(size(s) % 2 == 0)));
        }
        let mut v = Vector::new();
        for (k, c) in db {
            add_to(&mut v, index[&k], c);
        }
        diff.push(v);
    }
    DgModule::new(&a.presentation, gens, diff)
}

/// R_d = A_d ⊗ k[x₁..x_n].
pub fn build_rd(a: &RepScheme) -> Result<Arc<Presentation>> {
    let base = a.algebra();
    let mut gens = base.generators().to_vec();
    gens.extend((1..=a.n).map(|i| Generator::new(format!("x{i}"), 0)));
    let alg = Algebra::new(base.field(), gens)?;
    let mut diff = Vec::new();
    for (g, dg) in base.generators().iter().zip(a.presentation.differentials()) {
        diff.push((g.name.clone(), dg.embed(&alg)?));
    }
    Ok(Arc::new(Presentation::from_names(alg, diff)?))
}

pub fn f_label(mu: usize, s: Mask) -> String {
    format!("f{}.e{}", mu + 1, digits(s))
}

/// F•: generators `f_μ ⊗ e_S` in degree −|S| over R_d, with
/// `D(f_μ e_S) = Σ_{P⊆S} sh(P, S∖P) σ_P G_P^{νμ} f_ν e_{S∖P} + Σ_{i∈S} sh(i, S∖i) x_i f_μ e_{S∖i}`.
pub fn build_f(a: &RepScheme) -> Result<DgModule> {
    let rd = build_rd(a)?;
    let alg = rd.algebra();
    let (n, d) = (a.n, a.d);
    let mut keys = Vec::new();
    for s in 0..(1u16 << n) {
        for mu in 0..d {
            keys.push((mu, s as Mask));
        }
    }
    keys.sort_by_key(|&(mu, s)| (std::cmp::Reverse(size(s)), s, mu));
    let index: BTreeMap<(usize, Mask), usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let gens = keys.iter().map(|&(mu, s)| (f_label(mu, s), -(size(s) as i32))).collect();
    let mut diff = Vec::new();
    for &(mu, s) in &keys {
        let mut v = Vector::new();
        for (i, p) in a.subsets.iter().enumerate() {
            let pm_ = mask(p);
            if pm_ & s != pm_ {
                continue;
            }
            let q = s & !pm_;
            let eps = pm(a.orientation[i] * wedge_sign(pm_, q));
            for nu in 0..d {
                let g = Elem::gen(alg, &entry_name(&a.matrices[i], nu, mu))?;
                add_to(&mut v, index[&(nu, q)], g.scale(&eps));
            }
        }
        for i in bits(s) {
            let rest = s & !(1 << (i - 1));
            let c = pm(wedge_sign(1 << (i - 1), rest));
            add_to(&mut v, index[&(mu, rest)], Elem::gen(alg, &format!("x{i}"))?.scale(&c));
        }
        diff.push(v);
    }
    DgModule::new(&rd, gens, diff)
}

pub fn t_label(g: &str) -> String {
    format!("d/d{g}")
}

pub fn action_label(mu: usize, nu: usize) -> String {
    format!("G^{}{}", mu + 1, nu + 1)
}

/// h*T: `G^{μν}` in degree −1 (infinitesimal conjugation), `∂/∂g` in degree −|g|, with
/// `D = [d, −]` on derivations and `D(G^{μν}) = Σ [E_{μν}, M]^{ab} ∂/∂M^{ab}`.
pub fn build_tangent(a: &RepScheme) -> Result<DgModule> {
    let alg = a.algebra();
    let d = a.d;
    let mut gens: Vec<(String, i32)> = Vec::new();
    for mu in 0..d {
        for nu in 0..d {
            gens.push((action_label(mu, nu), -1));
        }
    }
    let offset = gens.len();
    for g in alg.generators() {
        gens.push((t_label(&g.name), -g.degree));
    }
    let mut diff = Vec::new();
    for mu in 0..d {
        for nu in 0..d {
            let mut v = Vector::new();
            for m in &a.matrices {
                let mat = a.matrix(m)?;
                for x in 0..d {
                    for y in 0..d {
                        // [E_{μν}, M]^{xy} = δ_{xμ} M^{νy} − M^{xμ} δ_{νy}
                        let mut c = Elem::zero(alg);
                        if x == mu {
                            c = &c + mat.get(nu, y);
                        }
                        if y == nu {
                            c = &c - mat.get(x, mu);
                        }
                        let j = offset + alg.id(&entry_name(m, x, y))? as usize;
                        add_to(&mut v, j, c);
                    }
                }
            }
            diff.push(v);
        }
    }
    for g in alg.generators() {
        let mut v = Vector::new();
        let s = sign(g.degree.rem_euclid(2) == 0);
        for (j, h) in alg.generators().iter().enumerate() {
            let dh = a.presentation.diff_by_name(&h.name)?;
            add_to(&mut v, offset + j, partial_by_name(dh, &g.name)?.scale(&s));
        }
        diff.push(v);
    }
    DgModule::new(&a.presentation, gens, diff)
}

/// The complexes and the map `γ: h*T → L•[1]`.
#[derive(Clone, Debug)]
pub struct Gamma {
    pub twisting: Twisting,
    pub l: Arc<DgModule>,
    pub l1: Arc<DgModule>,
    pub tangent: Arc<DgModule>,
    pub map: DgMap,
}

pub fn build_gamma(a: &RepScheme) -> Result<Gamma> {
    let t = twisting(a)?;
    let l = Arc::new(build_l(&t)?);
    let l1 = Arc::new(l.shift(1)?);
    let tangent = Arc::new(build_tangent(a)?);
    let map = gamma_map(a, &l1, &tangent)?;
    Ok(Gamma { twisting: t, l, l1, tangent, map })
}

/// Sign of γ by |P|; up to an overall sign these are the only ones making γ a chain map.
const GAMMA_SIGNS: [i64; 5] = [1, 1, 1, -1, -1];

/// `γ(G^{μν}) = b^{μν}`, `γ(∂/∂G_P^{ab}) = ε_{|P|} σ_P b_P^{ab}`.
fn gamma_map(a: &RepScheme, l1: &Arc<DgModule>, tangent: &Arc<DgModule>) -> Result<DgMap> {
    let one = Elem::one(a.algebra());
    let mut images = vec![Vector::new(); tangent.len()];
    for mu in 0..a.d {
        for nu in 0..a.d {
            let j = l1.index(&l_label(0, mu, nu))?;
            images[tangent.index(&action_label(mu, nu))?] = Vector::from([(j, one.clone())]);
        }
    }
    for (i, s) in a.subsets.iter().enumerate() {
        let c = one.scale(&pm(GAMMA_SIGNS[s.len()] * a.orientation[i]));
        for x in 0..a.d {
            for y in 0..a.d {
                let j = l1.index(&l_label(mask(s), x, y))?;
                images[tangent.index(&t_label(&entry_name(&a.matrices[i], x, y)))?] = Vector::from([(j, c.clone())]);
            }
        }
    }
    Ok(DgMap { source: tangent.clone(), target: l1.clone(), images })
}

impl Gamma {
    pub fn check(&self) -> Result<Report> {
        let mut r = Report::new();
        r.extend("", self.twisting.maurer_cartan()?);
        r.extend("L ", self.l.check());
        r.extend("T ", self.tangent.check());
        r.extend("gamma ", self.map.check());
        r.record("gamma bijective on generators", self.map.is_signed_bijection(), "γ is not a signed bijection");
        Ok(r)
    }
}


/// `⟨b_P^{μν}, b_R^{ρσ}⟩ = sh(P, R) δ_{νρ} δ_{σμ}` when `P ⊔ R = [n]`: trace followed by the
/// top exterior component.
pub fn l_pairing(l: &DgModule, n: usize, i: usize, j: usize) -> i64 {
    let parse = |k: usize| -> (Mask, usize, usize) {
        let label = &l.gens[k].0;
        let (s, idx) = label[1..].split_once('^').expect("label b{S}^{μν}");
        let s = s.bytes().fold(0, |m, c| m | (1 << (c - b'1')));
        let idx = idx.as_bytes();
        (s, (idx[0] - b'1') as usize, (idx[1] - b'1') as usize)
    };
    let ((p, mu, nu), (r, rho, sg)) = (parse(i), parse(j));
    if p & r != 0 || (p | r) as usize != (1 << n) - 1 || nu != rho || sg != mu {
        return 0;
    }
    wedge_sign(p, r)
}

/// F• over R_d and L• over A_d.
pub fn build_f_and_l(d: usize) -> Result<(DgModule, DgModule)> {
    let a = matrixify(&cobar(4, Leibniz::Left)?, d)?;
    Ok((build_f(&a)?, build_l(&twisting(&a)?)?))
}

/// `τ` is Maurer–Cartan, and F• and L• square to zero.
pub fn beta_check(d: usize) -> Result<Report> {
    let a = matrixify(&cobar(4, Leibniz::Left)?, d)?;
    let t = twisting(&a)?;
    let mut r = t.maurer_cartan()?;
    r.extend("F ", build_f(&a)?.check());
    r.extend("L ", build_l(&t)?.check());
    Ok(r)
}

pub fn gamma_check(d: usize) -> Result<Report> {
    let a = matrixify(&cobar(4, Leibniz::Left)?, d)?;
    build_gamma(&a)?.check()
}

/// Compare `(−1)^{|P|} ⟨γ ∂/∂g, γ ∂/∂h⟩` (the shift to L•[1]) with `ι_h ι_g ω⁰` for all
/// generators g, h of A_d other than T.
pub fn serre_pairing_check(d: usize) -> Result<Report> {
    let bd = build_bd(d)?;
    let g = build_gamma(&bd.a)?;
    let omega = bd.dr.pairing_matrix(&bd.omega0)?;
    let balg = bd.presentation.algebra();
    let n = bd.a.n;
    let mut blocks: BTreeMap<&str, Option<String>> = ["X-S", "C-C", "other"].into_iter().map(|b| (b, None)).collect();
    let targets: Vec<Option<(usize, Coeff)>> = g
        .map
        .images
        .iter()
        .map(|v| v.iter().next().and_then(|(&j, c)| Some((j, c.as_constant()?))))
        .collect();
    for (i, (li, _)) in g.tangent.gens.iter().enumerate() {
        let Some(gi) = li.strip_prefix("d/d").filter(|n| !n.starts_with('T')) else { continue };
        for (j, (lj, _)) in g.tangent.gens.iter().enumerate() {
            let Some(gj) = lj.strip_prefix("d/d").filter(|n| !n.starts_with('T')) else { continue };
            let (Some((ki, ci)), Some((kj, cj))) = (&targets[i], &targets[j]) else {
                return Err(RepError::Input(format!("γ does not send {li} or {lj} to a generator")));
            };
            let shift = sign(g.l.gens[*ki].1 % 2 == 1);
            let serre = &(&(&pm(l_pairing(&g.l, n, *ki, *kj)) * ci) * cj) * &shift;
            let w = &omega[balg.id(gi)? as usize][balg.id(gj)? as usize];
            let block = match (&gi[..1], &gj[..1]) {
                ("X", "S") | ("S", "X") => "X-S",
                ("C", "C") => "C-C",
                _ => "other",
            };
            let slot = blocks.get_mut(block).expect("known block");
            if slot.is_none() && serre != *w {
                *slot = Some(format!("<{gi}, {gj}>: Serre {serre}, omega0 {w}"));
            }
        }
    }
    let mut r = Report::new();
    for (b, fail) in blocks {
        let name = format!("Serre pairing = omega0 on the {b} block");
        match fail {
            None => r.pass(name),
            Some(res) => r.fail(name, res, 1),
        }
    }
    Ok(r)
}
