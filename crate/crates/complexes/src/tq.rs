//! The tangent complex `T_q` of `q: Spec A(1) → Spec C₀`, its twin `T′_q`, the involution φ,
//! the map ψ to `L_{A(1)}[−2]`, and `Θ_δ` for the zero section.

use std::sync::Arc;

use darboux::{weighted_coefficients, y, GeneralData, WeightedData};
use gca_core::{partial_by_name, Algebra, Coeff, Elem, Report};

use crate::cancel::{cancel_units_where, ContractionCertificate};
use crate::complex::{ChainMap, FreeModuleComplex};
use crate::matrix::Matrix;
use crate::semifree::{Image, SemifreeModule};
use crate::{ComplexError, Result};

/// `h_j` and `g_k^j = g[k][j]` over the base ring A(0).
#[derive(Clone, Debug)]
pub struct TqData {
    pub ring: Arc<Algebra>,
    pub vars: Vec<String>,
    pub ys: Vec<String>,
    pub h: Vec<Elem>,
    pub g: Vec<Vec<Elem>>,
    pub q: Vec<Elem>,
}

impl TqData {
    /// Formal: the master equation is not required (only d² = 0 of the output depends on it).
    pub fn general(d: &GeneralData) -> Result<TqData> {
        TqData::weighted(&d.weighted())
    }

    pub fn weighted(d: &WeightedData) -> Result<TqData> {
        let (ring, h, g, q) = weighted_coefficients(d)?;
        Ok(TqData { ring, vars: d.vars.clone(), ys: (0..h.len()).map(y).collect(), h, g, q })
    }

    fn m0(&self) -> usize {
        self.vars.len()
    }

    fn m1(&self) -> usize {
        self.ys.len()
    }

    fn dy(&self, k: usize) -> usize {
        self.m0() + k
    }
    fn qa(&self, l: usize) -> usize {
        self.m0() + self.m1() + l
    }
    fn qx(&self, i: usize) -> usize {
        2 * self.m0() + self.m1() + i
    }

    fn gens(&self) -> Vec<(String, i32)> {
        let mut g: Vec<(String, i32)> = self.vars.iter().map(|x| (format!("dx_{x}"), 0)).collect();
        g.extend(self.ys.iter().map(|y| (format!("dy_{y}"), 1)));
        g.extend(self.vars.iter().map(|x| (format!("qa_{x}"), 2)));
        g.extend(self.vars.iter().map(|x| (format!("qx_{x}"), 1)));
        g
    }

    fn dh(&self, k: usize, i: usize) -> Result<Elem> {
        Ok(partial_by_name(&self.h[k], &self.vars[i])?)
    }

    fn dg(&self, l: usize, j: usize, i: usize) -> Result<Elem> {
        Ok(partial_by_name(&self.g[l][j], &self.vars[i])?)
    }

    /// `Σ_k ∂h_k/∂x_i ∂y_k − Σ_{j,l} ∂g_l^j/∂x_i y_j q*∂α_l − q*∂x_i`
    fn full_image(&self, i: usize) -> Result<Image> {
        let mut img = Vec::new();
        for k in 0..self.m1() {
            img.push((self.dh(k, i)?, None, self.dy(k)));
        }
        for l in 0..self.m0() {
            for j in 0..self.m1() {
                img.push((-&self.dg(l, j, i)?, Some(j), self.qa(l)));
            }
        }
        img.push((-Elem::one(&self.ring), None, self.qx(i)));
        Ok(img)
    }

    fn module(&self, prime: bool) -> Result<SemifreeModule> {
        let one = Elem::one(&self.ring);
        let mut d: Vec<Image> = Vec::new();
        for i in 0..self.m0() {
            d.push(if prime { vec![(one.clone(), None, self.qx(i))] } else { self.full_image(i)? });
        }
        for k in 0..self.m1() {
            d.push((0..self.m0()).map(|l| (-&self.g[l][k], None, self.qa(l))).collect());
        }
        d.extend((0..2 * self.m0()).map(|_| Vec::new()));
        Ok(SemifreeModule { ring: self.ring.clone(), ys: self.ys.clone(), h: self.h.clone(), gens: self.gens(), d })
    }

    /// `L_{A(1)}[−2]`: `ddr x_i` in degree 2, `ddr y_j` in degree 1, `d(ddr y_j) = Σ_l ∂h_j/∂x_l ddr x_l`.
    fn cotangent_module(&self) -> Result<SemifreeModule> {
        let mut gens: Vec<(String, i32)> = self.vars.iter().map(|x| (format!("ddr_{x}"), 2)).collect();
        gens.extend(self.ys.iter().map(|y| (format!("ddr_{y}"), 1)));
        let mut d: Vec<Image> = (0..self.m0()).map(|_| Vec::new()).collect();
        for j in 0..self.m1() {
            d.push((0..self.m0()).map(|l| Ok((self.dh(j, l)?, None, l))).collect::<Result<Image>>()?);
        }
        Ok(SemifreeModule { ring: self.ring.clone(), ys: self.ys.clone(), h: self.h.clone(), gens, d })
    }
}

fn check_window(lo: i32) -> Result<()> {
    if lo > 2 {
        return Err(ComplexError::Window(format!("window [{lo}, 2] is empty")));
    }
    Ok(())
}

pub fn build_tq(data: &TqData, lo: i32) -> Result<Arc<FreeModuleComplex>> {
    check_window(lo)?;
    Ok(Arc::new(data.module(false)?.complex(lo, 2)?))
}

pub fn build_tq_prime(data: &TqData, lo: i32) -> Result<Arc<FreeModuleComplex>> {
    check_window(lo)?;
    Ok(Arc::new(data.module(true)?.complex(lo, 2)?))
}

/// `L_{A(1)}[−2]` on the window.
pub fn build_cotangent(data: &TqData, lo: i32) -> Result<Arc<FreeModuleComplex>> {
    check_window(lo)?;
    Ok(Arc::new(data.cotangent_module()?.complex(lo, 2)?))
}

/// φ: `T_q → T′_q` and back; it exchanges `q*∂x_i` with `d_q(∂x_i)` and fixes the other generators.
pub fn build_phi(data: &TqData, lo: i32) -> Result<(ChainMap, ChainMap)> {
    let tq = build_tq(data, lo)?;
    let tqp = build_tq_prime(data, lo)?;
    let m = data.module(false)?;
    let mp = data.module(true)?;
    let one = Elem::one(&data.ring);
    let mut images: Vec<Image> = (0..m.gens.len()).map(|e| vec![(one.clone(), None, e)]).collect();
    for i in 0..data.m0() {
        images[data.qx(i)] = data.full_image(i)?;
    }
    let fwd = m.linear_map(&tq, &mp, &tqp, &images);
    let back = mp.linear_map(&tqp, &m, &tq, &images);
    Ok((fwd, back))
}

fn unit_weights(data: &TqData) -> Result<()> {
    if data.q.iter().any(|q| q.as_constant().is_none_or(|c| !c.is_one())) {
        return Err(ComplexError::Unsupported("ψ is defined for unit weights q_j = 1".into()));
    }
    Ok(())
}

/// ψ: `T′_q → L_{A(1)}[−2]`, `∂y_j ↦ 2 ddr y_j`, `q*∂α_l ↦ −ddr x_l`, the rest ↦ 0.
pub fn build_psi(data: &TqData, lo: i32) -> Result<ChainMap> {
    unit_weights(data)?;
    let tqp = build_tq_prime(data, lo)?;
    let l = build_cotangent(data, lo)?;
    let mp = data.module(true)?;
    let lm = data.cotangent_module()?;
    let mut images: Vec<Image> = vec![Vec::new(); mp.gens.len()];
    for k in 0..data.m1() {
        images[data.dy(k)] = vec![(Elem::int(&data.ring, 2), None, data.m0() + k)];
    }
    for i in 0..data.m0() {
        images[data.qa(i)] = vec![(Elem::int(&data.ring, -1), None, i)];
    }
    Ok(mp.linear_map(&tqp, &lm, &l, &images))
}

/// `Θ_ν = ψ∘φ`.
pub fn build_theta_nu(data: &TqData, lo: i32) -> Result<ChainMap> {
    let (phi, _) = build_phi(data, lo)?;
    Ok(phi.then(&build_psi(data, lo)?))
}

/// `Θ_ν = c − ν` read literally: `q*∂x_i ↦ Σ_j g_i^j ddr y_j − Σ_{j,k} ∂g_i^j/∂x_k y_j ddr x_k`.
pub fn build_theta_nu_printed(data: &TqData, lo: i32) -> Result<ChainMap> {
    unit_weights(data)?;
    let tq = build_tq(data, lo)?;
    let l = build_cotangent(data, lo)?;
    let m = data.module(false)?;
    let lm = data.cotangent_module()?;
    let mut images: Vec<Image> = vec![Vec::new(); m.gens.len()];
    for k in 0..data.m1() {
        images[data.dy(k)] = vec![(Elem::int(&data.ring, 2), None, data.m0() + k)];
    }
    for i in 0..data.m0() {
        images[data.qa(i)] = vec![(Elem::int(&data.ring, -1), None, i)];
        let mut img = Vec::new();
        for j in 0..data.m1() {
            img.push((data.g[i][j].clone(), None, data.m0() + j));
            for k in 0..data.m0() {
                img.push((-&data.dg(i, j, k)?, Some(j), k));
            }
        }
        images[data.qx(i)] = img;
    }
    Ok(m.linear_map(&tq, &lm, &l, &images))
}

/// Cancels the `∂x_i ↦ q*∂x_i` unit blocks of `T′_q`; ψ restricted to what remains must be
/// a basis bijection onto `L_{A(1)}[−2]` in every degree above the bottom of the window.
pub fn certify_psi(data: &TqData, lo: i32) -> Result<(ContractionCertificate, Report)> {
    let tqp = build_tq_prime(data, lo)?;
    let psi = build_psi(data, lo)?;
    let (_, cert) = cancel_units_where(&tqp, |_, src, _| src.split('*').next_back().is_some_and(|g| g.starts_with("dx_")))?;
    let restricted = cert.i.then(&psi);
    let mut r = Report::new();
    r.extend("psi ", psi.check());
    r.extend("contraction ", cert.check());
    // The bottom degree keeps the `y_I q*∂x` whose partners fell outside the window.
    for k in lo + 1..=2 {
        let m = restricted.at(k);
        r.record(format!("psi bijective at {k}"), m.is_monomial_constant(), format!("{}x{} block is not a scaled permutation", m.rows(), m.cols()));
    }
    Ok((cert, r))
}

/// `Θ_δ: T_p → L_{A(0)}[−2]`, `p*∂α_l[−1] ↦ −ddr x_l`, both concentrated in degree 2.
pub fn build_theta_delta(ring: &Arc<Algebra>, vars: &[String]) -> Result<ChainMap> {
    let n = vars.len();
    let tp = FreeModuleComplex::new(ring, 2, vec![vars.iter().map(|x| format!("qa_{x}")).collect()], Vec::new())?;
    let l = FreeModuleComplex::new(ring, 2, vec![vars.iter().map(|x| format!("ddr_{x}")).collect()], Vec::new())?;
    let m = Matrix::identity(ring, n).scale(&Coeff::from_int(-1));
    Ok(ChainMap { source: Arc::new(tp), target: Arc::new(l), maps: [(2, m)].into_iter().collect() })
}
