use std::collections::BTreeMap;
use std::sync::Arc;

use gca_core::Report;

use crate::complex::{ChainMap, FreeModuleComplex};
use crate::matrix::Matrix;
use crate::Result;

/// Strong deformation retract `K ⇄ K'` with `p∘i = id` and `d s + s d = id − i∘p`.
#[derive(Clone, Debug)]
pub struct ContractionCertificate {
    pub complex: Arc<FreeModuleComplex>,
    pub reduced: Arc<FreeModuleComplex>,
    /// `K' → K`
    pub i: ChainMap,
    /// `K → K'`
    pub p: ChainMap,
    /// `s[k]: K^k → K^{k−1}`
    pub s: BTreeMap<i32, Matrix>,
    /// (degree, source label, target label) of each cancelled unit entry
    pub cancelled: Vec<(i32, String, String)>,
}

impl ContractionCertificate {
    fn s_at(&self, k: i32) -> Matrix {
        self.s
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.complex.ring(), self.complex.dim(k - 1), self.complex.dim(k)))
    }

    pub fn check(&self) -> Report {
        let mut r = Report::new();
        r.extend("i ", self.i.check());
        r.extend("p ", self.p.check());
        r.record("p i = id", self.i.then(&self.p).is_identity(), "p∘i differs from the identity");
        let k = &self.complex;
        let (lo, hi) = k.window();
        let ring = k.ring();
        for deg in lo..=hi {
            // d^{k−1} s^k + s^{k+1} d^k on K^k
            let ds = k.d(deg - 1).mul(&self.s_at(deg));
            let sd = self.s_at(deg + 1).mul(&k.d(deg));
            let ip = self.i.at(deg).mul(&self.p.at(deg));
            let want = Matrix::identity(ring, k.dim(deg)).sub(&ip);
            let name = format!("ds + sd = id - ip at {deg}");
            match ds.add(&sd).sub(&want).first_nonzero() {
                None => r.pass(name),
                Some((a, b, e)) => r.fail(name, format!("{} <- {}: {e}", k.basis(deg)[a], k.basis(deg)[b]), 1),
            }
        }
        r
    }
}

struct Step {
    reduced: FreeModuleComplex,
    i: BTreeMap<i32, Matrix>,
    p: BTreeMap<i32, Matrix>,
    s: (i32, Matrix),
}

/// Cancel the unit entry `d^k[r][c]`.
fn cancel_once(k: &FreeModuleComplex, deg: i32, r: usize, c: usize) -> Result<Step> {
    let ring = k.ring();
    let (lo, hi) = k.window();
    let d = k.d(deg);
    let e_inv = d.get(r, c).try_inverse()?;
    let n_k = k.dim(deg);
    let n_k1 = k.dim(deg + 1);

    let mut bases = Vec::new();
    for j in lo..=hi {
        let mut b = k.basis(j).to_vec();
        if j == deg {
            b.remove(c);
        } else if j == deg + 1 {
            b.remove(r);
        }
        bases.push(b);
    }
    let mut diffs = Vec::new();
    for j in lo..hi {
        let m = if j == deg {
            // δ − γ e⁻¹ β
            let mut m = Matrix::zeros(ring, n_k1 - 1, n_k - 1);
            for (ii, i) in (0..n_k1).filter(|&i| i != r).enumerate() {
                for (jj, jc) in (0..n_k).filter(|&jc| jc != c).enumerate() {
                    let v = d.get(i, jc) - &(&(d.get(i, c) * &e_inv) * d.get(r, jc));
                    m.set(ii, jj, v);
                }
            }
            m
        } else if j == deg - 1 {
            k.d(j).without_row(c)
        } else if j == deg + 1 {
            k.d(j).without_col(r)
        } else {
            k.d(j)
        };
        diffs.push(m);
    }
    let reduced = FreeModuleComplex::new(ring, lo, bases, diffs)?;

    let mut i_maps = BTreeMap::new();
    let mut p_maps = BTreeMap::new();
    for j in lo..=hi {
        let n = k.dim(j);
        let id = Matrix::identity(ring, n);
        if j == deg {
            // i: b ↦ b − e⁻¹ d[r][b] c;  p: drop c
            let keep: Vec<usize> = (0..n).filter(|&x| x != c).collect();
            let mut im = id.select(&(0..n).collect::<Vec<_>>(), &keep);
            for (jj, &b) in keep.iter().enumerate() {
                im.set(c, jj, -&(&e_inv * d.get(r, b)));
            }
            i_maps.insert(j, im);
            p_maps.insert(j, id.select(&keep, &(0..n).collect::<Vec<_>>()));
        } else if j == deg + 1 {
            // i: inclusion;  p: a' ↦ −γ e⁻¹ a'
            let keep: Vec<usize> = (0..n).filter(|&x| x != r).collect();
            i_maps.insert(j, id.select(&(0..n).collect::<Vec<_>>(), &keep));
            let mut pm = id.select(&keep, &(0..n).collect::<Vec<_>>());
            for (ii, &row) in keep.iter().enumerate() {
                pm.set(ii, r, -&(d.get(row, c) * &e_inv));
            }
            p_maps.insert(j, pm);
        } else {
            i_maps.insert(j, id.clone());
            p_maps.insert(j, id);
        }
    }
    let mut s = Matrix::zeros(ring, n_k, n_k1);
    s.set(c, r, e_inv);
    Ok(Step { reduced, i: i_maps, p: p_maps, s: (deg + 1, s) })
}

/// Gaussian cancellation of nonzero constant entries accepted by `allow(degree, source, target)`.
pub fn cancel_units_where(
    k: &Arc<FreeModuleComplex>,
    allow: impl Fn(i32, &str, &str) -> bool,
) -> Result<(Arc<FreeModuleComplex>, ContractionCertificate)> {
    let (lo, hi) = k.window();
    let mut cur = k.clone();
    let mut i_tot = ChainMap::identity(k);
    let mut p_tot = ChainMap::identity(k);
    let mut s_tot: BTreeMap<i32, Matrix> = BTreeMap::new();
    let mut cancelled = Vec::new();
    'outer: loop {
        for deg in lo..hi {
            let d = cur.d(deg);
            for c in 0..d.cols() {
                for r in 0..d.rows() {
                    let e = d.get(r, c);
                    let unit = e.as_constant().is_some_and(|x| !x.is_zero());
                    if !unit || !allow(deg, &cur.basis(deg)[c], &cur.basis(deg + 1)[r]) {
                        continue;
                    }
                    cancelled.push((deg, cur.basis(deg)[c].clone(), cur.basis(deg + 1)[r].clone()));
                    let step = cancel_once(&cur, deg, r, c)?;
                    let next = Arc::new(step.reduced);
                    let i_step = ChainMap { source: next.clone(), target: cur.clone(), maps: step.i };
                    let p_step = ChainMap { source: cur.clone(), target: next.clone(), maps: step.p };
                    // s_total += i_total ∘ s_step ∘ p_total
                    let (sd, sm) = step.s;
                    let add = i_tot.at(sd - 1).mul(&sm).mul(&p_tot.at(sd));
                    let entry = s_tot.entry(sd).or_insert_with(|| Matrix::zeros(k.ring(), k.dim(sd - 1), k.dim(sd)));
                    *entry = entry.add(&add);
                    i_tot = i_step.then(&i_tot);
                    p_tot = p_tot.then(&p_step);
                    cur = next;
                    continue 'outer;
                }
            }
        }
        break;
    }
    let cert = ContractionCertificate { complex: k.clone(), reduced: cur.clone(), i: i_tot, p: p_tot, s: s_tot, cancelled };
    Ok((cur, cert))
}

pub fn cancel_units(k: &Arc<FreeModuleComplex>) -> Result<(Arc<FreeModuleComplex>, ContractionCertificate)> {
    cancel_units_where(k, |_, _, _| true)
}
