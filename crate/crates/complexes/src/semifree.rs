//! Modules over `A(1) = A(0)[y_1..y_m]` (odd y, `dy_j = h_j`) that are free on finitely many
//! generators, expanded into complexes of free A(0)-modules on the basis `y_I e`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use gca_core::{Algebra, Coeff, Elem};

use crate::complex::{ChainMap, FreeModuleComplex};
use crate::matrix::Matrix;
use crate::Result;

/// `Σ c · y_j? · e`: coefficient in A(0), optional single y factor, generator index.
pub type Image = Vec<(Elem, Option<usize>, usize)>;

#[derive(Clone, Debug)]
pub struct SemifreeModule {
    pub ring: Arc<Algebra>,
    pub ys: Vec<String>,
    pub h: Vec<Elem>,
    /// (label, degree)
    pub gens: Vec<(String, i32)>,
    pub d: Vec<Image>,
}

fn subsets(m: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size <= m {
        rec(0, m, size, &mut Vec::new(), &mut out);
    }
    out
}

/// `y_I · y_j` as a sign and sorted index set, or None when `j ∈ I`.
fn mul_y(i: &[usize], j: usize) -> Option<(bool, Vec<usize>)> {
    if i.contains(&j) {
        return None;
    }
    let past = i.iter().filter(|&&a| a > j).count();
    let mut out = i.to_vec();
    out.push(j);
    out.sort_unstable();
    Some((past % 2 == 1, out))
}

type Key = (Vec<usize>, usize);

impl SemifreeModule {
    fn basis(&self, k: i32) -> Vec<Key> {
        let mut out = Vec::new();
        for (e, (_, de)) in self.gens.iter().enumerate() {
            let size = de - k;
            if size < 0 {
                continue;
            }
            for s in subsets(self.ys.len(), size as usize) {
                out.push((s, e));
            }
        }
        out
    }

    fn label(&self, key: &Key) -> String {
        let (i, e) = key;
        let mut parts: Vec<String> = i.iter().map(|&j| self.ys[j].clone()).collect();
        parts.push(self.gens[*e].0.clone());
        parts.join("*")
    }

    fn index(&self, k: i32) -> (Vec<Key>, HashMap<Key, usize>) {
        let b = self.basis(k);
        let idx = b.iter().cloned().enumerate().map(|(n, key)| (key, n)).collect();
        (b, idx)
    }

    /// `y_I · Σ c y_J e'` accumulated into column `col` of `m`, with an extra overall sign.
    fn push_image(&self, m: &mut Matrix, idx: &HashMap<Key, usize>, col: usize, i: &[usize], img: &Image, negate: bool) {
        for (c, j, e2) in img {
            let (neg, set) = match j {
                None => (false, i.to_vec()),
                Some(j) => match mul_y(i, *j) {
                    Some(x) => x,
                    None => continue,
                },
            };
            let row = idx[&(set, *e2)];
            let v = c.scale(&Coeff::one().signed(neg ^ negate));
            m.add_at(row, col, &v);
        }
    }

    /// `d(y_I e) = d(y_I) e + (−1)^{|I|} y_I d(e)` on the window.
    pub fn complex(&self, lo: i32, hi: i32) -> Result<FreeModuleComplex> {
        let mut bases = Vec::new();
        let mut indexed = BTreeMap::new();
        for k in lo..=hi {
            let (b, idx) = self.index(k);
            bases.push(b.iter().map(|key| self.label(key)).collect());
            indexed.insert(k, (b, idx));
        }
        let mut diffs = Vec::new();
        for k in lo..hi {
            let (src, _) = &indexed[&k];
            let (tgt, tidx) = &indexed[&(k + 1)];
            let mut m = Matrix::zeros(&self.ring, tgt.len(), src.len());
            for (col, (i, e)) in src.iter().enumerate() {
                for t in 0..i.len() {
                    let mut rest = i.clone();
                    let j = rest.remove(t);
                    let row = tidx[&(rest, *e)];
                    m.add_at(row, col, &self.h[j].scale(&Coeff::one().signed(t % 2 == 1)));
                }
                self.push_image(&mut m, tidx, col, i, &self.d[*e], i.len() % 2 == 1);
            }
            diffs.push(m);
        }
        FreeModuleComplex::new(&self.ring, lo, bases, diffs)
    }

    /// The A(1)-linear degree-0 map `y_I e ↦ y_I f(e)` into `target`.
    pub fn linear_map(
        &self,
        source: &Arc<FreeModuleComplex>,
        target_module: &SemifreeModule,
        target: &Arc<FreeModuleComplex>,
        images: &[Image],
    ) -> ChainMap {
        let (lo, hi) = source.window();
        let (tlo, thi) = target.window();
        let mut maps = BTreeMap::new();
        for k in lo.min(tlo)..=hi.max(thi) {
            let src = if k >= lo && k <= hi { self.basis(k) } else { Vec::new() };
            let (tb, tidx) = if k >= tlo && k <= thi { target_module.index(k) } else { (Vec::new(), HashMap::new()) };
            let mut m = Matrix::zeros(&self.ring, tb.len(), src.len());
            for (col, (i, e)) in src.iter().enumerate() {
                if !tb.is_empty() {
                    target_module.push_image(&mut m, &tidx, col, i, &images[*e], false);
                }
            }
            maps.insert(k, m);
        }
        ChainMap { source: source.clone(), target: target.clone(), maps }
    }
}
