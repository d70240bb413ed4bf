//! The Koszul bimodule resolution of A = k[x₁..x_n] over A ⊗ A = k[u, v], with u_i = x_i ⊗ 1 and
//! v_i = 1 ⊗ x_i. Inner bimodule structure: `a(b'⊗b'')c = b'c ⊗ ab''`, so left multiplication by
//! x_i is v_i and right multiplication is u_i.

use std::collections::HashMap;
use std::sync::Arc;

use complexes::{FreeModuleComplex, Matrix};
use gca_core::linalg::sparse_rank;
use gca_core::{Algebra, Coeff, Elem, Field, Generator, Gid, Mono, Report};

use crate::cobar::{sort_sign, subsets, ORIENTED_TRIPLES};
use crate::{RepError, Result};

/// Basis of A ⊗ ∧^k V ⊗ A: (label, sign, sorted subset) with basis element `sign · e_S`.
fn basis(n: usize, k: usize) -> Vec<(String, i64, Vec<usize>)> {
    if k == 0 {
        return vec![("1".into(), 1, vec![])];
    }
    if n == 4 && k == 4 {
        return vec![("vol".into(), 1, vec![1, 2, 3, 4])];
    }
    // ∧³V ≅ V* by contraction with the volume form: x_l* ↦ s(l) with x_l ∧ s(l) = vol
    if n == 4 && k == 3 {
        return ORIENTED_TRIPLES
            .iter()
            .enumerate()
            .map(|(l, t)| {
                let mut s = t.to_vec();
                s.sort_unstable();
                (format!("x{}*", l + 1), sort_sign(t), s)
            })
            .collect();
    }
    subsets(n)
        .into_iter()
        .filter(|s| s.len() == k)
        .map(|s| (s.iter().map(|i| format!("x{i}")).collect::<Vec<_>>().join("^"), 1, s))
        .collect()
}

/// `∂e_S = Σ_t (−1)^t (x_{s_t}·e − e·x_{s_t}) e_{S∖s_t}`, in degrees −n..0.
pub fn koszul_bimodule_resolution(n: usize) -> Result<FreeModuleComplex> {
    if !(1..=4).contains(&n) {
        return Err(RepError::Range(format!("n = {n}; the resolution is built for 1 ≤ n ≤ 4")));
    }
    let mut gens: Vec<Generator> = (1..=n).map(|i| Generator::new(format!("u{i}"), 0)).collect();
    gens.extend((1..=n).map(|i| Generator::new(format!("v{i}"), 0)));
    let ring = Algebra::new(Field::Rationals, gens)?;
    let bases: Vec<_> = (0..=n).rev().map(|k| basis(n, k)).collect();
    let mut diffs = Vec::new();
    for k in (1..=n).rev() {
        let (src, tgt) = (basis(n, k), basis(n, k - 1));
        let mut m = Matrix::zeros(&ring, tgt.len(), src.len());
        for (c, (_, sigma, s)) in src.iter().enumerate() {
            for (t, &i) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().copied().filter(|&j| j != i).collect();
                let r = tgt.iter().position(|b| b.2 == rest).expect("faces are basis elements");
                let sign = sigma * tgt[r].1 * if t % 2 == 0 { 1 } else { -1 };
                let e = &Elem::gen(&ring, &format!("v{i}"))? - &Elem::gen(&ring, &format!("u{i}"))?;
                m.add_at(r, c, &e.scale(&Coeff::from_int(sign)));
            }
        }
        diffs.push(m);
    }
    let labels = bases.into_iter().map(|b| b.into_iter().map(|(l, _, _)| l).collect()).collect();
    Ok(FreeModuleComplex::new(&ring, -(n as i32), labels, diffs)?)
}

fn monomials(alg: &Arc<Algebra>, vars: usize, deg: u32) -> Vec<Mono> {
    fn go(alg: &Arc<Algebra>, start: usize, vars: usize, deg: u32, acc: &mut Vec<(Gid, u32)>, out: &mut Vec<Mono>) {
        if deg == 0 {
            out.push(alg.mono_from_factors(acc).expect("even generators").1);
            return;
        }
        for g in start..vars {
            for e in 1..=deg {
                acc.push((g as Gid, e));
                go(alg, g + 1, vars, deg - e, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(alg, 0, vars, deg, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Composites vanish, and in each weight w ≤ bound (polynomial degree plus exterior degree)
/// the homology is A_w in degree 0 and zero elsewhere.
pub fn koszul_check(n: usize, bound: u32) -> Result<Report> {
    let k = koszul_bimodule_resolution(n)?;
    let mut r = k.check();
    let ring = k.ring().clone();
    let vars = ring.len();
    let lo = -(n as i32);
    for w in 0..=bound {
        // dim of K^j in weight w and rank of d^j: K^j → K^{j+1}
        let mut dims = HashMap::new();
        let mut ranks = HashMap::new();
        for j in lo..=0 {
            let ext = (-j) as u32;
            let monos = if ext <= w { monomials(&ring, vars, w - ext) } else { Vec::new() };
            dims.insert(j, monos.len() * k.dim(j));
            if j == 0 {
                continue;
            }
            let d = k.d(j);
            let mut index: HashMap<(Mono, usize), usize> = HashMap::new();
            let mut rows = Vec::new();
            for m in &monos {
                let me = Elem::from_mono(&ring, m.clone(), Coeff::one());
                for c in 0..d.cols() {
                    let mut row = Vec::new();
                    for t in 0..d.rows() {
                        let image = &me * d.get(t, c);
                        for (mono, coeff) in image.terms() {
                            let next = index.len();
                            let i = *index.entry((mono.clone(), t)).or_insert(next);
                            row.push((i, coeff.clone()));
                        }
                    }
                    row.sort_by_key(|(i, _)| *i);
                    rows.push(row);
                }
            }
            ranks.insert(j, sparse_rank(rows));
        }
        for j in lo..=0 {
            let out = ranks.get(&j).copied().unwrap_or(0);
            let inc = ranks.get(&(j - 1)).copied().unwrap_or(0);
            let h = dims[&j] - out - inc;
            let want = if j == 0 { binomial(n as u64 + w as u64 - 1, w as u64) as usize } else { 0 };
            let name = format!("weight {w}: H^{j} = {want}");
            if h == want {
                r.pass(name);
            } else {
                r.fail(name, format!("H^{j} has dimension {h}"), h.abs_diff(want));
            }
        }
    }
    Ok(r)
}
