//! Semifree dg-modules over a cdga: finitely many generators, differential given on generators
//! and extended by `D(c·m) = dc·m + (−1)^{|c|} c·Dm`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use gca_core::{Coeff, Elem, Presentation, Report};

use crate::{RepError, Result};

/// `Σ c_i · g_i`, keyed by generator index.
pub type Vector = BTreeMap<usize, Elem>;

pub fn add_to(v: &mut Vector, i: usize, c: Elem) {
    if c.is_zero() {
        return;
    }
    let sum = match v.remove(&i) {
        Some(old) => &old + &c,
        None => c,
    };
    if !sum.is_zero() {
        v.insert(i, sum);
    }
}

fn parity(c: &Elem) -> Result<bool> {
    Ok(c.degree()?.unwrap_or(0).rem_euclid(2) == 1)
}

#[derive(Clone, Debug)]
pub struct DgModule {
    pub ring: Arc<Presentation>,
    /// (label, degree)
    pub gens: Vec<(String, i32)>,
    pub diff: Vec<Vector>,
    index: HashMap<String, usize>,
}

impl DgModule {
    pub fn new(ring: &Arc<Presentation>, gens: Vec<(String, i32)>, diff: Vec<Vector>) -> Result<DgModule> {
        if diff.len() != gens.len() {
            return Err(RepError::Input(format!("{} differentials for {} generators", diff.len(), gens.len())));
        }
        let mut index = HashMap::new();
        for (i, (l, _)) in gens.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(RepError::Input(format!("module generator `{l}` declared twice")));
            }
        }
        for (i, v) in diff.iter().enumerate() {
            for (&j, c) in v {
                let want = gens[i].1 + 1 - gens[j].1;
                match c.degree()? {
                    Some(k) if k == want => {}
                    found => {
                        return Err(RepError::Input(format!(
                            "D({}) has coefficient {c} of degree {found:?} on {}, expected {want}",
                            gens[i].0, gens[j].0
                        )))
                    }
                }
            }
        }
        Ok(DgModule { ring: ring.clone(), gens, diff, index })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| RepError::Input(format!("no module generator `{label}`")))
    }

    pub fn generator(&self, label: &str) -> Result<Vector> {
        let alg = self.ring.algebra();
        Ok(BTreeMap::from([(self.index(label)?, Elem::one(alg))]))
    }

    /// Number of generators in each degree.
    pub fn ranks(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (_, k) in &self.gens {
            *out.entry(*k).or_insert(0) += 1;
        }
        out
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        let mut out = Vector::new();
        for (&i, c) in v {
            add_to(&mut out, i, self.ring.d(c));
            let sign = if parity(c)? { Coeff::from_int(-1) } else { Coeff::one() };
            for (&j, e) in &self.diff[i] {
                add_to(&mut out, j, (c * e).scale(&sign));
            }
        }
        Ok(out)
    }

    pub fn to_string(&self, v: &Vector) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter().map(|(&i, c)| format!("({c})*{}", self.gens[i].0)).collect::<Vec<_>>().join(" + ")
    }

    /// `D² = 0`, one entry per generator degree.
    pub fn check(&self) -> Report {
        let mut r = Report::new();
        let mut first_failure: BTreeMap<i32, Option<String>> = BTreeMap::new();
        for (i, (label, k)) in self.gens.iter().enumerate() {
            let slot = first_failure.entry(*k).or_insert(None);
            if slot.is_some() {
                continue;
            }
            match self.apply(&self.diff[i]) {
                Ok(dd) if dd.is_empty() => {}
                Ok(dd) => *slot = Some(format!("D^2({label}) = {}", self.to_string(&dd))),
                Err(e) => *slot = Some(format!("D^2({label}): {e}")),
            }
        }
        for (k, fail) in first_failure {
            let name = format!("D^2 = 0 on generators of degree {k}");
            match fail {
                None => r.pass(name),
                Some(res) => r.fail(name, res, 1),
            }
        }
        r
    }

    /// `M[k]`: degrees drop by k, `D(s^k g) = (−1)^k Σ (−1)^{k|c|} c·s^k g'`.
    pub fn shift(&self, k: i32) -> Result<DgModule> {
        let gens = self.gens.iter().map(|(l, d)| (l.clone(), d - k)).collect();
        let mut diff = Vec::new();
        for v in &self.diff {
            let mut w = Vector::new();
            for (&j, c) in v {
                let odd = (k.rem_euclid(2) == 1) ^ (k.rem_euclid(2) == 1 && parity(c)?);
                w.insert(j, if odd { -c } else { c.clone() });
            }
            diff.push(w);
        }
        DgModule::new(&self.ring, gens, diff)
    }
}

/// A degree-0 module map given on generators.
#[derive(Clone, Debug)]
pub struct DgMap {
    pub source: Arc<DgModule>,
    pub target: Arc<DgModule>,
    pub images: Vec<Vector>,
}

impl DgMap {
    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (&i, c) in v {
            for (&j, e) in &self.images[i] {
                add_to(&mut out, j, c * e);
            }
        }
        out
    }

    /// `Γ∘D = D∘Γ` on every generator, one entry per source degree.
    pub fn check(&self) -> Report {
        let mut r = Report::new();
        let mut first_failure: BTreeMap<i32, Option<String>> = BTreeMap::new();
        for (i, (label, k)) in self.source.gens.iter().enumerate() {
            let slot = first_failure.entry(*k).or_insert(None);
            if slot.is_some() {
                continue;
            }
            let lhs = self.apply(&self.source.diff[i]);
            let res = self.target.apply(&self.images[i]).map(|rhs| {
                let mut diff = lhs.clone();
                for (j, c) in rhs {
                    add_to(&mut diff, j, -&c);
                }
                diff
            });
            match res {
                Ok(diff) if diff.is_empty() => {}
                Ok(diff) => *slot = Some(format!("at {label}: {}", self.target.to_string(&diff))),
                Err(e) => *slot = Some(format!("at {label}: {e}")),
            }
        }
        for (k, fail) in first_failure {
            let name = format!("chain map in degree {k}");
            match fail {
                None => r.pass(name),
                Some(res) => r.fail(name, res, 1),
            }
        }
        r
    }

    /// Every generator goes to ± a single generator, bijectively.
    pub fn is_signed_bijection(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for v in &self.images {
            let ok = v.len() == 1
                && v.iter().all(|(&j, c)| {
                    let unit = c.as_constant().is_some_and(|x| x == Coeff::one() || x == Coeff::from_int(-1));
                    let fresh = !hit[j];
                    hit[j] = true;
                    unit && fresh
                });
            if !ok {
                return false;
            }
        }
        hit.iter().all(|&h| h)
    }
}
