//! Free graded associative algebras: linear combinations of words in graded letters.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use gca_core::Coeff;
use smallvec::SmallVec;

use crate::{RepError, Result};

pub type Word = SmallVec<[u16; 6]>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub name: String,
    pub degree: i32,
    /// Internal weight, additive over words and preserved by the cobar differential.
    pub weight: u32,
}

#[derive(Debug, PartialEq, Eq)]
pub struct NcAlgebra {
    letters: Vec<Letter>,
    index: HashMap<String, u16>,
}

impl NcAlgebra {
    pub fn new(letters: Vec<Letter>) -> Result<Arc<NcAlgebra>> {
        let mut index = HashMap::new();
        for (i, l) in letters.iter().enumerate() {
            if index.insert(l.name.clone(), i as u16).is_some() {
                return Err(RepError::Input(format!("letter `{}` declared twice", l.name)));
            }
        }
        Ok(Arc::new(NcAlgebra { letters, index }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn id(&self, name: &str) -> Result<u16> {
        self.index.get(name).copied().ok_or_else(|| RepError::Input(format!("unknown letter `{name}`")))
    }

    pub fn word_degree(&self, w: &[u16]) -> i32 {
        w.iter().map(|&l| self.letters[l as usize].degree).sum()
    }

    pub fn word_weight(&self, w: &[u16]) -> u32 {
        w.iter().map(|&l| self.letters[l as usize].weight).sum()
    }

    pub fn word_to_string(&self, w: &[u16]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&l| self.letters[l as usize].name.as_str()).collect::<Vec<_>>().join("*")
    }
}

/// Order of a product in a graded algebra: `Left` means `d(ab) = da·b + (−1)^|a| a·db`,
/// `Right` means `d(ab) = a·db + (−1)^|b| da·b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Leibniz {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcElem {
    alg: Arc<NcAlgebra>,
    terms: BTreeMap<Word, Coeff>,
}

fn push(terms: &mut BTreeMap<Word, Coeff>, w: Word, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match terms.entry(w) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            o.get_mut().add_assign_ref(&c);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl NcElem {
    pub fn zero(alg: &Arc<NcAlgebra>) -> NcElem {
        NcElem { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn one(alg: &Arc<NcAlgebra>) -> NcElem {
        NcElem::word(alg, Word::new(), Coeff::one())
    }

    pub fn word(alg: &Arc<NcAlgebra>, w: Word, c: Coeff) -> NcElem {
        let mut e = NcElem::zero(alg);
        push(&mut e.terms, w, c);
        e
    }

    pub fn letter(alg: &Arc<NcAlgebra>, name: &str) -> Result<NcElem> {
        Ok(NcElem::word(alg, SmallVec::from_slice(&[alg.id(name)?]), Coeff::one()))
    }

    pub fn algebra(&self) -> &Arc<NcAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Word, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Coeff) -> NcElem {
        let mut out = NcElem::zero(&self.alg);
        for (w, v) in &self.terms {
            push(&mut out.terms, w.clone(), v * c);
        }
        out
    }

    /// Degree of a homogeneous element (`None` for 0 or mixed).
    pub fn degree(&self) -> Option<i32> {
        let mut degs = self.terms.keys().map(|w| self.alg.word_degree(w));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// Graded commutator `ab − (−1)^{|a||b|} ba` of homogeneous elements.
    pub fn commutator(&self, o: &NcElem) -> NcElem {
        let (p, q) = (self.degree().unwrap_or(0), o.degree().unwrap_or(0));
        let sign = if (p * q) % 2 == 0 { Coeff::one() } else { Coeff::from_int(-1) };
        &(self * o) - &(o * self).scale(&sign)
    }

    /// Extend letter images to a degree-1 derivation under the given sign convention.
    pub fn derive(&self, images: &[NcElem], rule: Leibniz) -> NcElem {
        let mut out = NcElem::zero(&self.alg);
        for (w, c) in &self.terms {
            for t in 0..w.len() {
                let img = &images[w[t] as usize];
                if img.is_zero() {
                    continue;
                }
                let passed = match rule {
                    Leibniz::Left => self.alg.word_degree(&w[..t]),
                    Leibniz::Right => self.alg.word_degree(&w[t + 1..]),
                };
                let c = c.clone().signed(passed % 2 != 0);
                for (iw, ic) in &img.terms {
                    let mut nw: Word = SmallVec::from_slice(&w[..t]);
                    nw.extend_from_slice(iw);
                    nw.extend_from_slice(&w[t + 1..]);
                    push(&mut out.terms, nw, &c * ic);
                }
            }
        }
        out
    }
}

impl Add for &NcElem {
    type Output = NcElem;
    fn add(self, o: &NcElem) -> NcElem {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            push(&mut out.terms, w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NcElem {
    type Output = NcElem;
    fn sub(self, o: &NcElem) -> NcElem {
        self + &(-o)
    }
}

impl Neg for &NcElem {
    type Output = NcElem;
    fn neg(self) -> NcElem {
        self.scale(&Coeff::from_int(-1))
    }
}

impl Mul for &NcElem {
    type Output = NcElem;
    fn mul(self, o: &NcElem) -> NcElem {
        let mut out = NcElem::zero(&self.alg);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                push(&mut out.terms, w, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for NcElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let word = self.alg.word_to_string(w);
            let neg = c.is_real() && c.to_poly_string().starts_with('-');
            let mag = if neg { -c.clone() } else { c.clone() };
            let body = if mag.is_one() { word } else if w.is_empty() { mag.to_poly_string() } else { format!("{}*{word}", mag.to_poly_string()) };
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}
