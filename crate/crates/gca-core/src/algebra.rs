//! Free graded-commutative algebras and their elements in Koszul normal form.
//!
//! A monomial stores its generators in the algebra's canonical order; moving odd
//! generators into that order accumulates the Koszul sign, and a repeated odd
//! generator annihilates the monomial.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::coeff::{Coeff, Field};
use crate::error::{GcaError, Result};

pub type Gid = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
    /// Form degree; nonzero only for the `ddr(..)` generators of a de Rham algebra.
    #[serde(default, skip_serializing_if = "is_zero_u8")]
    pub weight: u8,
}

fn is_zero_u8(w: &u8) -> bool {
    *w == 0
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Generator { name: name.into(), degree, weight: 0 }
    }

    pub fn form(name: impl Into<String>, degree: i32) -> Self {
        Generator { name: name.into(), degree, weight: 1 }
    }

    pub fn total_degree(&self) -> i32 {
        self.degree + self.weight as i32
    }

    pub fn parity(&self) -> u8 {
        self.total_degree().rem_euclid(2) as u8
    }

    pub fn is_base(&self) -> bool {
        self.degree == 0 && self.weight == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono(pub(crate) SmallVec<[(Gid, u32); 4]>);

impl Mono {
    pub fn one() -> Self {
        Mono(SmallVec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Gid, u32)] {
        &self.0
    }

    pub fn exponent(&self, g: Gid) -> u32 {
        self.0.iter().find(|(h, _)| *h == g).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn contains(&self, g: Gid) -> bool {
        self.exponent(g) > 0
    }

    pub fn total_exponent(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }
}

pub type Terms = BTreeMap<Mono, Coeff>;

fn add_term(terms: &mut Terms, m: Mono, c: Coeff) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            o.get_mut().add_assign_ref(&c);
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// The generating data of a free graded-commutative algebra, possibly localized
/// at finitely many base polynomials.
#[derive(Debug, PartialEq)]
pub struct Algebra {
    field: Field,
    gens: Vec<Generator>,
    parity: Vec<u8>,
    index: HashMap<String, Gid>,
    units: Vec<Terms>,
}

fn valid_name(name: &str) -> bool {
    let ident = |s: &str| {
        let mut ch = s.chars();
        matches!(ch.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && ch.all(|c| c.is_ascii_alphanumeric() || c == '_')
    };
    if let Some(inner) = name.strip_prefix("ddr(").and_then(|r| r.strip_suffix(')')) {
        return ident(inner);
    }
    ident(name) && name != "ddr"
}

fn canonical_key(g: &Generator) -> (u8, i32, &str) {
    (g.weight, -g.degree, g.name.as_str())
}

impl Algebra {
    /// Generators are stored sorted by (form degree, descending degree, name), which fixes
    /// the canonical order of odd factors.
    pub fn new(field: Field, gens: Vec<Generator>) -> Result<Arc<Algebra>> {
        Self::build(field, gens, Vec::new())
    }

    /// Like [`Algebra::new`], with the given degree-0 polynomials (as strings) declared invertible.
    pub fn with_units(field: Field, gens: Vec<Generator>, units: &[String]) -> Result<Arc<Algebra>> {
        let plain = Self::build(field, gens.clone(), Vec::new())?;
        let mut parsed = Vec::new();
        for u in units {
            let e = crate::parse::parse_elem(&plain, u)?;
            parsed.push(e.terms);
        }
        Self::build(field, gens, parsed)
    }

    pub(crate) fn build(field: Field, mut gens: Vec<Generator>, units: Vec<Terms>) -> Result<Arc<Algebra>> {
        for g in &gens {
            if !valid_name(&g.name) || (field == Field::Gaussian && g.name == "i") {
                return Err(GcaError::InvalidName(g.name.clone()));
            }
            if g.degree > 0 {
                return Err(GcaError::PositiveDegree { name: g.name.clone(), degree: g.degree });
            }
        }
        gens.sort_by(|a, b| canonical_key(a).cmp(&canonical_key(b)));
        let mut index = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if index.insert(g.name.clone(), i as Gid).is_some() {
                return Err(GcaError::DuplicateGenerator(g.name.clone()));
            }
        }
        let parity = gens.iter().map(Generator::parity).collect();
        let alg = Algebra { field, gens, parity, index, units: Vec::new() };
        for u in &units {
            let base_only = u.keys().all(|m| m.0.iter().all(|(g, _)| alg.gens[*g as usize].is_base()));
            let constant = u.keys().all(Mono::is_one);
            if u.is_empty() || constant || !base_only {
                return Err(GcaError::BadUnit(alg.terms_to_string(u)));
            }
        }
        Ok(Arc::new(Algebra { units, ..alg }))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, g: Gid) -> &Generator {
        &self.gens[g as usize]
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn id(&self, name: &str) -> Result<Gid> {
        self.index.get(name).copied().ok_or_else(|| GcaError::UnknownGenerator(name.to_string()))
    }

    pub fn has(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn parity(&self, g: Gid) -> u8 {
        self.parity[g as usize]
    }

    pub fn units(&self) -> &[Terms] {
        &self.units
    }

    pub fn unit_strings(&self) -> Vec<String> {
        self.units.iter().map(|u| self.terms_to_string(u)).collect()
    }

    /// Same generators and units; used to decide whether two elements can be combined.
    pub fn same_as(&self, other: &Algebra) -> bool {
        std::ptr::eq(self, other) || self == other
    }

    pub fn mono_degree(&self, m: &Mono) -> (i32, u32) {
        let mut deg = 0;
        let mut w = 0;
        for (g, e) in m.0.iter() {
            let gen = &self.gens[*g as usize];
            deg += gen.degree * *e as i32;
            w += gen.weight as u32 * e;
        }
        (deg, w)
    }

    pub fn mono_parity(&self, m: &Mono) -> u8 {
        let mut p = 0u32;
        for (g, e) in m.0.iter() {
            p += self.parity[*g as usize] as u32 * e;
        }
        (p % 2) as u8
    }

    /// Product of two canonical monomials; `None` when an odd generator repeats.
    /// The boolean is true when the Koszul sign is negative.
    pub fn mono_mul(&self, a: &Mono, b: &Mono) -> Option<(bool, Mono)> {
        if a.is_one() {
            return Some((false, b.clone()));
        }
        if b.is_one() {
            return Some((false, a.clone()));
        }
        let odd = |g: Gid| self.parity[g as usize] == 1;
        let mut out: SmallVec<[(Gid, u32); 4]> = SmallVec::with_capacity(a.0.len() + b.0.len());
        let mut odd_rest_a = a.0.iter().filter(|(g, _)| odd(*g)).count();
        let (mut i, mut j) = (0, 0);
        let mut neg = false;
        while i < a.0.len() && j < b.0.len() {
            let (ga, ea) = a.0[i];
            let (gb, eb) = b.0[j];
            match ga.cmp(&gb) {
                Ordering::Less => {
                    if odd(ga) {
                        odd_rest_a -= 1;
                    }
                    out.push((ga, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    if odd(gb) && odd_rest_a % 2 == 1 {
                        neg = !neg;
                    }
                    out.push((gb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    if odd(ga) {
                        return None;
                    }
                    out.push((ga, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a.0[i..]);
        out.extend_from_slice(&b.0[j..]);
        Some((neg, Mono(out)))
    }

    /// Normal form of an ordered product of generator powers.
    pub fn mono_from_factors(&self, factors: &[(Gid, u32)]) -> Option<(bool, Mono)> {
        let mut neg = false;
        let mut acc = Mono::one();
        for &(g, e) in factors {
            if e == 0 {
                continue;
            }
            if e > 1 && self.parity[g as usize] == 1 {
                return None;
            }
            let (s, m) = self.mono_mul(&acc, &Mono(SmallVec::from_slice(&[(g, e)])))?;
            neg ^= s;
            acc = m;
        }
        Some((neg, acc))
    }

    pub fn mono_to_string(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (g, e) in m.0.iter() {
            let name = &self.gens[*g as usize].name;
            if *e == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        parts.join("*")
    }

    pub fn terms_to_string(&self, terms: &Terms) -> String {
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in terms.iter().enumerate() {
            let (neg, mag) = if c.is_real() && c.re() < &num_rational::BigRational::from_integer(0.into()) {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let cs = mag.to_poly_string();
            if m.is_one() {
                out.push_str(&cs);
            } else if mag.is_one() {
                out.push_str(&self.mono_to_string(m));
            } else {
                out.push_str(&cs);
                out.push('*');
                out.push_str(&self.mono_to_string(m));
            }
        }
        out
    }
}

/// Element of a (localized) free graded-commutative algebra.
///
/// Stored as `terms / Π units[k]^den[k]`; `den` is empty when there is no denominator.
#[derive(Clone)]
pub struct Elem {
    alg: Arc<Algebra>,
    pub(crate) terms: Terms,
    pub(crate) den: Vec<u32>,
}

impl Elem {
    pub fn zero(alg: &Arc<Algebra>) -> Elem {
        Elem { alg: alg.clone(), terms: Terms::new(), den: Vec::new() }
    }

    pub fn constant(alg: &Arc<Algebra>, c: Coeff) -> Elem {
        let mut terms = Terms::new();
        add_term(&mut terms, Mono::one(), c);
        Elem { alg: alg.clone(), terms, den: Vec::new() }
    }

    pub fn int(alg: &Arc<Algebra>, n: i64) -> Elem {
        Self::constant(alg, Coeff::from_int(n))
    }

    pub fn one(alg: &Arc<Algebra>) -> Elem {
        Self::int(alg, 1)
    }

    pub fn gen(alg: &Arc<Algebra>, name: &str) -> Result<Elem> {
        let g = alg.id(name)?;
        Ok(Self::from_gid(alg, g))
    }

    pub fn from_gid(alg: &Arc<Algebra>, g: Gid) -> Elem {
        Self::from_mono(alg, Mono(SmallVec::from_slice(&[(g, 1)])), Coeff::one())
    }

    pub fn from_mono(alg: &Arc<Algebra>, m: Mono, c: Coeff) -> Elem {
        let mut terms = Terms::new();
        add_term(&mut terms, m, c);
        Elem { alg: alg.clone(), terms, den: Vec::new() }
    }

    pub fn from_terms(alg: &Arc<Algebra>, terms: Terms) -> Elem {
        let mut e = Elem { alg: alg.clone(), terms, den: Vec::new() };
        e.terms.retain(|_, c| !c.is_zero());
        e
    }

    /// Raw constructor used by normalization: `(coefficient, generator sequence)` pairs.
    pub fn normalize(alg: &Arc<Algebra>, raw: &[(Coeff, Vec<&str>)]) -> Result<Elem> {
        let mut terms = Terms::new();
        for (c, seq) in raw {
            let mut factors = Vec::with_capacity(seq.len());
            for name in seq {
                factors.push((alg.id(name)?, 1));
            }
            if let Some((neg, m)) = alg.mono_from_factors(&factors) {
                add_term(&mut terms, m, c.clone().signed(neg));
            }
        }
        Ok(Elem { alg: alg.clone(), terms, den: Vec::new() })
    }

    pub(crate) fn with_den(alg: &Arc<Algebra>, terms: Terms, den: Vec<u32>) -> Elem {
        let mut e = Elem { alg: alg.clone(), terms, den };
        e.reduce();
        e
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    /// Denominator exponents over the algebra's declared units (empty if none).
    pub fn denominator(&self) -> &[u32] {
        &self.den
    }

    pub fn has_denominator(&self) -> bool {
        self.den.iter().any(|&e| e > 0)
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

    /// The coefficient if this element is a constant.
    pub fn as_constant(&self) -> Option<Coeff> {
        if self.has_denominator() {
            return None;
        }
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Mono) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Internal degree if homogeneous; `Ok(None)` for zero.
    pub fn degree(&self) -> Result<Option<i32>> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = self.alg.mono_degree(m).0;
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Err(GcaError::Inhomogeneous(self.to_string())),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Form degree if homogeneous in it; `Ok(None)` for zero.
    pub fn form_degree(&self) -> Result<Option<u32>> {
        let mut deg = None;
        for m in self.terms.keys() {
            let w = self.alg.mono_degree(m).1;
            match deg {
                None => deg = Some(w),
                Some(w0) if w0 != w => return Err(GcaError::Inhomogeneous(self.to_string())),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Generators actually occurring.
    pub fn support(&self) -> Vec<Gid> {
        let mut s: Vec<Gid> = self.terms.keys().flat_map(|m| m.0.iter().map(|(g, _)| *g)).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn mentions(&self, g: Gid) -> bool {
        self.terms.keys().any(|m| m.contains(g))
    }

    fn check_same(&self, o: &Elem) -> Result<()> {
        if self.alg.same_as(&o.alg) {
            Ok(())
        } else {
            Err(GcaError::MixedAlgebras)
        }
    }

    pub fn scale(&self, c: &Coeff) -> Elem {
        if c.is_zero() {
            return Elem::zero(&self.alg);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        Elem { alg: self.alg.clone(), terms, den: self.den.clone() }
    }

    fn unit_power(&self, k: usize, e: u32) -> Terms {
        let mut acc = Terms::new();
        add_term(&mut acc, Mono::one(), Coeff::one());
        for _ in 0..e {
            acc = mul_terms(&self.alg, &acc, &self.alg.units[k]);
        }
        acc
    }

    pub(crate) fn lifted(&self, target_den: &[u32]) -> Terms {
        let mut t = self.terms.clone();
        for (k, &e) in target_den.iter().enumerate() {
            let have = self.den.get(k).copied().unwrap_or(0);
            if e > have {
                t = mul_terms(&self.alg, &t, &self.unit_power(k, e - have));
            }
        }
        t
    }

    pub fn try_add(&self, o: &Elem) -> Result<Elem> {
        self.check_same(o)?;
        if !self.has_denominator() && !o.has_denominator() {
            let mut terms = self.terms.clone();
            for (m, c) in &o.terms {
                add_term(&mut terms, m.clone(), c.clone());
            }
            return Ok(Elem { alg: self.alg.clone(), terms, den: Vec::new() });
        }
        let n = self.alg.units.len();
        let den: Vec<u32> = (0..n)
            .map(|k| self.den.get(k).copied().unwrap_or(0).max(o.den.get(k).copied().unwrap_or(0)))
            .collect();
        let mut terms = self.lifted(&den);
        for (m, c) in o.lifted(&den) {
            add_term(&mut terms, m, c);
        }
        Ok(Elem::with_den(&self.alg, terms, den))
    }

    pub fn try_mul(&self, o: &Elem) -> Result<Elem> {
        self.check_same(o)?;
        let terms = mul_terms(&self.alg, &self.terms, &o.terms);
        if !self.has_denominator() && !o.has_denominator() {
            return Ok(Elem { alg: self.alg.clone(), terms, den: Vec::new() });
        }
        let n = self.alg.units.len();
        let den = (0..n)
            .map(|k| self.den.get(k).copied().unwrap_or(0) + o.den.get(k).copied().unwrap_or(0))
            .collect();
        Ok(Elem::with_den(&self.alg, terms, den))
    }

    pub fn pow(&self, e: u32) -> Elem {
        let mut acc = Elem::one(&self.alg);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero constant or of a product of declared units.
    pub fn try_inverse(&self) -> Result<Elem> {
        if let Some(c) = self.as_constant() {
            return c
                .inv()
                .map(|ci| Elem::constant(&self.alg, ci))
                .ok_or_else(|| GcaError::NotInvertible("0".into()));
        }
        // Peel off unit factors by exact division until a constant remains.
        let n = self.alg.units.len();
        let mut rest = self.terms.clone();
        let mut exps = vec![0u32; n];
        'outer: loop {
            if rest.keys().all(Mono::is_one) {
                break;
            }
            for k in 0..n {
                if let Some(q) = div_exact(&self.alg, &rest, &self.alg.units[k]) {
                    rest = q;
                    exps[k] += 1;
                    continue 'outer;
                }
            }
            return Err(GcaError::NotInvertible(self.to_string()));
        }
        let c = rest.get(&Mono::one()).cloned().unwrap_or_else(Coeff::zero);
        let ci = c.inv().ok_or_else(|| GcaError::NotInvertible(self.to_string()))?;
        // (numerator of self)^-1 = den(self) / (c * Π u^exps)
        let mut num = Terms::new();
        add_term(&mut num, Mono::one(), ci);
        let own = Elem { alg: self.alg.clone(), terms: num, den: Vec::new() };
        let mut numer = own.terms.clone();
        for (k, &e) in self.den.iter().enumerate() {
            numer = mul_terms(&self.alg, &numer, &self.unit_power(k, e));
        }
        Ok(Elem::with_den(&self.alg, numer, exps))
    }

    pub fn try_div(&self, o: &Elem) -> Result<Elem> {
        self.try_mul(&o.try_inverse()?)
    }

    /// Cancel unit factors shared between numerator and denominator.
    fn reduce(&mut self) {
        if self.terms.is_empty() {
            self.den.clear();
            return;
        }
        for k in 0..self.den.len() {
            while self.den[k] > 0 {
                match div_exact(&self.alg, &self.terms, &self.alg.units[k]) {
                    Some(q) => {
                        self.terms = q;
                        self.den[k] -= 1;
                    }
                    None => break,
                }
            }
        }
        if self.den.iter().all(|&e| e == 0) {
            self.den.clear();
        }
    }

    /// Re-express in another algebra containing (by name) every generator that occurs, and the units.
    pub fn embed(&self, target: &Arc<Algebra>) -> Result<Elem> {
        if self.alg.same_as(target) {
            return Ok(Elem { alg: target.clone(), ..self.clone() });
        }
        // only generators that occur need a counterpart in the target
        let map: Vec<Option<Gid>> = self.alg.gens.iter().map(|g| target.id(&g.name).ok()).collect();
        let mut terms = Terms::new();
        for (m, c) in &self.terms {
            let factors = m
                .0
                .iter()
                .map(|(g, e)| {
                    map[*g as usize]
                        .map(|t| (t, *e))
                        .ok_or_else(|| GcaError::UnknownGenerator(self.alg.gens[*g as usize].name.clone()))
                })
                .collect::<Result<Vec<(Gid, u32)>>>()?;
            if let Some((neg, mm)) = target.mono_from_factors(&factors) {
                add_term(&mut terms, mm, c.clone().signed(neg));
            }
        }
        let mut out = Elem::from_terms(target, terms);
        if self.has_denominator() {
            for (k, &e) in self.den.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let u = Elem::from_terms(&self.alg, self.alg.units[k].clone()).embed(target)?;
                out = out.try_mul(&u.pow(e).try_inverse()?)?;
            }
        }
        Ok(out)
    }

    /// Algebra map defined by generator images (indexed by this algebra's generator ids).
    /// Images must lie in one common algebra `target`.
    pub fn substitute(&self, target: &Arc<Algebra>, images: &[Elem]) -> Result<Elem> {
        let mut acc = Elem::zero(target);
        let mut cache: HashMap<(Gid, u32), Elem> = HashMap::new();
        for (m, c) in &self.terms {
            let mut t = Elem::constant(target, c.clone());
            for &(g, e) in m.0.iter() {
                let p = cache.entry((g, e)).or_insert_with(|| images[g as usize].pow(e)).clone();
                t = t.try_mul(&p)?;
                if t.is_zero() {
                    break;
                }
            }
            acc = acc.try_add(&t)?;
        }
        if self.has_denominator() {
            for (k, &e) in self.den.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let u = Elem::from_terms(&self.alg, self.alg.units[k].clone()).substitute(target, images)?;
                acc = acc.try_mul(&u.pow(e).try_inverse()?)?;
            }
        }
        Ok(acc)
    }

    /// Numerator-only view (the element times its denominator).
    pub fn numerator(&self) -> Elem {
        Elem { alg: self.alg.clone(), terms: self.terms.clone(), den: Vec::new() }
    }

    /// Keep only the terms accepted by the predicate (denominator unchanged).
    pub fn filter_terms(&self, mut keep: impl FnMut(&Mono) -> bool) -> Elem {
        let terms = self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect();
        Elem::with_den(&self.alg, terms, self.den.clone())
    }

    pub fn in_field(&self, f: Field) -> bool {
        self.terms.values().all(|c| f.contains(c))
    }
}

pub(crate) fn mul_terms(alg: &Algebra, a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some((neg, m)) = alg.mono_mul(ma, mb) {
                add_term(&mut out, m, (ca * cb).signed(neg));
            }
        }
    }
    out
}

/// Lexicographic comparison of exponent vectors given sparsely.
fn lex_cmp(a: &[(Gid, u32)], b: &[(Gid, u32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(ga, ea)), Some(&(gb, eb))) => {
                if ga < gb {
                    return Ordering::Greater;
                }
                if gb < ga {
                    return Ordering::Less;
                }
                if ea != eb {
                    return ea.cmp(&eb);
                }
                i += 1;
                j += 1;
            }
        }
    }
}

type Sparse = SmallVec<[(Gid, u32); 4]>;

fn divides(a: &[(Gid, u32)], b: &[(Gid, u32)]) -> Option<Sparse> {
    // b / a if a | b
    let mut out = Sparse::new();
    let mut i = 0;
    for &(g, e) in b {
        let need = if i < a.len() && a[i].0 == g {
            i += 1;
            a[i - 1].1
        } else {
            0
        };
        if need > e {
            return None;
        }
        if e > need {
            out.push((g, e - need));
        }
    }
    if i < a.len() {
        return None;
    }
    Some(out)
}

fn sparse_mul(a: &[(Gid, u32)], b: &[(Gid, u32)]) -> Sparse {
    let mut out = Sparse::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(ga, ea)), Some(&(gb, eb))) => match ga.cmp(&gb) {
                Ordering::Less => {
                    out.push((ga, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((gb, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((ga, ea + eb));
                    i += 1;
                    j += 1;
                }
            },
            (Some(&x), None) => {
                out.push(x);
                i += 1;
            }
            (None, Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (None, None) => break,
        }
    }
    out
}

/// Exact division by a base polynomial `u` (which is even and central); `None` if not divisible.
pub(crate) fn div_exact(alg: &Algebra, num: &Terms, u: &Terms) -> Option<Terms> {
    let split = |m: &Mono| {
        let k = m.0.iter().take_while(|(g, _)| alg.gens[*g as usize].is_base()).count();
        (Sparse::from_slice(&m.0[..k]), Mono(SmallVec::from_slice(&m.0[k..])))
    };
    let ulist: Vec<(Sparse, Coeff)> = u.iter().map(|(m, c)| (split(m).0, c.clone())).collect();
    let (ulead, uc) = ulist.iter().max_by(|a, b| lex_cmp(&a.0, &b.0))?.clone();
    let uc_inv = uc.inv()?;
    let mut groups: BTreeMap<Mono, Vec<(Sparse, Coeff)>> = BTreeMap::new();
    for (m, c) in num {
        let (b, rest) = split(m);
        groups.entry(rest).or_default().push((b, c.clone()));
    }
    let mut out = Terms::new();
    for (rest, mut poly) in groups {
        while !poly.is_empty() {
            let (idx, _) = poly.iter().enumerate().max_by(|a, b| lex_cmp(&(a.1).0, &(b.1).0))?;
            let (lead, lc) = poly[idx].clone();
            let qb = divides(&ulead, &lead)?;
            let qc = &lc * &uc_inv;
            for (ub, ucoef) in &ulist {
                let prod = sparse_mul(&qb, ub);
                let delta = -(&qc * ucoef);
                if let Some(pos) = poly.iter().position(|(b, _)| *b == prod) {
                    poly[pos].1.add_assign_ref(&delta);
                    if poly[pos].1.is_zero() {
                        poly.swap_remove(pos);
                    }
                } else {
                    poly.push((prod, delta));
                }
            }
            let mut full = qb.clone();
            full.extend_from_slice(&rest.0);
            add_term(&mut out, Mono(full), qc);
        }
    }
    Some(out)
}

impl PartialEq for Elem {
    fn eq(&self, o: &Elem) -> bool {
        if !self.alg.same_as(&o.alg) {
            return false;
        }
        if !self.has_denominator() && !o.has_denominator() {
            return self.terms == o.terms;
        }
        self.try_sub(o).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl Elem {
    pub fn try_sub(&self, o: &Elem) -> Result<Elem> {
        self.try_add(&-o)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.alg.terms_to_string(&self.terms);
        if !self.has_denominator() {
            return f.write_str(&num);
        }
        let mut den = Vec::new();
        for (k, &e) in self.den.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let u = format!("({})", self.alg.terms_to_string(&self.alg.units[k]));
            den.push(if e == 1 { u } else { format!("{u}^{e}") });
        }
        if den.len() == 1 && !den[0].ends_with(|c: char| c.is_ascii_digit()) {
            write!(f, "({}) / {}", num, den[0])
        } else {
            write!(f, "({}) / ({})", num, den.join("*"))
        }
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem({self})")
    }
}

impl std::ops::Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Elem { alg: self.alg.clone(), terms, den: self.den.clone() }
    }
}

impl std::ops::Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&Elem> for &Elem {
            type Output = Elem;
            fn $m(self, o: &Elem) -> Elem {
                self.$f(o).expect("operands from different algebras")
            }
        }
        impl std::ops::$tr<Elem> for Elem {
            type Output = Elem;
            fn $m(self, o: Elem) -> Elem {
                self.$f(&o).expect("operands from different algebras")
            }
        }
        impl std::ops::$tr<&Elem> for Elem {
            type Output = Elem;
            fn $m(self, o: &Elem) -> Elem {
                self.$f(o).expect("operands from different algebras")
            }
        }
        impl std::ops::$tr<Elem> for &Elem {
            type Output = Elem;
            fn $m(self, o: Elem) -> Elem {
                self.$f(&o).expect("operands from different algebras")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::iter::Sum for Elem {
    fn sum<I: Iterator<Item = Elem>>(mut iter: I) -> Elem {
        let first = iter.next().expect("sum of an empty iterator needs an algebra; use Elem::zero");
        iter.fold(first, |a, b| a + b)
    }
}

/// Sum that tolerates an empty iterator.
pub fn sum_in(alg: &Arc<Algebra>, items: impl IntoIterator<Item = Elem>) -> Elem {
    items.into_iter().fold(Elem::zero(alg), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> Arc<Algebra> {
        Algebra::new(
            Field::Rationals,
            vec![
                Generator::new("x", 0),
                Generator::new("y", -1),
                Generator::new("z", -1),
                Generator::new("w", -2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn koszul_normal_form() {
        let a = alg();
        let zy = Elem::normalize(&a, &[(Coeff::one(), vec!["z", "y"])]).unwrap();
        let y = Elem::gen(&a, "y").unwrap();
        let z = Elem::gen(&a, "z").unwrap();
        assert_eq!(zy, -(&y * &z));
        assert!(Elem::normalize(&a, &[(Coeff::one(), vec!["y", "y"])]).unwrap().is_zero());
        let xy = Elem::normalize(&a, &[(Coeff::one(), vec!["x", "y"])]).unwrap();
        assert_eq!(xy.to_string(), "x*y");
    }

    #[test]
    fn expand_by_hand() {
        let a = alg();
        let y = Elem::gen(&a, "y").unwrap();
        let z = Elem::gen(&a, "z").unwrap();
        let p = (&y + &z) * (&y - &z);
        assert_eq!(p, (&y * &z).scale(&Coeff::from_int(-2)));
        let w = Elem::gen(&a, "w").unwrap();
        assert_eq!((&w * &w).to_string(), "w^2");
    }

    #[test]
    fn localized_arithmetic() {
        let gens = vec![Generator::new("x", 0), Generator::new("y", -1)];
        let a = Algebra::with_units(Field::Rationals, gens, &["1+x^2".to_string()]).unwrap();
        let x = Elem::gen(&a, "x").unwrap();
        let u = &Elem::one(&a) + &(&x * &x);
        let inv = u.try_inverse().unwrap();
        assert_eq!(&u * &inv, Elem::one(&a));
        assert_eq!(inv.to_string(), "(1) / (1 + x^2)");
        let q = (&x * &u).try_div(&u).unwrap();
        assert_eq!(q, x);
        assert!(!q.has_denominator());
        assert!(x.try_inverse().is_err());
    }
}
