//! Graded derivations given by their values on generators.

use std::sync::Arc;

use crate::algebra::{Algebra, Elem, Gid, Mono, Terms};
use crate::coeff::Coeff;
use crate::error::{GcaError, Result};

/// A derivation `source -> target` of the given parity, where `target` contains every
/// generator of `source` (matched by name). Generators without an image map to zero.
#[derive(Clone, Debug)]
pub struct Derivation {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    images: Vec<Option<Elem>>,
    parity: u8,
    emb: Vec<Gid>,
    // image numerators over the common denominator `den` of all images
    numer: Vec<Option<Terms>>,
    den: Vec<u32>,
}

impl Derivation {
    pub fn new(
        source: &Arc<Algebra>,
        target: &Arc<Algebra>,
        spec: impl IntoIterator<Item = (Gid, Elem)>,
        parity: u8,
    ) -> Result<Derivation> {
        let parity = parity % 2;
        let emb = source
            .generators()
            .iter()
            .map(|g| target.id(&g.name))
            .collect::<Result<Vec<_>>>()?;
        let mut images = vec![None; source.len()];
        for (g, img) in spec {
            if !img.algebra().same_as(target) {
                return Err(GcaError::MixedAlgebras);
            }
            if img.is_zero() {
                continue;
            }
            let gen = source.generator(g);
            let want = (gen.parity() + parity) % 2;
            let mut seen = None;
            for m in img.terms().keys() {
                let (deg, w) = target.mono_degree(m);
                let p = (deg + w as i32).rem_euclid(2) as u8;
                if p != want || seen.is_some_and(|s| s != (deg, w)) {
                    return Err(GcaError::Inhomogeneous(format!("{} -> {}", gen.name, img)));
                }
                seen = Some((deg, w));
            }
            images[g as usize] = Some(img);
        }
        let n = target.units().len();
        let mut den = vec![0u32; n];
        for img in images.iter().flatten() {
            for (k, &e) in img.denominator().iter().enumerate() {
                den[k] = den[k].max(e);
            }
        }
        if den.iter().all(|&e| e == 0) {
            den.clear();
        }
        let numer = images.iter().map(|i| i.as_ref().map(|e| e.lifted(&den))).collect();
        Ok(Derivation { source: source.clone(), target: target.clone(), images, parity, emb, numer, den })
    }

    pub fn from_names(
        source: &Arc<Algebra>,
        target: &Arc<Algebra>,
        spec: impl IntoIterator<Item = (String, Elem)>,
        parity: u8,
    ) -> Result<Derivation> {
        let ids = spec
            .into_iter()
            .map(|(n, e)| Ok((source.id(&n)?, e)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, ids, parity)
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn image(&self, g: Gid) -> Option<&Elem> {
        self.images[g as usize].as_ref()
    }

    fn embed_mono(&self, factors: &[(Gid, u32)]) -> Option<(bool, Mono)> {
        let mapped: Vec<(Gid, u32)> = factors.iter().map(|(g, e)| (self.emb[*g as usize], *e)).collect();
        self.target.mono_from_factors(&mapped)
    }

    fn apply_mono(&self, m: &Mono, c: &Coeff, out: &mut Terms) {
        let f = m.factors();
        let mut prefix_parity = 0u8;
        for t in 0..f.len() {
            let (g, e) = f[t];
            if let Some(dg) = &self.numer[g as usize] {
                let sign_neg = self.parity == 1 && prefix_parity == 1;
                let scale = c.clone().signed(sign_neg);
                let scale = &scale * &Coeff::from_int(e as i64);
                let mut left: Vec<(Gid, u32)> = f[..t].to_vec();
                if e > 1 {
                    left.push((g, e - 1));
                }
                let right = &f[t + 1..];
                // prefix * g^(e-1) * D(g) * suffix; g^(e-1) is either absent or even, so it commutes
                if let (Some((ln, lm)), Some((rn, rm))) = (self.embed_mono(&left), self.embed_mono(right)) {
                    for (dm, dc) in dg {
                        let Some((s1, lm_dm)) = self.target.mono_mul(&lm, dm) else { continue };
                        let Some((s2, full)) = self.target.mono_mul(&lm_dm, &rm) else { continue };
                        let neg = ln ^ rn ^ s1 ^ s2;
                        let coef = (&scale * dc).signed(neg);
                        add(out, full, coef);
                    }
                }
            }
            prefix_parity ^= ((self.source.parity(g) as u32 * e) % 2) as u8;
        }
    }

    fn apply_terms(&self, terms: &Terms) -> Elem {
        let mut out = Terms::new();
        for (m, c) in terms {
            self.apply_mono(m, c, &mut out);
        }
        if self.den.is_empty() {
            Elem::from_terms(&self.target, out)
        } else {
            Elem::with_den(&self.target, out, self.den.clone())
        }
    }

    pub fn apply(&self, e: &Elem) -> Result<Elem> {
        if !e.algebra().same_as(&self.source) {
            return Err(GcaError::MixedAlgebras);
        }
        let dn = self.apply_terms(e.terms());
        if !e.has_denominator() {
            return Ok(dn);
        }
        // D(N/U) = D(N)/U - sum_k e_k N' D(u_k) / (U u_k), N' = N with the parity sign applied
        let n_plain = e.numerator().embed(&self.target)?;
        let n_signed = if self.parity == 1 {
            let terms: Terms = e
                .terms()
                .iter()
                .map(|(m, c)| (m.clone(), c.clone().signed(self.source.mono_parity(m) == 1)))
                .collect();
            Elem::from_terms(e.algebra(), terms).embed(&self.target)?
        } else {
            n_plain
        };
        let mut u_total = Elem::one(&self.target);
        let mut correction = Elem::zero(&self.target);
        for (k, &ek) in e.denominator().iter().enumerate() {
            if ek == 0 {
                continue;
            }
            let uk_src = Elem::from_terms(&self.source, self.source.units()[k].clone());
            let uk = uk_src.embed(&self.target)?;
            u_total = u_total.try_mul(&uk.pow(ek))?;
            let duk = self.apply_terms(uk_src.terms());
            let term = n_signed.try_mul(&duk)?.try_div(&uk)?.scale(&Coeff::from_int(ek as i64));
            correction = correction.try_add(&term)?;
        }
        dn.try_sub(&correction)?.try_div(&u_total)
    }
}

fn add(out: &mut Terms, m: Mono, c: Coeff) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match out.entry(m) {
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

/// Left partial derivative `∂/∂g`: moves `g` to the front, then strips it.
pub fn partial_derivative(e: &Elem, g: Gid) -> Elem {
    let alg = e.algebra();
    let d = Derivation::new(alg, alg, [(g, Elem::one(alg))], alg.parity(g)).expect("constant image is homogeneous");
    d.apply(e).expect("same algebra")
}

pub fn partial_by_name(e: &Elem, name: &str) -> Result<Elem> {
    Ok(partial_derivative(e, e.algebra().id(name)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;
    use crate::coeff::Field;
    use crate::parse::parse_elem;

    #[test]
    fn left_derivative_sign() {
        let a = Algebra::new(Field::Rationals, vec![Generator::new("y1", -1), Generator::new("y2", -1)]).unwrap();
        let e = parse_elem(&a, "y1*y2").unwrap();
        assert_eq!(partial_by_name(&e, "y2").unwrap(), -Elem::gen(&a, "y1").unwrap());
        assert_eq!(partial_by_name(&e, "y1").unwrap(), Elem::gen(&a, "y2").unwrap());
    }

    #[test]
    fn quotient_rule() {
        let gens = vec![Generator::new("x", 0), Generator::new("y", -1)];
        let a = Algebra::with_units(Field::Rationals, gens, &["1+x".to_string()]).unwrap();
        let e = parse_elem(&a, "x^2/(1+x)").unwrap();
        let d = partial_by_name(&e, "x").unwrap();
        assert_eq!(d, parse_elem(&a, "(2*x + x^2)/((1+x)^2)").unwrap());
    }
}
