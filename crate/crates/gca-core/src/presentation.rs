//! Semifree cdga presentations and morphisms between them.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{Algebra, Elem, Gid, Generator};
use crate::derivation::Derivation;
use crate::error::{GcaError, Result};
use crate::report::Report;

#[derive(Clone, Debug)]
pub struct Presentation {
    alg: Arc<Algebra>,
    diff: Vec<Elem>,
    d: Derivation,
}

fn check_image_degree(alg: &Algebra, g: &Generator, img: &Elem, shift: i32, wshift: u32) -> Result<()> {
    if img.is_zero() {
        return Ok(());
    }
    let found = match (img.degree(), img.form_degree()) {
        (Ok(Some(d)), Ok(Some(w))) if d == g.degree + shift && w == g.weight as u32 + wshift => return Ok(()),
        (Ok(Some(d)), _) => d.to_string(),
        _ => "mixed".to_string(),
    };
    let _ = alg;
    Err(GcaError::DegreeMismatch { name: g.name.clone(), expected: g.degree + shift, found })
}

impl Presentation {
    /// `diff` is indexed by generator id; missing entries are zero.
    pub fn new(alg: Arc<Algebra>, diff: Vec<Elem>) -> Result<Presentation> {
        if diff.len() != alg.len() {
            return Err(GcaError::Presentation(format!(
                "{} differentials for {} generators",
                diff.len(),
                alg.len()
            )));
        }
        for (i, img) in diff.iter().enumerate() {
            if !img.algebra().same_as(&alg) {
                return Err(GcaError::MixedAlgebras);
            }
            check_image_degree(&alg, alg.generator(i as Gid), img, 1, 0)?;
            if alg.generator(i as Gid).degree == 0 && !img.is_zero() {
                return Err(GcaError::Presentation(format!("base generator {} has nonzero differential", alg.generator(i as Gid).name)));
            }
        }
        let d = Derivation::new(&alg, &alg, diff.iter().cloned().enumerate().map(|(i, e)| (i as Gid, e)), 1)?;
        Ok(Presentation { alg, diff, d })
    }

    pub fn from_names<S: AsRef<str>>(alg: Arc<Algebra>, diff: impl IntoIterator<Item = (S, Elem)>) -> Result<Presentation> {
        let mut v = vec![Elem::zero(&alg); alg.len()];
        for (n, e) in diff {
            v[alg.id(n.as_ref())? as usize] = e;
        }
        Self::new(alg, v)
    }

    /// Build from poly-strings in one go.
    pub fn parse<S: AsRef<str>>(alg: Arc<Algebra>, diff: &[(&str, S)]) -> Result<Presentation> {
        let mut v = Vec::new();
        for (n, s) in diff {
            v.push((n.to_string(), crate::parse::parse_elem(&alg, s.as_ref())?));
        }
        Self::from_names(alg, v)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn differential_of(&self, g: Gid) -> &Elem {
        &self.diff[g as usize]
    }

    pub fn diff_by_name(&self, name: &str) -> Result<&Elem> {
        Ok(&self.diff[self.alg.id(name)? as usize])
    }

    pub fn differentials(&self) -> &[Elem] {
        &self.diff
    }

    pub fn derivation(&self) -> &Derivation {
        &self.d
    }

    pub fn d(&self, e: &Elem) -> Elem {
        self.d.apply(e).expect("element of a different algebra")
    }

    pub fn gen(&self, name: &str) -> Result<Elem> {
        Elem::gen(&self.alg, name)
    }

    pub fn check_d_squared(&self) -> Report {
        let mut r = Report::new();
        for (i, g) in self.alg.generators().iter().enumerate() {
            let dd = self.d(&self.diff[i]);
            r.zero(format!("d^2 {}", g.name), &dd);
        }
        r
    }

    /// Same algebra, differentials given by name (others kept).
    pub fn with_differentials(&self, changes: impl IntoIterator<Item = (String, Elem)>) -> Result<Presentation> {
        let mut v = self.diff.clone();
        for (n, e) in changes {
            v[self.alg.id(&n)? as usize] = e;
        }
        Self::new(self.alg.clone(), v)
    }

    /// Differentials keyed by generator name, rendered as poly-strings.
    pub fn diff_table(&self) -> BTreeMap<String, String> {
        self.alg
            .generators()
            .iter()
            .zip(&self.diff)
            .map(|(g, e)| (g.name.clone(), e.to_string()))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Morphism {
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    images: Vec<Elem>,
}

impl Morphism {
    /// Images keyed by source generator name; unlisted generators go to the same-named
    /// target generator.
    pub fn new(
        source: &Arc<Presentation>,
        target: &Arc<Presentation>,
        images: impl IntoIterator<Item = (String, Elem)>,
    ) -> Result<Morphism> {
        let salg = source.algebra();
        let talg = target.algebra();
        let mut table: Vec<Option<Elem>> = vec![None; salg.len()];
        for (n, e) in images {
            if !e.algebra().same_as(talg) {
                return Err(GcaError::MixedAlgebras);
            }
            table[salg.id(&n)? as usize] = Some(e);
        }
        let mut out = Vec::with_capacity(salg.len());
        for (i, slot) in table.into_iter().enumerate() {
            let g = salg.generator(i as Gid);
            let img = match slot {
                Some(e) => e,
                None => Elem::gen(talg, &g.name)
                    .map_err(|_| GcaError::Morphism(format!("no image for `{}` and no generator of that name in the target", g.name)))?,
            };
            check_image_degree(talg, g, &img, 0, 0)?;
            out.push(img);
        }
        Ok(Morphism { source: source.clone(), target: target.clone(), images: out })
    }

    pub fn identity(p: &Arc<Presentation>) -> Morphism {
        Morphism::new(p, p, Vec::new()).expect("identity is well defined")
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn image_of(&self, name: &str) -> Result<&Elem> {
        Ok(&self.images[self.source.algebra().id(name)? as usize])
    }

    pub fn apply(&self, e: &Elem) -> Result<Elem> {
        if !e.algebra().same_as(self.source.algebra()) {
            return Err(GcaError::MixedAlgebras);
        }
        e.substitute(self.target.algebra(), &self.images)
    }

    pub fn check(&self) -> Report {
        let mut r = Report::new();
        for (i, g) in self.source.algebra().generators().iter().enumerate() {
            let lhs = self.apply(self.source.differential_of(i as Gid));
            let rhs = self.target.d(&self.images[i]);
            match lhs {
                Ok(l) => r.zero(format!("commutes {}", g.name), &(&l - &rhs)),
                Err(e) => r.fail(format!("commutes {}", g.name), e.to_string(), 0),
            }
        }
        r
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Result<Morphism> {
        if !Arc::ptr_eq(&self.target, &other.source) && !self.target.algebra().same_as(other.source.algebra()) {
            return Err(GcaError::Morphism("composable morphisms need a shared middle presentation".into()));
        }
        let imgs = self
            .images
            .iter()
            .zip(self.source.algebra().generators())
            .map(|(e, g)| Ok((g.name.clone(), other.apply(&e.embed(other.source.algebra())?)?)))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(&self.source, &other.target, imgs)
    }

    /// Whether the generator images agree exactly.
    pub fn same_images(&self, other: &Morphism) -> bool {
        self.images.len() == other.images.len()
            && self.images.iter().zip(&other.images).all(|(a, b)| a.algebra().same_as(b.algebra()) && a == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;

    fn even_darboux(f: &str, g: &str) -> Presentation {
        let alg = Algebra::new(
            Field::Rationals,
            vec![Generator::new("x", 0), Generator::new("y", -1), Generator::new("z", -1), Generator::new("w", -2)],
        )
        .unwrap();
        let fe = crate::parse::parse_elem(&alg, f).unwrap();
        let ge = crate::parse::parse_elem(&alg, g).unwrap();
        let x = alg.id("x").unwrap();
        let dw = &(&crate::partial_derivative(&fe, x) * &Elem::gen(&alg, "y").unwrap())
            + &(&crate::partial_derivative(&ge, x) * &Elem::gen(&alg, "z").unwrap());
        Presentation::from_names(alg, [("y", ge), ("z", fe), ("w", dw)]).unwrap()
    }

    #[test]
    fn d_squared_detects_cme_failure() {
        assert!(even_darboux("x", "0").check_d_squared().passed());
        let bad = even_darboux("x", "x").check_d_squared();
        assert!(!bad.passed());
        let e = bad.get("d^2 w").unwrap();
        assert_eq!(e.residual.as_deref(), Some("2*x"));
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let p = Arc::new(even_darboux("x", "0"));
        let x = p.gen("x").unwrap();
        assert!(matches!(Morphism::new(&p, &p, [("y".to_string(), x)]), Err(GcaError::DegreeMismatch { .. })));
        assert!(Morphism::identity(&p).check().passed());
    }
}
