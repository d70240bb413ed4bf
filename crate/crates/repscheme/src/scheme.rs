//! Matrixification: each cobar letter becomes a d×d array of commuting (graded) scalar generators.

use std::sync::Arc;

use complexes::Matrix;
use gca_core::{Algebra, Coeff, Elem, Field, Generator, Presentation};

use crate::cobar::CobarDga;
use crate::nc::{Leibniz, NcElem};
use crate::{RepError, Result};

/// `X1`, `C12`, `S234`, `T` from the cobar letter name.
pub fn matrix_name(letter: &str) -> String {
    letter.to_uppercase()
}

/// Scalar generator `M^{ab}` (1-based), e.g. `X1_12`.
pub fn entry_name(matrix: &str, a: usize, b: usize) -> String {
    format!("{matrix}_{}{}", a + 1, b + 1)
}

pub fn trace(m: &Matrix) -> Elem {
    let mut t = Elem::zero(m.ring());
    for i in 0..m.rows() {
        t = &t + m.get(i, i);
    }
    t
}

pub fn transpose(m: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(m.ring(), m.cols(), m.rows());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(j, i, m.get(i, j).clone());
        }
    }
    out
}

/// `MN − (−1)^{pq} NM` for matrices of homogeneous degrees p and q.
pub fn bracket(m: &Matrix, p: i32, n: &Matrix, q: i32) -> Matrix {
    let mn = m.mul(n);
    let nm = n.mul(m);
    if (p * q) % 2 == 0 {
        mn.sub(&nm)
    } else {
        mn.add(&nm)
    }
}

/// The matrix of scalar generators named `matrix`, read in `alg`.
pub fn generator_matrix(alg: &Arc<Algebra>, matrix: &str, d: usize) -> Result<Matrix> {
    let mut m = Matrix::zeros(alg, d, d);
    for a in 0..d {
        for b in 0..d {
            m.set(a, b, Elem::gen(alg, &entry_name(matrix, a, b))?);
        }
    }
    Ok(m)
}

/// Like [`generator_matrix`], but `C42` reads as `−C24` when only the latter exists.
pub fn signed_matrix(alg: &Arc<Algebra>, matrix: &str, d: usize) -> Result<Matrix> {
    if alg.has(&entry_name(matrix, 0, 0)) {
        return generator_matrix(alg, matrix, d);
    }
    let bytes = matrix.as_bytes();
    if bytes.len() == 3 && bytes[0] == b'C' {
        let flipped = format!("C{}{}", bytes[2] as char, bytes[1] as char);
        if alg.has(&entry_name(&flipped, 0, 0)) {
            return Ok(generator_matrix(alg, &flipped, d)?.scale(&Coeff::from_int(-1)));
        }
    }
    Err(RepError::Input(format!("no matrix `{matrix}`")))
}

/// The cdga A_d: entries of the matrices of the cobar letters.
#[derive(Clone, Debug)]
pub struct RepScheme {
    pub n: usize,
    pub d: usize,
    pub presentation: Arc<Presentation>,
    /// matrix names in cobar letter order
    pub matrices: Vec<String>,
    /// the subset `S` behind each matrix, and the sign with `G = σ·e_S`
    pub subsets: Vec<Vec<usize>>,
    pub orientation: Vec<i64>,
}

impl RepScheme {
    pub fn algebra(&self) -> &Arc<Algebra> {
        self.presentation.algebra()
    }

    pub fn matrix(&self, name: &str) -> Result<Matrix> {
        signed_matrix(self.algebra(), name, self.d)
    }

    /// Matrix name and orientation sign of the generator for the subset `s`.
    pub fn for_subset(&self, s: &[usize]) -> Option<(&str, i64)> {
        let i = self.subsets.iter().position(|t| t == s)?;
        Some((&self.matrices[i], self.orientation[i]))
    }

    /// Entrywise differential of a matrix of elements.
    pub fn d_matrix(&self, m: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.algebra(), m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, self.presentation.d(m.get(i, j)));
            }
        }
        out
    }
}

/// Substitute each letter by its generator matrix and multiply out.
fn expand(e: &NcElem, mats: &[Matrix], alg: &Arc<Algebra>, d: usize) -> Matrix {
    let mut out = Matrix::zeros(alg, d, d);
    for (w, c) in e.terms() {
        let mut prod = Matrix::identity(alg, d);
        for &l in w.iter() {
            prod = prod.mul(&mats[l as usize]);
        }
        out = out.add(&prod.scale(c));
    }
    out
}

/// A_d from the cobar dga. Matrix entries compose with the left Leibniz rule, so the cobar
/// has to be built with that convention.
pub fn matrixify(g: &CobarDga, d: usize) -> Result<RepScheme> {
    if d < 1 {
        return Err(RepError::Range("d must be at least 1".into()));
    }
    if d > 9 {
        return Err(RepError::Range(format!("d = {d}; entry names use one digit per index")));
    }
    if g.convention != Leibniz::Left {
        return Err(RepError::Input("matrixify needs the cobar dga built with the left Leibniz rule".into()));
    }
    let letters = g.algebra.letters();
    let matrices: Vec<String> = letters.iter().map(|l| matrix_name(&l.name)).collect();
    let mut gens = Vec::new();
    for (l, m) in letters.iter().zip(&matrices) {
        for a in 0..d {
            for b in 0..d {
                gens.push(Generator::new(entry_name(m, a, b), l.degree));
            }
        }
    }
    let alg = Algebra::new(Field::Rationals, gens)?;
    let mats = matrices.iter().map(|m| generator_matrix(&alg, m, d)).collect::<Result<Vec<_>>>()?;
    let mut diff = Vec::new();
    for (i, m) in matrices.iter().enumerate() {
        let dm = expand(&g.differentials[i], &mats, &alg, d);
        for a in 0..d {
            for b in 0..d {
                diff.push((entry_name(m, a, b), dm.get(a, b).clone()));
            }
        }
    }
    let presentation = Arc::new(Presentation::from_names(alg, diff)?);
    Ok(RepScheme {
        n: g.n,
        d,
        presentation,
        matrices,
        subsets: g.coalgebra.basis.clone(),
        orientation: g.orientation.clone(),
    })
}
