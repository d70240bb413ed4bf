use std::collections::BTreeMap;
use std::sync::Arc;

use gca_core::{parse_elem, Algebra, Field, Report};
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::{ComplexError, Result};

/// Free modules `K^lo, …, K^hi` over a degree-0 ring with `d^k: K^k → K^{k+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeModuleComplex {
    ring: Arc<Algebra>,
    lo: i32,
    hi: i32,
    bases: Vec<Vec<String>>,
    diffs: Vec<Matrix>,
}

impl FreeModuleComplex {
    /// `bases[k - lo]` labels degree k; `diffs[k - lo]` is `d^k` for `lo <= k < hi`.
    pub fn new(ring: &Arc<Algebra>, lo: i32, bases: Vec<Vec<String>>, diffs: Vec<Matrix>) -> Result<FreeModuleComplex> {
        if bases.is_empty() {
            return Err(ComplexError::Window("empty window".into()));
        }
        if let Some(g) = ring.generators().iter().find(|g| g.degree != 0) {
            return Err(ComplexError::Window(format!("ring generator {} is not of degree 0", g.name)));
        }
        let hi = lo + bases.len() as i32 - 1;
        if diffs.len() != bases.len() - 1 {
            return Err(ComplexError::Window(format!("{} differentials for window [{lo}, {hi}]", diffs.len())));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.cols() != bases[k].len() || d.rows() != bases[k + 1].len() {
                return Err(ComplexError::Window(format!("d^{} has shape {}x{}", lo + k as i32, d.rows(), d.cols())));
            }
            if !d.ring().same_as(ring) {
                return Err(ComplexError::Window("matrix over a different ring".into()));
            }
        }
        Ok(FreeModuleComplex { ring: ring.clone(), lo, hi, bases, diffs })
    }

    pub fn ring(&self) -> &Arc<Algebra> {
        &self.ring
    }

    pub fn window(&self) -> (i32, i32) {
        (self.lo, self.hi)
    }

    pub fn basis(&self, k: i32) -> &[String] {
        if k < self.lo || k > self.hi {
            &[]
        } else {
            &self.bases[(k - self.lo) as usize]
        }
    }

    pub fn dim(&self, k: i32) -> usize {
        self.basis(k).len()
    }

    /// `d^k`, zero outside the window.
    pub fn d(&self, k: i32) -> Matrix {
        if k < self.lo || k >= self.hi {
            Matrix::zeros(&self.ring, self.dim(k + 1), self.dim(k))
        } else {
            self.diffs[(k - self.lo) as usize].clone()
        }
    }

    pub fn total_rank(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    pub fn check(&self) -> Report {
        let mut r = Report::new();
        for k in self.lo..self.hi - 1 {
            let dd = self.d(k + 1).mul(&self.d(k));
            let name = format!("d^2 at {k}");
            match dd.first_nonzero() {
                None => r.pass(name),
                Some((i, j, e)) => r.fail(name, format!("{} <- {}: {e}", self.basis(k + 2)[i], self.basis(k)[j]), 1),
            }
        }
        r
    }

    pub fn to_file(&self) -> ComplexFile {
        let key = |k: i32| k.to_string();
        ComplexFile {
            field: self.ring.field(),
            ring: self.ring.generators().iter().map(|g| g.name.clone()).collect(),
            units: self.ring.unit_strings(),
            window: (self.lo, self.hi),
            bases: (self.lo..=self.hi).map(|k| (key(k), self.basis(k).to_vec())).collect(),
            matrices: (self.lo..self.hi).map(|k| (key(k), self.d(k).to_strings())).collect(),
        }
    }
}

/// JSON form: window, basis labels and matrices with poly-string entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub field: Field,
    pub ring: Vec<String>,
    #[serde(default)]
    pub units: Vec<String>,
    pub window: (i32, i32),
    pub bases: BTreeMap<String, Vec<String>>,
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
}

impl ComplexFile {
    pub fn build(&self) -> Result<FreeModuleComplex> {
        let gens = self.ring.iter().map(|n| gca_core::Generator::new(n.clone(), 0)).collect();
        let ring = Algebra::with_units(self.field, gens, &self.units)?;
        let (lo, hi) = self.window;
        let bases: Vec<Vec<String>> = (lo..=hi).map(|k| self.bases.get(&k.to_string()).cloned().unwrap_or_default()).collect();
        let mut diffs = Vec::new();
        for k in lo..hi {
            let (rows, cols) = (bases[(k + 1 - lo) as usize].len(), bases[(k - lo) as usize].len());
            let mut m = Matrix::zeros(&ring, rows, cols);
            if let Some(entries) = self.matrices.get(&k.to_string()) {
                if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
                    return Err(ComplexError::Window(format!("matrix at degree {k} does not match its bases")));
                }
                for (i, row) in entries.iter().enumerate() {
                    for (j, s) in row.iter().enumerate() {
                        m.set(i, j, parse_elem(&ring, s)?);
                    }
                }
            }
            diffs.push(m);
        }
        FreeModuleComplex::new(&ring, lo, bases, diffs)
    }
}

/// Degree-0 map; `maps[k]` has rows indexed by the target basis in degree k.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: Arc<FreeModuleComplex>,
    pub target: Arc<FreeModuleComplex>,
    pub maps: BTreeMap<i32, Matrix>,
}

impl ChainMap {
    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        let (a, b) = self.source.window();
        let (c, d) = self.target.window();
        a.min(c)..=b.max(d)
    }

    pub fn at(&self, k: i32) -> Matrix {
        self.maps
            .get(&k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.source.ring(), self.target.dim(k), self.source.dim(k)))
    }

    pub fn identity(k: &Arc<FreeModuleComplex>) -> ChainMap {
        let (lo, hi) = k.window();
        let maps = (lo..=hi).map(|d| (d, Matrix::identity(k.ring(), k.dim(d)))).collect();
        ChainMap { source: k.clone(), target: k.clone(), maps }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> ChainMap {
        let maps = self.degrees().map(|k| (k, other.at(k).mul(&self.at(k)))).collect();
        ChainMap { source: self.source.clone(), target: other.target.clone(), maps }
    }

    pub fn check(&self) -> Report {
        let mut r = Report::new();
        let degs = self.degrees();
        for k in *degs.start()..*degs.end() {
            let lhs = self.at(k + 1).mul(&self.source.d(k));
            let rhs = self.target.d(k).mul(&self.at(k));
            let name = format!("commutes at {k}");
            match lhs.sub(&rhs).first_nonzero() {
                None => r.pass(name),
                Some((i, j, e)) => r.fail(name, format!("{} <- {}: {e}", self.target.basis(k + 1)[i], self.source.basis(k)[j]), 1),
            }
        }
        r
    }

    pub fn is_identity(&self) -> bool {
        self.degrees().all(|k| {
            let m = self.at(k);
            m.rows() == m.cols() && m.sub(&Matrix::identity(self.source.ring(), m.rows())).is_zero()
        })
    }

    /// Each degree is a square matrix with one nonzero constant per row and column.
    pub fn is_basis_bijection(&self) -> bool {
        self.degrees().all(|k| self.at(k).is_monomial_constant())
    }
}
