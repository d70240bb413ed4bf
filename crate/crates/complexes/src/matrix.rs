use std::sync::Arc;

use gca_core::{Algebra, Coeff, Elem};

/// Dense matrix with ring entries; `rows` index the target basis, `cols` the source basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    ring: Arc<Algebra>,
    rows: usize,
    cols: usize,
    entries: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(ring: &Arc<Algebra>, rows: usize, cols: usize) -> Matrix {
        Matrix { ring: ring.clone(), rows, cols, entries: vec![Elem::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Arc<Algebra>, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, Elem::one(ring));
        }
        m
    }

    pub fn ring(&self) -> &Arc<Algebra> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Elem {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, e: Elem) {
        self.entries[r * self.cols + c] = e;
    }

    pub fn add_at(&mut self, r: usize, c: usize, e: &Elem) {
        let k = r * self.cols + c;
        self.entries[k] = &self.entries[k] + e;
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix shapes");
        let mut out = Matrix::zeros(&self.ring, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shapes");
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect();
        Matrix { entries, ..self.clone() }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shapes");
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a - b).collect();
        Matrix { entries, ..self.clone() }
    }

    pub fn scale(&self, c: &Coeff) -> Matrix {
        Matrix { entries: self.entries.iter().map(|e| e.scale(c)).collect(), ..self.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &Elem)> {
        self.entries.iter().position(|e| !e.is_zero()).map(|k| (k / self.cols, k % self.cols, &self.entries[k]))
    }

    pub fn without_row(&self, r: usize) -> Matrix {
        let keep: Vec<usize> = (0..self.rows).filter(|&i| i != r).collect();
        self.select(&keep, &(0..self.cols).collect::<Vec<_>>())
    }

    pub fn without_col(&self, c: usize) -> Matrix {
        let keep: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        self.select(&(0..self.rows).collect::<Vec<_>>(), &keep)
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Square with exactly one nonzero constant per row and column.
    pub fn is_monomial_constant(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let mut col_seen = vec![false; self.cols];
        for i in 0..self.rows {
            let nz: Vec<usize> = (0..self.cols).filter(|&j| !self.get(i, j).is_zero()).collect();
            if nz.len() != 1 || col_seen[nz[0]] || self.get(i, nz[0]).as_constant().is_none() {
                return false;
            }
            col_seen[nz[0]] = true;
        }
        true
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect()
    }
}
