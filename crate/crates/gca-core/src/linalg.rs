//! Exact rank computations over the coefficient field.

use crate::coeff::Coeff;

/// Sparse row `(column, value)`, strictly increasing columns, no zeros.
pub type SparseRow = Vec<(usize, Coeff)>;

fn axpy(row: &SparseRow, c: &Coeff, piv: &SparseRow) -> SparseRow {
    // row - c * piv
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let take_row = j >= piv.len() || (i < row.len() && row[i].0 < piv[j].0);
        let take_piv = i >= row.len() || (j < piv.len() && piv[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_piv {
            out.push((piv[j].0, -(c * &piv[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - &(c * &piv[j].1);
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row echelon form; pivots are normalized to leading coefficient 1.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: std::collections::BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduce `row` against the current pivots.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut k = 0;
        while k < row.len() {
            let col = row[k].0;
            if let Some(p) = self.pivots.get(&col) {
                let c = row[k].1.clone();
                let tail: SparseRow = row.drain(..k).collect();
                let reduced = axpy(&row, &c, p);
                row = tail;
                row.extend(reduced);
            } else {
                k += 1;
            }
        }
        row
    }

    /// Insert a row; returns whether it was independent.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        let inv = row[0].1.inv().expect("nonzero lead");
        for e in row.iter_mut() {
            e.1 = &e.1 * &inv;
        }
        self.pivots.insert(row[0].0, row);
        true
    }
}

pub fn sparse_rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}

pub fn dense_to_sparse(row: &[Coeff]) -> SparseRow {
    row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

pub fn rank(rows: &[Vec<Coeff>]) -> usize {
    sparse_rank(rows.iter().map(|r| dense_to_sparse(r)))
}
