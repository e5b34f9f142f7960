//! Dense matrices over a field context: reduced row-echelon form and kernels.

use crate::field::{FieldCtx, FieldElem};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(f: &FieldCtx, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    /// Builds a matrix from equal-length rows; `cols` is used when there are no rows.
    pub fn from_rows(rows: Vec<Vec<FieldElem>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[FieldElem]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: FieldElem) {
        self.data[i * self.cols + j] = x;
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Eliminates column `col` using row `pivot_row`, after scaling that row to a unit pivot.
    pub(crate) fn pivot_on(&mut self, f: &FieldCtx, pivot_row: usize, col: usize) {
        let inv = f.inv(self.get(pivot_row, col)).expect("nonzero pivot");
        for j in 0..self.cols {
            let v = self.get(pivot_row, j);
            self.set(pivot_row, j, f.mul(v, inv));
        }
        for i in 0..self.rows {
            if i == pivot_row {
                continue;
            }
            let factor = self.get(i, col);
            if factor.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let v = f.sub(self.get(i, j), f.mul(factor, self.get(pivot_row, j)));
                self.set(i, j, v);
            }
        }
    }

    /// Reduced row-echelon form in place; returns the pivot columns (leftmost convention).
    pub fn rref(&mut self, f: &FieldCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(found) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, found);
            self.pivot_on(f, r, c);
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &FieldCtx) -> usize {
        self.clone().rref(f).len()
    }

    /// Drops all-zero rows.
    pub fn truncate_zero_rows(&mut self) {
        let keep: Vec<FieldElem> = (0..self.rows)
            .filter(|&i| self.row(i).iter().any(|x| !x.is_zero()))
            .flat_map(|i| self.row(i).to_vec())
            .collect();
        self.rows = keep.len() / self.cols.max(1);
        if self.cols == 0 {
            self.rows = 0;
        }
        self.data = keep;
    }

    /// Basis of `{x : A x = 0}` as the rows of a matrix.
    pub fn kernel(&self, f: &FieldCtx) -> Matrix {
        let mut reduced = self.clone();
        let pivots = reduced.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(f, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, f.one());
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(b, pc, f.neg(reduced.get(i, fc)));
            }
        }
        basis
    }

    pub fn mul_vec(&self, f: &FieldCtx, v: &[FieldElem]) -> Vec<FieldElem> {
        self.iter_rows()
            .map(|row| row.iter().zip(v).fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect()
    }
}
