//! Dense matrices over a finite field, with exact Gaussian elimination.
//!
//! Elimination is deterministic: pivots are always the first nonzero entry
//! scanning down the current column, so rank, kernel bases, and solutions
//! are reproducible across runs and platforms.

use std::ops::Index;

use crate::error::{Error, Result};
use crate::field::Field;

/// A rows x cols matrix stored row-major. All entries live in one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    /// Builds a matrix from row-major data.
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<u64>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        let q = field.order();
        if let Some(&v) = data.iter().find(|&&v| v >= q) {
            return Err(Error::ValueOutOfRange(v, q));
        }
        Ok(Matrix { field, rows, cols, data })
    }

    /// All-zero matrix.
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    /// n x n identity.
    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from equal-length rows (at least one row).
    pub fn from_rows(field: Field, rows: &[Vec<u64>]) -> Result<Matrix> {
        let Some(first) = rows.first() else {
            return Err(Error::DimensionMismatch("from_rows needs at least one row".into()));
        };
        let cols = first.len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data: Vec<u64> = rows.iter().flatten().copied().collect();
        Matrix::new(field, rows.len(), cols, data)
    }

    /// Builds a matrix whose columns are the given equal-length vectors.
    pub fn from_cols(field: Field, cols: &[Vec<u64>]) -> Result<Matrix> {
        let Some(first) = cols.first() else {
            return Err(Error::DimensionMismatch("from_cols needs at least one column".into()));
        };
        let rows = first.len();
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("ragged columns".into()));
        }
        let mut m = Matrix::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                if v >= m.field.order() {
                    return Err(Error::ValueOutOfRange(v, m.field.order()));
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(v < self.field.order());
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Matrix product self * rhs.
    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f.clone(), self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let term = f.mul(a, rhs.get(l, j));
                    out.set(i, j, f.add(out.get(i, j), term));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product self * v.
    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &x)| f.add(acc, f.mul(a, x)))
            })
            .collect())
    }

    /// New matrix made of the selected columns, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> Result<Matrix> {
        if let Some(&j) = idx.iter().find(|&&j| j >= self.cols) {
            return Err(Error::DimensionMismatch(format!("column {} out of range", j)));
        }
        let mut m = Matrix::zeros(self.field.clone(), self.rows, idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, jj, self.get(i, j));
            }
        }
        Ok(m)
    }

    /// New matrix made of the selected rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Result<Matrix> {
        if let Some(&i) = idx.iter().find(|&&i| i >= self.rows) {
            return Err(Error::DimensionMismatch(format!("row {} out of range", i)));
        }
        let rows: Vec<Vec<u64>> = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        if rows.is_empty() {
            return Ok(Matrix::zeros(self.field.clone(), 0, self.cols));
        }
        Matrix::from_rows(self.field.clone(), &rows)
    }

    /// Appends `b` as an extra column.
    pub fn augment_col(&self, b: &[u64]) -> Result<Matrix> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "augment column of length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut m = Matrix::zeros(self.field.clone(), self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            if b[i] >= self.field.order() {
                return Err(Error::ValueOutOfRange(b[i], self.field.order()));
            }
            m.set(i, self.cols, b[i]);
        }
        Ok(m)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form plus the pivot column list.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // Deterministic pivoting: first nonzero entry at or below row r.
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let pv = m.get(r, c);
            if pv != 1 {
                let inv = f.inv(pv).expect("pivot is nonzero");
                for j in c..m.cols {
                    let v = m.get(r, j);
                    m.set(r, j, f.mul(v, inv));
                }
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Rank by forward elimination (cheaper than full RREF).
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut m = self.clone();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for i in r + 1..m.rows {
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                let scale = f.mul(factor, inv);
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(scale, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            r += 1;
        }
        r
    }

    /// Basis of the right kernel `{v : self * v = 0}`. Each basis vector is
    /// produced from one free column of the RREF (free coordinate set to 1,
    /// other free coordinates 0), in ascending free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut piv_iter = pivots.iter().copied().peekable();
        let mut free = Vec::new();
        for c in 0..self.cols {
            if piv_iter.peek() == Some(&c) {
                piv_iter.next();
            } else {
                free.push(c);
            }
        }
        for fc in free {
            let mut v = vec![0u64; self.cols];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(row, fc));
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * x = b`. Returns `Ok(None)` when the system is
    /// inconsistent; with free variables, the solution with all free
    /// coordinates zero is returned.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>> {
        let aug = self.augment_col(b)?;
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u64; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols);
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field.clone(), n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Matrix::zeros(self.field.clone(), n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j));
            }
        }
        Ok(inv)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.cols + j]
    }
}
