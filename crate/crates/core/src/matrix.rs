//! Dense matrices over a finite field and the linear algebra the codes need.

use serde::{Deserialize, Serialize};

use crate::error::{CodecError, Result};
use crate::galois::{Field, Symbol};

/// Row-major matrix of field symbols. The field is supplied per operation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Symbol>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Symbol>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(CodecError::ShapeError("rows have different lengths".into()));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Symbol>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(CodecError::LengthMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Symbol] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Symbol> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Symbol {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Symbol) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Symbol] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [Symbol] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Symbol> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Symbol>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// The first `count` rows.
    pub fn top_rows(&self, count: usize) -> Matrix {
        self.row_range(0, count)
    }

    pub fn row_range(&self, start: usize, end: usize) -> Matrix {
        Matrix {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn check_field(&self, field: &Field) -> Result<()> {
        field.check_all(&self.data)
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(CodecError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let row = self.row(r).to_vec();
            let acc = vec_mat_unchecked(field, &row, other);
            out.row_mut(r).copy_from_slice(&acc);
        }
        Ok(out)
    }

    /// Elementwise `self + other`.
    pub fn add(&self, field: &Field, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data: vec_add(field, &self.data, &other.data) })
    }

    /// Elementwise `self - other`.
    pub fn sub(&self, field: &Field, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data: vec_sub(field, &self.data, &other.data) })
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(CodecError::DimensionMismatch(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// `v * self` for a row vector `v`.
    pub fn left_mul(&self, field: &Field, v: &[Symbol]) -> Result<Vec<Symbol>> {
        if v.len() != self.rows {
            return Err(CodecError::LengthMismatch { expected: self.rows, found: v.len() });
        }
        Ok(vec_mat_unchecked(field, v, self))
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self, field: &Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    let tmp = m.get(pr, c);
                    m.set(pr, c, m.get(row, c));
                    m.set(row, c, tmp);
                }
            }
            let inv = field.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in 0..m.cols {
                m.set(row, c, field.mul(m.get(row, c), inv));
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let v = field.sub(m.get(r, c), field.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rref(field).1.len()
    }

    pub fn inverse(&self, field: &Field) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(CodecError::ShapeError("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, n + r, 1);
        }
        let (red, pivots) = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(CodecError::ShapeError("matrix is singular".into()));
        }
        let mut out = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, red.get(r, n + c));
            }
        }
        Ok(out)
    }

    /// Right inverse of a full-row-rank K x N matrix: an N x K matrix `X`
    /// with `self * X = I`. Uses the lexicographically first set of K
    /// independent columns, inverts that square submatrix and leaves the
    /// remaining rows of `X` zero.
    pub fn right_inverse(&self, field: &Field) -> Result<Matrix> {
        let (_, pivots) = self.rref(field);
        if pivots.len() != self.rows {
            return Err(CodecError::ShapeError("matrix does not have full row rank".into()));
        }
        let sub_inv = self.select_columns(&pivots).inverse(field)?;
        let mut out = Matrix::zeros(self.cols, self.rows);
        for (i, &c) in pivots.iter().enumerate() {
            out.row_mut(c).copy_from_slice(sub_inv.row(i));
        }
        Ok(out)
    }

    pub fn is_nonsingular(&self, field: &Field) -> bool {
        self.rows == self.cols && self.rank(field) == self.rows
    }
}

fn vec_mat_unchecked(field: &Field, v: &[Symbol], m: &Matrix) -> Vec<Symbol> {
    let mut acc = vec![0; m.cols];
    for (i, &x) in v.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (a, &g) in acc.iter_mut().zip(m.row(i)) {
            if g != 0 {
                *a = field.add(*a, field.mul(x, g));
            }
        }
    }
    acc
}

/// Elementwise `a + b`.
pub fn vec_add(field: &Field, a: &[Symbol], b: &[Symbol]) -> Vec<Symbol> {
    a.iter().zip(b).map(|(&x, &y)| field.add(x, y)).collect()
}

/// Elementwise `a - b`.
pub fn vec_sub(field: &Field, a: &[Symbol], b: &[Symbol]) -> Vec<Symbol> {
    a.iter().zip(b).map(|(&x, &y)| field.sub(x, y)).collect()
}

pub fn vec_scale(field: &Field, c: Symbol, a: &[Symbol]) -> Vec<Symbol> {
    a.iter().map(|&x| field.mul(c, x)).collect()
}

/// Hamming weight.
pub fn weight(v: &[Symbol]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

pub fn distance(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{make_field, prime_field};

    #[test]
    fn right_inverse_uses_first_pivots() {
        let gf3 = prime_field(3).unwrap();
        let b = Matrix::from_rows(&[vec![1, 2, 1], vec![1, 1, 0]]).unwrap();
        let x = b.right_inverse(&gf3).unwrap();
        assert_eq!(x.rows(), 3);
        assert_eq!(b.mul(&gf3, &x).unwrap(), Matrix::identity(2));
        // third row untouched since columns 0 and 1 are independent
        assert_eq!(x.row(2), &[0, 0]);
    }

    #[test]
    fn inverse_and_rank() {
        let gf8 = make_field(2, 3, None).unwrap();
        let m = Matrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let inv = m.inverse(&gf8).unwrap();
        assert_eq!(m.mul(&gf8, &inv).unwrap(), Matrix::identity(2));
        let singular = Matrix::from_rows(&[vec![3, 3], vec![3, 3]]).unwrap();
        assert_eq!(singular.rank(&gf8), 1);
        assert!(singular.inverse(&gf8).is_err());
        assert!(singular.right_inverse(&gf8).is_err());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Matrix::from_rows(&[vec![1, 2], vec![1]]).is_err());
    }
}
