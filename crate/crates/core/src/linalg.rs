//! Dense matrices over a finite field.

use crate::gf::{FieldDesc, FqElem};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    field: FieldDesc,
    rows: usize,
    cols: usize,
    data: Vec<FqElem>,
}

impl Matrix {
    pub fn zeros(field: FieldDesc, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldDesc, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: FieldDesc,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FqElem,
    ) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldDesc, cols: &[Vec<FqElem>]) -> Matrix {
        let rows = cols.first().map_or(0, |c| c.len());
        Matrix::from_fn(field, rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn field(&self) -> FieldDesc {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FqElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FqElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<FqElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FqElem]) -> Vec<FqElem> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(self.field.zero(), |acc, j| acc + self.get(i, j) * v[j]))
            .collect()
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            self.get(i, j) - other.get(i, j)
        })
    }

    pub fn scale(&self, c: FqElem) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| c * self.get(i, j))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    /// Block-diagonal sum.
    pub fn block_diag(field: FieldDesc, blocks: &[Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Row reduction; returns the pivot columns and the sign-tracked determinant factor.
    fn eliminate(&mut self, aug: Option<&mut Matrix>) -> (Vec<usize>, FqElem) {
        let mut aug = aug;
        let mut det = self.field.one();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&i| !self.get(i, col).is_zero()) else {
                det = self.field.zero();
                continue;
            };
            if piv != row {
                self.swap_rows(piv, row);
                if let Some(a) = aug.as_deref_mut() {
                    a.swap_rows(piv, row);
                }
                det = -det;
            }
            let pv = self.get(row, col);
            det = det * pv;
            let inv = pv.inv().expect("pivot is nonzero");
            self.scale_row(row, inv);
            if let Some(a) = aug.as_deref_mut() {
                a.scale_row(row, inv);
            }
            for i in 0..self.rows {
                if i == row {
                    continue;
                }
                let c = self.get(i, col);
                if c.is_zero() {
                    continue;
                }
                self.add_row_multiple(i, row, -c);
                if let Some(a) = aug.as_deref_mut() {
                    a.add_row_multiple(i, row, -c);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (pivots, det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: FqElem) {
        for j in 0..self.cols {
            let v = self.get(r, j) * c;
            self.set(r, j, v);
        }
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, c: FqElem) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + c * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    pub fn det(&self) -> FqElem {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let (pivots, det) = m.eliminate(None);
        if pivots.len() < self.rows {
            self.field.zero()
        } else {
            det
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(None).0.len()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let mut m = self.clone();
        let mut aug = Matrix::identity(self.field, self.rows);
        let (pivots, _) = m.eliminate(Some(&mut aug));
        (pivots.len() == self.rows).then_some(aug)
    }

    /// Solves `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[FqElem]) -> Option<Vec<FqElem>> {
        Some(self.inverse()?.mul_vec(b))
    }
}

pub fn dot(a: &[FqElem], b: &[FqElem]) -> FqElem {
    let f = a[0].field();
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| acc + *x * *y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det_over_gf7() {
        let f = FieldDesc::new(7, 1).unwrap();
        let m = Matrix::from_fn(f, 2, 2, |i, j| f.from_int([[2, 3], [1, 4]][i][j]));
        assert_eq!(m.det(), f.from_int(5));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let singular = Matrix::from_fn(f, 2, 2, |i, _| f.from_int(i as i64 + 1));
        assert_eq!(singular.det(), f.zero());
        assert!(singular.inverse().is_none());
        assert_eq!(singular.rank(), 1);
    }

    #[test]
    fn determinant_tracks_row_swaps() {
        let f = FieldDesc::new(5, 1).unwrap();
        let m = Matrix::from_fn(f, 2, 2, |i, j| f.from_int(if i != j { 1 } else { 0 }));
        assert_eq!(m.det(), f.from_int(-1));
    }
}
