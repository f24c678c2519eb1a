use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::GaussScalar;
use crate::error::{Error, Result};

/// Dense matrix over the Gaussian rationals. Columns are vectors: a matrix
/// with `cols` columns is a linear map from a `cols`-dimensional space to a
/// `rows`-dimensional one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussScalar>,
}

impl GMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<GaussScalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(GMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        GMatrix {
            rows,
            cols,
            data: vec![GaussScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GMatrix::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = GaussScalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussScalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        GMatrix { rows, cols, data }
    }

    /// Builds a matrix from integer rows. All rows must share a length.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        GMatrix::from_fn(rows.len(), cols, |r, c| GaussScalar::from_int(rows[r][c]))
    }

    pub fn from_rows(rows: Vec<Vec<GaussScalar>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row of length {} in a matrix with {cols} columns",
                    row.len()
                )));
            }
            data.extend(row);
        }
        GMatrix::new(n, cols, data)
    }

    /// A single column vector.
    pub fn column(v: Vec<GaussScalar>) -> Self {
        let n = v.len();
        GMatrix { rows: n, cols: 1, data: v }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<GaussScalar>]) -> Self {
        GMatrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussScalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: GaussScalar) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[GaussScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<GaussScalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<GaussScalar>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn entries(&self) -> &[GaussScalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussScalar::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(GaussScalar::is_real)
    }

    pub fn transpose(&self) -> Self {
        GMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn conj(&self) -> Self {
        GMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(GaussScalar::conj).collect(),
        }
    }

    pub fn scale(&self, s: &GaussScalar) -> Self {
        GMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn try_mul(&self, rhs: &GMatrix) -> Result<GMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = GMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.data[r * rhs.cols + c] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[GaussScalar]) -> Vec<GaussScalar> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(GaussScalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `[self | rhs]`
    pub fn hstack(&self, rhs: &GMatrix) -> GMatrix {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        GMatrix::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                rhs.get(r, c - self.cols).clone()
            }
        })
    }

    /// `[self ; rhs]`
    pub fn vstack(&self, rhs: &GMatrix) -> GMatrix {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        GMatrix {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(&self, rhs: &GMatrix) -> GMatrix {
        GMatrix::from_fn(self.rows + rhs.rows, self.cols + rhs.cols, |r, c| {
            match (r < self.rows, c < self.cols) {
                (true, true) => self.get(r, c).clone(),
                (false, false) => rhs.get(r - self.rows, c - self.cols).clone(),
                _ => GaussScalar::zero(),
            }
        })
    }

    pub fn select_cols(&self, cols: &[usize]) -> GMatrix {
        GMatrix::from_fn(self.rows, cols.len(), |r, c| self.get(r, cols[c]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> GMatrix {
        GMatrix::from_fn(rows.len(), self.cols, |r, c| self.get(rows[r], c).clone())
    }

    pub fn col_range(&self, start: usize, end: usize) -> GMatrix {
        self.select_cols(&(start..end).collect::<Vec<_>>())
    }

    pub fn row_range(&self, start: usize, end: usize) -> GMatrix {
        self.select_rows(&(start..end).collect::<Vec<_>>())
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (GMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let x = m.get(row, c) * &inv;
                m.set(row, c, x);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for c in col..m.cols {
                    let x = m.get(r, c) - &(&f * m.get(row, c));
                    m.set(r, c, x);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one column per free variable, in the
    /// standard form read off the reduced echelon form.
    pub fn kernel(&self) -> GMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = GMatrix::zeros(self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            k.set(f, j, GaussScalar::one());
            for (i, &p) in pivots.iter().enumerate() {
                k.set(p, j, -r.get(i, f));
            }
        }
        k
    }

    /// Rows spanning `{y : y * self = 0}`.
    pub fn left_kernel(&self) -> GMatrix {
        self.transpose().kernel().transpose()
    }

    /// Solves `self * X = rhs`, returning the solution whose free variables
    /// are all zero, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &GMatrix) -> Option<GMatrix> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = GMatrix::zeros(self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x.set(p, c, r.get(i, self.cols + c).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<GMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&GMatrix::identity(self.rows))?;
        (self.rank() == self.rows).then_some(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    /// A right inverse of a surjective matrix.
    pub fn right_inverse(&self) -> Option<GMatrix> {
        self.solve(&GMatrix::identity(self.rows))
    }

    /// Splits every entry into real and imaginary parts, stacking the real
    /// rows above the imaginary rows. Used when unknowns are constrained to be
    /// rational.
    pub fn realify_rows(&self) -> GMatrix {
        let re = GMatrix::from_fn(self.rows, self.cols, |r, c| {
            GaussScalar::real(self.get(r, c).re().clone())
        });
        let im = GMatrix::from_fn(self.rows, self.cols, |r, c| {
            GaussScalar::real(self.get(r, c).im().clone())
        });
        re.vstack(&im)
    }
}

impl<'a, 'b> Mul<&'b GMatrix> for &'a GMatrix {
    type Output = GMatrix;
    fn mul(self, rhs: &'b GMatrix) -> GMatrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl<'a, 'b> Add<&'b GMatrix> for &'a GMatrix {
    type Output = GMatrix;
    fn add(self, rhs: &'b GMatrix) -> GMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        GMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a, 'b> Sub<&'b GMatrix> for &'a GMatrix {
    type Output = GMatrix;
    fn sub(self, rhs: &'b GMatrix) -> GMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        GMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &GMatrix {
    type Output = GMatrix;
    fn neg(self) -> GMatrix {
        GMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Debug for GMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        let a = GMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.cols(), 2);
        assert!((&a * &k).is_zero());
        let b = GMatrix::from_i64(&[&[6], &[12]]);
        let x = a.solve(&b).unwrap();
        assert_eq!(&a * &x, b);
        assert!(a.solve(&GMatrix::from_i64(&[&[1], &[0]])).is_none());
    }

    #[test]
    fn inverse_roundtrip() {
        let mut a = GMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        a.set(0, 1, GaussScalar::gauss(2, 1));
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, GMatrix::identity(2));
        assert!(GMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
