use std::fmt;
use std::ops::Mul;

use num::{BigInt, Integer, One, Signed, Zero};

use super::matrix::GMatrix;
use super::scalar::GaussScalar;
use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} integer matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for k in 0..n {
            m.data[k * n + k] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_fn(rows.len(), cols, |r, c| rows[r][c].into())
    }

    pub fn diag(entries: &[i64]) -> Self {
        let n = entries.len();
        IntMatrix::from_fn(n, n, |r, c| if r == c { entries[r].into() } else { BigInt::zero() })
    }

    /// Converts a matrix whose entries are all rational integers.
    pub fn from_gmatrix(m: &GMatrix) -> Option<Self> {
        let data: Option<Vec<BigInt>> = m.entries().iter().map(GaussScalar::to_integer).collect();
        Some(IntMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: data?,
        })
    }

    pub fn to_gmatrix(&self) -> GMatrix {
        GMatrix::from_fn(self.rows, self.cols, |r, c| GaussScalar::from_bigint(self.get(r, c).clone()))
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

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: BigInt) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        IntMatrix::from_fn(rows.len(), self.cols, |r, c| self.get(rows[r], c).clone())
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        IntMatrix::from_fn(self.rows, cols.len(), |r, c| self.get(r, cols[c]).clone())
    }

    pub fn hstack(&self, rhs: &IntMatrix) -> Self {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        IntMatrix::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                rhs.get(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, rhs: &IntMatrix) -> Self {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(rhs.data.iter().cloned());
        IntMatrix {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(&self, rhs: &IntMatrix) -> Self {
        IntMatrix::from_fn(self.rows + rhs.rows, self.cols + rhs.cols, |r, c| {
            match (r < self.rows, c < self.cols) {
                (true, true) => self.get(r, c).clone(),
                (false, false) => rhs.get(r - self.rows, c - self.cols).clone(),
                _ => BigInt::zero(),
            }
        })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn add(&self, rhs: &IntMatrix) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "integer sum shape mismatch");
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn try_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.get(k, c);
                }
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m.get(r, k).is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * m.get(n - 1, n - 1)
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = self.get(src, c) * k;
            self.data[dst * self.cols + c] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, src) * k;
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }
}

impl<'a, 'b> Mul<&'b IntMatrix> for &'a IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &'b IntMatrix) -> IntMatrix {
        self.try_mul(rhs).expect("integer product shape mismatch")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
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

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal with
/// nonnegative entries `d_1 | d_2 | ...`, zeros last. The inverses of `u`
/// and `v` are tracked alongside.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|k| self.d.get(k, k).clone()).collect()
    }

    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

struct SnfState {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfState {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_row(dst, src, k);
        self.u.add_row(dst, src, k);
        self.u_inv.add_col(src, dst, &-k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_col(dst, src, k);
        self.v.add_col(dst, src, k);
        self.v_inv.add_row(src, dst, &-k);
    }

    fn negate_row(&mut self, r: usize) {
        self.d.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = m.shape();
    let mut s = SnfState {
        d: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    let x = s.d.get(r, c);
                    if !x.is_zero() && best.map_or(true, |(br, bc)| x.abs() < s.d.get(br, bc).abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = best else {
                return finish(s);
            };
            s.swap_rows(t, pr);
            s.swap_cols(t, pc);

            let mut dirty = false;
            for r in t + 1..rows {
                let q = s.d.get(r, t).div_floor(s.d.get(t, t));
                if !q.is_zero() {
                    s.add_row(r, t, &-q);
                }
                dirty |= !s.d.get(r, t).is_zero();
            }
            for c in t + 1..cols {
                let q = s.d.get(t, c).div_floor(s.d.get(t, t));
                if !q.is_zero() {
                    s.add_col(c, t, &-q);
                }
                dirty |= !s.d.get(t, c).is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility of the rest of the block by the pivot
            let p = s.d.get(t, t).clone();
            let offender = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !s.d.get(r, c).is_multiple_of(&p)));
            match offender {
                Some(r) => s.add_row(t, r, &BigInt::one()),
                None => break,
            }
        }
        if s.d.get(t, t).is_negative() {
            s.negate_row(t);
        }
    }
    finish(s)
}

fn finish(s: SnfState) -> SmithForm {
    SmithForm {
        u: s.u,
        u_inv: s.u_inv,
        d: s.d,
        v: s.v,
        v_inv: s.v_inv,
    }
}

/// A Z-basis (as columns) of the integer solutions of `m x = 0`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    snf.v.select_cols(&(r..m.cols()).collect::<Vec<_>>())
}

/// A Z-basis of the integer vectors in the kernel of a matrix with rational
/// entries (imaginary parts must be zero).
pub fn integer_kernel_rational(m: &GMatrix) -> IntMatrix {
    assert!(m.is_real(), "integer kernel needs a rational constraint matrix");
    let scaled = clear_row_denominators(m);
    integer_kernel(&scaled)
}

fn clear_row_denominators(m: &GMatrix) -> IntMatrix {
    IntMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        let l = m
            .row(r)
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.re().denom()));
        (m.get(r, c).re() * num::BigRational::from_integer(l)).to_integer()
    })
}

/// A Z-basis of the subgroup of `Z^n` generated by the columns of `m`.
pub fn integer_span_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let diag = snf.diagonal();
    let r = snf.rank();
    IntMatrix::from_fn(m.rows(), r, |row, c| snf.u_inv.get(row, c) * &diag[c])
}

/// Solves `a x = b` over the integers when `a` has full column rank.
pub fn solve_integer(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let x = a.to_gmatrix().solve(&b.to_gmatrix())?;
    if (&a.to_gmatrix() * &x) != b.to_gmatrix() {
        return None;
    }
    IntMatrix::from_gmatrix(&x)
}

/// Some integer solution of `a x = b`, for any shape of `a`.
pub fn solve_integer_any(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "right-hand side length mismatch");
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let r = snf.rank();
    let ub: Vec<BigInt> = (0..a.rows())
        .map(|i| (0..a.rows()).map(|j| snf.u.get(i, j) * &b[j]).sum())
        .collect();
    if ub[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..r {
        let (q, rem) = ub[i].div_rem(&diag[i]);
        if !rem.is_zero() {
            return None;
        }
        y[i] = q;
    }
    Some(
        (0..a.cols())
            .map(|i| (0..a.cols()).map(|j| snf.v.get(i, j) * &y[j]).sum())
            .collect(),
    )
}

/// Some integer solution of `m x = v` where `m` and `v` have Gaussian
/// rational entries (real and imaginary parts are matched separately).
pub fn solve_integer_gauss(m: &GMatrix, v: &[GaussScalar]) -> Option<Vec<BigInt>> {
    let aug = m.hstack(&GMatrix::column(v.to_vec())).realify_rows();
    let scaled = clear_row_denominators(&aug);
    let n = m.cols();
    let a = scaled.select_cols(&(0..n).collect::<Vec<_>>());
    let b: Vec<BigInt> = (0..scaled.rows()).map(|r| scaled.get(r, n).clone()).collect();
    solve_integer_any(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(m.rows()));
        assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(m.cols()));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[0] >= BigInt::zero());
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                assert!(diag.iter().skip_while(|x| !x.is_zero()).all(Zero::is_zero));
            }
        }
        s
    }

    #[test]
    fn general_integer_solve() {
        let a = IntMatrix::from_i64(&[&[2, 4]]);
        assert!(solve_integer_any(&a, &[BigInt::from(3)]).is_none());
        let x = solve_integer_any(&a, &[BigInt::from(6)]).unwrap();
        assert_eq!(BigInt::from(2) * &x[0] + BigInt::from(4) * &x[1], BigInt::from(6));
        let m = GMatrix::column(vec![GaussScalar::from_ratio(1, 2)]);
        assert!(solve_integer_gauss(&m, &[GaussScalar::one()]).is_some());
        assert!(solve_integer_gauss(&m, &[GaussScalar::i()]).is_none());
    }

    #[test]
    fn diag_two_three() {
        let s = check(&IntMatrix::diag(&[2, 3]));
        assert_eq!(s.d, IntMatrix::diag(&[1, 6]));
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(check(&IntMatrix::identity(3)).d, IntMatrix::identity(3));
        assert_eq!(check(&IntMatrix::zeros(1, 1)).d, IntMatrix::zeros(1, 1));
    }

    #[test]
    fn rectangular() {
        check(&IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        check(&IntMatrix::from_i64(&[&[0, 3], &[0, 0], &[5, 0]]));
    }

    #[test]
    fn kernel_and_span() {
        let m = IntMatrix::from_i64(&[&[2, 4, 6]]);
        let k = integer_kernel(&m);
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
        let b = integer_span_basis(&IntMatrix::from_i64(&[&[2, 3]]));
        assert_eq!(b.cols(), 1);
        assert_eq!(b.get(0, 0).abs(), BigInt::one());
    }

    #[test]
    fn determinant() {
        assert_eq!(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(IntMatrix::from_i64(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]).det(), BigInt::from(18));
    }
}
