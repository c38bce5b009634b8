//! Dense integer matrices and fraction-free (Bareiss) determinants over
//! any integral domain with exact division.

use super::Z;
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Mul, Sub};

/// Integral domain with exact division, enough for Bareiss elimination.
pub trait ExactDomain:
    Clone + PartialEq + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    /// Exact quotient; panics if `other` does not divide `self`.
    fn exact_div(&self, other: &Self) -> Self;
}

impl ExactDomain for Z {
    fn exact_div(&self, other: &Self) -> Self {
        let (q, r) = num_integer::Integer::div_rem(self, other);
        assert!(r.is_zero(), "non-exact division in Bareiss step");
        q
    }
}

/// Determinant of a square matrix by fraction-free Gaussian elimination.
pub fn det_bareiss<T: ExactDomain>(m: &[Vec<T>]) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "det of non-square matrix");
    let mut a: Vec<Vec<T>> = m.to_vec();
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].clone() * a[k][k].clone() - a[i][k].clone() * a[k][j].clone();
                a[i][j] = num.exact_div(&prev);
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        T::zero() - d
    } else {
        d
    }
}

/// Dense matrix over big integers, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Z>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![Z::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Z::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Z>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| Z::from(v)).collect()).collect())
    }

    pub fn row(&self, r: usize) -> &[Z] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Z]) -> Vec<Z> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn det(&self) -> Z {
        assert_eq!(self.rows, self.cols);
        let rows: Vec<Vec<Z>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        det_bareiss(&rows)
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let (ia, ib) = (a * self.cols + c, b * self.cols + c);
            self.data.swap(ia, ib);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &Z) {
        assert_ne!(target, source);
        for c in 0..self.cols {
            let add = factor * &self[(source, c)];
            self[(target, c)] += add;
        }
    }

    /// col[target] += factor * col[source]
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &Z) {
        assert_ne!(target, source);
        for r in 0..self.rows {
            let add = factor * &self[(r, source)];
            self[(r, target)] += add;
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self[(r, c)].clone();
            self[(r, c)] = v;
        }
    }

    pub fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self[(r, c)].clone();
            self[(r, c)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = Z;
    fn index(&self, (r, c): (usize, usize)) -> &Z {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Z {
        &mut self.data[r * self.cols + c]
    }
}
