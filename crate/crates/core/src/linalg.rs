//! Small dense complex linear algebra: a row-major matrix type, Hermitian
//! inner products, and the normal-equation projection used by the PCS
//! sounder.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Gram matrices with a 1-norm condition number above this are rejected.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

/// `a^H b` for equal-length vectors.
#[inline]
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[inline]
pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

#[inline]
pub fn norm(v: &[Complex64]) -> f64 {
    libm::sqrt(norm_sqr(v))
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Builds the matrix from columns of equal length.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = *v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Inverts a small square matrix by Gauss-Jordan elimination with partial
/// pivoting. Returns `None` when a pivot vanishes.
fn invert(m: &CMatrix) -> Option<CMatrix> {
    let n = m.rows;
    debug_assert_eq!(n, m.cols);
    let mut a = m.clone();
    let mut inv = CMatrix::zeros(n, n);
    for i in 0..n {
        inv[(i, i)] = Complex64::new(1.0, 0.0);
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))
            .unwrap_or(col);
        if a[(pivot, col)].norm() == 0.0 {
            return None;
        }
        if pivot != col {
            for c in 0..n {
                a.data.swap(pivot * n + c, col * n + c);
                inv.data.swap(pivot * n + c, col * n + c);
            }
        }
        let p = a[(col, col)].inv();
        for c in 0..n {
            a[(col, c)] *= p;
            inv[(col, c)] *= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[(r, col)];
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..n {
                let ac = a[(col, c)];
                let ic = inv[(col, c)];
                a[(r, c)] -= factor * ac;
                inv[(r, c)] -= factor * ic;
            }
        }
    }
    Some(inv)
}

fn one_norm(m: &CMatrix) -> f64 {
    (0..m.cols)
        .map(|c| (0..m.rows).map(|r| m[(r, c)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Orthogonal projection onto the column space of `columns`, computed as
/// `T (T^H T)^{-1} T^H f`.
///
/// Fails with [`Error::DegenerateGeometry`] when the Gram matrix `T^H T` is
/// singular or its 1-norm condition number exceeds [`MAX_GRAM_CONDITION`].
pub fn project_onto_span(columns: &[&[Complex64]], f: &[Complex64]) -> Result<Vec<Complex64>> {
    let k = columns.len();
    let n = f.len();
    for col in columns {
        if col.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: col.len(),
            });
        }
    }

    let mut gram = CMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = inner(columns[i], columns[j]);
        }
    }
    let gram_inv = invert(&gram).ok_or(Error::DegenerateGeometry {
        condition: f64::INFINITY,
    })?;
    let condition = one_norm(&gram) * one_norm(&gram_inv);
    if !(condition <= MAX_GRAM_CONDITION) {
        return Err(Error::DegenerateGeometry { condition });
    }

    let rhs: Vec<Complex64> = columns.iter().map(|c| inner(c, f)).collect();
    let coeffs = gram_inv.mul_vec(&rhs)?;

    let mut p = vec![Complex64::new(0.0, 0.0); n];
    for (col, a) in columns.iter().zip(&coeffs) {
        for (pi, ci) in p.iter_mut().zip(col.iter()) {
            *pi += a * ci;
        }
    }
    Ok(p)
}
