//! Small dense matrices, row-major.
//!
//! Desk-scale only: every routine is O(n³) and allocation is per call. The
//! generic half (products, inversion, ranks, definiteness) works on any
//! [`Scalar`]; spectral routines are implemented for `f64`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![S::one(); n])
    }

    pub fn from_diag(diag: &[S]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in diag.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<S>]) -> Result<Self> {
        Ok(Self::from_rows(columns)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn diagonal(&self) -> Vec<S> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(S::to_f64)
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|v| v.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() + other[(r, c)].clone()
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |r, c| {
            self[(r, c)].clone() - other[(r, c)].clone()
        }))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] = out[(r, c)].clone() + a.clone() * other[(k, c)].clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows).map(|r| dot(self.row(r), x)).collect())
    }

    /// `selfᵀ x` without materializing the transpose.
    pub fn tr_mul_vec(&self, x: &[S]) -> Result<Vec<S>> {
        if x.len() != self.rows {
            return Err(Error::ShapeMismatch {
                expected: self.rows,
                found: x.len(),
            });
        }
        let mut out = vec![S::zero(); self.cols];
        for (r, xr) in x.iter().enumerate() {
            if xr.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = o.clone() + self[(r, c)].clone() * xr.clone();
            }
        }
        Ok(out)
    }

    /// Kronecker product; row index of the result is `r1 * rows2 + r2`.
    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |r, c| {
            let (r1, r2) = (r / other.rows, r % other.rows);
            let (c1, c2) = (c / other.cols, c % other.cols);
            self[(r1, c1)].clone() * other[(r2, c2)].clone()
        })
    }

    pub fn kron_all(factors: &[Self]) -> Self {
        let mut acc = Self::identity(1);
        for f in factors {
            acc = acc.kron(f);
        }
        acc
    }

    /// `xᵀ self x`.
    pub fn quadratic_form(&self, x: &[S]) -> Result<S> {
        Ok(dot(x, &self.mul_vec(x)?))
    }

    pub fn frobenius_sq(&self) -> S {
        self.data
            .iter()
            .fold(S::zero(), |acc, v| acc + v.clone() * v.clone())
    }

    pub fn max_abs(&self) -> S {
        self.data
            .iter()
            .fold(S::zero(), |acc, v| S::max_of(acc, v.abs()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let slack = S::tol(tol);
        (0..self.rows).all(|r| {
            (0..r).all(|c| (self[(r, c)].clone() - self[(c, r)].clone()).abs() <= slack)
        })
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().to_f64().max(f64::MIN_POSITIVE);
        let floor = S::tol(1e-14 * scale);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a[(i, col)]
                        .abs()
                        .partial_cmp(&a[(j, col)].abs())
                        .unwrap_or(core::cmp::Ordering::Equal)
                })
                .ok_or(Error::SingularMatrix)?;
            if a[(pivot, col)].abs() <= floor {
                return Err(Error::SingularMatrix);
            }
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] = a[(col, c)].clone() / p.clone();
                inv[(col, c)] = inv[(col, c)].clone() / p.clone();
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)].clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    a[(r, c)] = a[(r, c)].clone() - f.clone() * a[(col, c)].clone();
                    inv[(r, c)] = inv[(r, c)].clone() - f.clone() * inv[(col, c)].clone();
                }
            }
        }
        Ok(inv)
    }

    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        self.inverse()?.mul_vec(b)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Rank by row reduction; entries at or below `tol · max|a|` count as zero
    /// (exactly zero for exact scalars).
    pub fn rank(&self, tol: f64) -> usize {
        let mut a = self.clone();
        let scale = self.max_abs().to_f64();
        if scale == 0.0 {
            return 0;
        }
        let floor = S::tol(tol * scale);
        let mut rank = 0;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let pivot = (rank..a.rows).max_by(|&i, &j| {
                a[(i, col)]
                    .abs()
                    .partial_cmp(&a[(j, col)].abs())
                    .unwrap_or(core::cmp::Ordering::Equal)
            });
            let Some(pivot) = pivot else { break };
            if a[(pivot, col)].abs() <= floor {
                continue;
            }
            a.swap_rows(rank, pivot);
            let p = a[(rank, col)].clone();
            for r in rank + 1..a.rows {
                let f = a[(r, col)].clone() / p.clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..a.cols {
                    a[(r, c)] = a[(r, c)].clone() - f.clone() * a[(rank, c)].clone();
                }
            }
            rank += 1;
        }
        rank
    }

    /// Symmetric positive definiteness via the pivots of an LDLᵀ sweep.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric(1e-9 * self.max_abs().to_f64().max(1.0)) {
            return false;
        }
        let n = self.rows;
        let mut a = self.clone();
        let floor = S::tol(1e-14 * self.max_abs().to_f64());
        for k in 0..n {
            let p = a[(k, k)].clone();
            if p <= floor {
                return false;
            }
            for r in k + 1..n {
                let f = a[(r, k)].clone() / p.clone();
                for c in k..n {
                    a[(r, c)] = a[(r, c)].clone() - f.clone() * a[(k, c)].clone();
                }
            }
        }
        true
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn max_abs<S: Scalar>(a: &[S]) -> S {
    a.iter().fold(S::zero(), |acc, v| S::max_of(acc, v.abs()))
}

pub fn scaled<S: Scalar>(a: &[S], s: &S) -> Vec<S> {
    a.iter().map(|v| v.clone() * s.clone()).collect()
}

pub fn norm2(a: &[f64]) -> f64 {
    libm::sqrt(a.iter().map(|v| v * v).sum())
}

pub fn normalized(a: &[f64]) -> Vec<f64> {
    let n = norm2(a);
    a.iter().map(|v| v / n).collect()
}

pub fn is_zero_vec<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(|v| v.is_zero())
}

/// Flip sign so that the first nonzero coordinate is positive.
pub fn canonical_sign<S: Scalar>(a: &[S]) -> Vec<S> {
    match a.iter().find(|v| !v.is_zero()) {
        Some(first) if *first < S::zero() => a.iter().map(|v| -v.clone()).collect(),
        _ => a.to_vec(),
    }
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, matching `values`.
    pub vectors: Matrix<f64>,
}

/// Thin singular value decomposition `A = U diag(s) Vᵀ`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix<f64>,
    /// Singular values in descending order.
    pub s: Vec<f64>,
    pub v: Matrix<f64>,
}

impl Matrix<f64> {
    pub fn frobenius(&self) -> f64 {
        libm::sqrt(self.frobenius_sq())
    }

    pub fn symmetrize(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| 0.5 * (self[(r, c)] + self[(c, r)]))
    }

    /// Cyclic Jacobi eigenvalue iteration.
    pub fn sym_eigen(&self) -> SymEigen {
        let n = self.rows;
        let mut a = self.symmetrize();
        let mut v = Self::identity(n);
        for _sweep in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
                .map(|(r, c)| a[(r, c)] * a[(r, c)])
                .sum();
            let total = a.frobenius_sq();
            if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = theta.signum() / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / libm::sqrt(t * t + 1.0);
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
        SymEigen {
            values: order.iter().map(|&i| a[(i, i)]).collect(),
            vectors: Self::from_fn(n, n, |r, c| v[(r, order[c])]),
        }
    }

    /// One-sided Jacobi SVD.
    pub fn svd(&self) -> Svd {
        if self.rows < self.cols {
            let t = self.transpose().svd();
            return Svd {
                u: t.v,
                s: t.s,
                v: t.u,
            };
        }
        let (m, n) = (self.rows, self.cols);
        let mut u = self.clone();
        let mut v = Self::identity(n);
        for _sweep in 0..100 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                    for k in 0..m {
                        alpha += u[(k, p)] * u[(k, p)];
                        beta += u[(k, q)] * u[(k, q)];
                        gamma += u[(k, p)] * u[(k, q)];
                    }
                    if gamma == 0.0 || libm::fabs(gamma) <= 1e-15 * libm::sqrt(alpha * beta) {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = if zeta == 0.0 {
                        1.0
                    } else {
                        zeta.signum() / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta))
                    };
                    let c = 1.0 / libm::sqrt(1.0 + t * t);
                    let s = c * t;
                    for k in 0..m {
                        let ukp = u[(k, p)];
                        let ukq = u[(k, q)];
                        u[(k, p)] = c * ukp - s * ukq;
                        u[(k, q)] = s * ukp + c * ukq;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let sigma: Vec<f64> = (0..n).map(|j| norm2(&u.column(j))).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
        let u_out = Self::from_fn(m, n, |r, c| {
            let j = order[c];
            if sigma[j] > 0.0 {
                u[(r, j)] / sigma[j]
            } else {
                0.0
            }
        });
        Svd {
            u: u_out,
            s: order.iter().map(|&j| sigma[j]).collect(),
            v: Self::from_fn(n, n, |r, c| v[(r, order[c])]),
        }
    }

    /// Lower-triangular `L` with `self = L Lᵀ`.
    pub fn cholesky(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotPositiveDefinite);
        }
        let n = self.rows;
        let mut l = Self::zeros(n, n);
        for j in 0..n {
            let mut d = self[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite);
            }
            let djj = libm::sqrt(d);
            l[(j, j)] = djj;
            for i in j + 1..n {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(l)
    }

    pub fn nuclear_norm(&self) -> f64 {
        self.svd().s.iter().sum()
    }

    pub fn spectral_norm(&self) -> f64 {
        self.svd().s.first().copied().unwrap_or(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn approx(a: &Matrix<f64>, b: &Matrix<f64>, tol: f64) -> bool {
        a.sub(b).unwrap().max_abs() <= tol
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(&[vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 4.0]])
            .unwrap();
        let inv = m.inverse().unwrap();
        assert!(approx(&m.matmul(&inv).unwrap(), &Matrix::identity(3), 1e-14));
    }

    #[test]
    fn exact_inverse_and_rank() {
        let q = |n, d| Rational::from_ratio(n, d);
        let m = Matrix::from_rows(&[vec![q(1, 2), q(1, 3)], vec![q(1, 3), q(1, 4)]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv).unwrap(), Matrix::identity(2));
        let r1 = Matrix::from_rows(&[vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]]).unwrap();
        assert_eq!(r1.rank(0.0), 1);
        assert!(matches!(r1.inverse(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn kron_layout_is_lexicographic() {
        let a = Matrix::from_diag(&[4.0, 1.0]);
        let k = a.kron(&Matrix::identity(2));
        assert_eq!(k.diagonal(), vec![4.0, 4.0, 1.0, 1.0]);
    }

    #[test]
    fn eigen_reconstructs() {
        let m = Matrix::from_rows(&[vec![4.0, 1.0, 2.0], vec![1.0, 3.0, 0.5], vec![2.0, 0.5, 5.0]])
            .unwrap();
        let e = m.sym_eigen();
        let rebuilt = e
            .vectors
            .matmul(&Matrix::from_diag(&e.values))
            .unwrap()
            .matmul(&e.vectors.transpose())
            .unwrap();
        assert!(approx(&rebuilt, &m, 1e-12));
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn svd_reconstructs_wide_and_tall() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 0.0], vec![-1.0, 0.5, 3.0]]).unwrap();
        for m in [a.clone(), a.transpose()] {
            let svd = m.svd();
            let rebuilt = svd
                .u
                .matmul(&Matrix::from_diag(&svd.s))
                .unwrap()
                .matmul(&svd.v.transpose())
                .unwrap();
            assert!(approx(&rebuilt, &m, 1e-12));
        }
    }

    #[test]
    fn cholesky_and_definiteness() {
        let m = Matrix::from_rows(&[vec![4.0, 2.0], vec![2.0, 3.0]]).unwrap();
        let l = m.cholesky().unwrap();
        assert!(approx(&l.matmul(&l.transpose()).unwrap(), &m, 1e-14));
        assert!(m.is_positive_definite());
        let bad = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(!bad.is_positive_definite());
        assert!(bad.cholesky().is_err());
    }
}
