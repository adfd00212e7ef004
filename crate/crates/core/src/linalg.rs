//! Small dense matrices.
//!
//! Everything here is sized by irrep dimension or Lie-algebra dimension, so a
//! row-major `Vec` with straightforward O(n^3) kernels is all that is needed.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Num, Zero};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, lit, to_f64, Scalar};

/// Dense row-major matrix over a numeric element type.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

pub type CMat<T> = Mat<Complex<T>>;

impl<E: Copy + Num> Mat<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![E::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = E::one();
        }
        m
    }

    pub fn scalar(n: usize, value: E) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = value;
        }
        m
    }

    pub fn diag(values: &[E]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row vectors; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<E>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: rows.iter().flatten().copied().collect(),
        })
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

    pub fn as_slice(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> E {
        (0..self.rows.min(self.cols)).fold(E::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, s: E) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == E::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] = out.data[i * rhs.cols + j] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(E::zero(), |acc, j| acc + self[(i, j)] * v[j])
            })
            .collect()
    }

    pub fn map<F: Copy + Num>(&self, f: impl Fn(E) -> F) -> Mat<F> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(E, E) -> E) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl<E> Index<(usize, usize)> for Mat<E> {
    type Output = E;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Mat<E> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.cols + j]
    }
}

impl<E: Copy + Num> Add for &Mat<E> {
    type Output = Mat<E>;
    fn add(self, rhs: Self) -> Mat<E> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<E: Copy + Num> Sub for &Mat<E> {
    type Output = Mat<E>;
    fn sub(self, rhs: Self) -> Mat<E> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<E: Copy + Num> Mul for &Mat<E> {
    type Output = Mat<E>;
    fn mul(self, rhs: Self) -> Mat<E> {
        self.matmul(rhs)
    }
}

impl<E: Copy + Num + Neg<Output = E>> Neg for &Mat<E> {
    type Output = Mat<E>;
    fn neg(self) -> Mat<E> {
        self.map(|x| -x)
    }
}

impl<T: Scalar> Mat<T> {
    pub fn to_complex(&self) -> CMat<T> {
        self.map(|x| Complex::new(x, T::zero()))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().fold(T::zero(), |s, x| s + *x * *x).sqrt()
    }

    /// Largest absolute difference between `self` and its transpose.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi
    /// rotations. Returns eigenvalues in ascending order and the matching
    /// eigenvectors as columns.
    pub fn symmetric_eigen(&self) -> (Vec<T>, Mat<T>) {
        assert!(self.is_square(), "symmetric_eigen needs a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut v = Mat::<T>::identity(n);
        let scale = a.frobenius().max(T::min_positive_value());
        for _sweep in 0..100 {
            let mut off = T::zero();
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a[(i, j)] * a[(i, j)];
                }
            }
            if off.sqrt() <= T::epsilon() * scale * lit(1e-2) {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    if apq == T::zero() {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (lit::<T>(2.0) * apq);
                    let t = theta.signum()
                        / (theta.abs() + (theta * theta + T::one()).sqrt());
                    let t = if theta == T::zero() { T::one() } else { t };
                    let c = T::one() / (t * t + T::one()).sqrt();
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
        order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
        let values = order.iter().map(|&i| a[(i, i)]).collect();
        let vectors = Mat::from_fn(n, n, |r, c| v[(r, order[c])]);
        (values, vectors)
    }

    pub fn symmetric_eigenvalues(&self) -> Vec<T> {
        self.symmetric_eigen().0
    }

    /// Spectral norm, `sqrt(lambda_max(A^T A))`.
    pub fn op_norm(&self) -> T {
        let gram = self.transpose().matmul(self);
        gram.symmetric_eigenvalues()
            .last()
            .copied()
            .unwrap_or_else(T::zero)
            .max(T::zero())
            .sqrt()
    }

    /// Diagonally pivoted Cholesky factor of a symmetric positive
    /// semidefinite matrix: returns `F` with `F F^T = self`. Pivots below
    /// `tol` end the factorization, so rank-deficient input is accepted.
    /// `F` is lower triangular up to the row permutation chosen by pivoting.
    pub fn pivoted_cholesky(&self, tol: T) -> Result<Mat<T>> {
        assert!(self.is_square(), "pivoted_cholesky needs a square matrix");
        let n = self.rows;
        let mut w = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut l = Mat::<T>::zeros(n, n);
        for k in 0..n {
            let (piv, dmax) = (k..n)
                .map(|i| (i, w[(i, i)]))
                .fold((k, T::neg_infinity()), |best, cur| {
                    if cur.1 > best.1 {
                        cur
                    } else {
                        best
                    }
                });
            if dmax <= tol {
                if dmax < -tol {
                    return Err(Error::NotPositiveSemidefinite {
                        min_eigenvalue: to_f64(dmax),
                    });
                }
                break;
            }
            if piv != k {
                perm.swap(k, piv);
                for j in 0..n {
                    let tmp = w[(k, j)];
                    w[(k, j)] = w[(piv, j)];
                    w[(piv, j)] = tmp;
                }
                for i in 0..n {
                    let tmp = w[(i, k)];
                    w[(i, k)] = w[(i, piv)];
                    w[(i, piv)] = tmp;
                }
                for j in 0..k {
                    let tmp = l[(k, j)];
                    l[(k, j)] = l[(piv, j)];
                    l[(piv, j)] = tmp;
                }
            }
            let d = dmax.sqrt();
            l[(k, k)] = d;
            for i in (k + 1)..n {
                l[(i, k)] = w[(i, k)] / d;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    w[(i, j)] = w[(i, j)] - l[(i, k)] * l[(j, k)];
                }
            }
        }
        // P S P^T = L L^T  =>  S = (P^T L)(P^T L)^T.
        let mut f = Mat::<T>::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            for j in 0..n {
                f[(p, j)] = l[(i, j)];
            }
        }
        Ok(f)
    }
}

impl<T: Scalar> Mat<Complex<T>> {
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn re(&self) -> Mat<T> {
        self.map(|z| z.re)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Spectral norm via the real symmetric embedding of `A^* A`.
    pub fn op_norm(&self) -> T {
        let h = self.adjoint().matmul(self);
        let n = h.rows;
        let embed = Mat::<T>::from_fn(2 * n, 2 * n, |i, j| {
            let z = h[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        });
        embed
            .symmetric_eigenvalues()
            .last()
            .copied()
            .unwrap_or_else(T::zero)
            .max(T::zero())
            .sqrt()
    }

    /// `max |(A + A^*)_ij|`; zero for skew-hermitian matrices.
    pub fn skew_hermitian_residual(&self) -> T {
        (self + &self.adjoint()).max_abs()
    }

    /// `max |(U^* U - I)_ij|`.
    pub fn unitarity_residual(&self) -> T {
        (&self.adjoint().matmul(self) - &Self::identity(self.rows)).max_abs()
    }

    /// Matrix exponential by scaling and squaring with a Taylor kernel.
    pub fn expm(&self) -> Self {
        assert!(self.is_square(), "expm needs a square matrix");
        let n = self.rows;
        let norm1 = (0..n)
            .map(|j| (0..n).fold(T::zero(), |s, i| s + self[(i, j)].norm()))
            .fold(T::zero(), T::max);
        let mut squarings = 0u32;
        let half = lit::<T>(0.5);
        let mut scaled_norm = norm1;
        while scaled_norm > half {
            scaled_norm = scaled_norm * half;
            squarings += 1;
        }
        let a = self.scale_real(lit::<T>(2.0).powi(-(squarings as i32)));
        let mut result = Self::identity(n);
        let mut term = Self::identity(n);
        for k in 1..=30usize {
            term = term.matmul(&a).scale_real(T::one() / from_usize::<T>(k));
            result = &result + &term;
            if term.max_abs() <= T::epsilon() * lit(1e-3) {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.matmul(&result);
        }
        result
    }

    /// Hermitian-pairing trace `tr(A B^*)`.
    pub fn trace_with_adjoint(&self, rhs: &Self) -> Complex<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data
            .iter()
            .zip(&rhs.data)
            .fold(Complex::zero(), |acc, (a, b)| acc + *a * b.conj())
    }

    /// `tr(A B)` without forming the product.
    pub fn trace_of_product(&self, rhs: &Self) -> Complex<T> {
        assert_eq!(self.cols, rhs.rows);
        assert_eq!(self.rows, rhs.cols);
        let mut acc = Complex::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc = acc + self[(i, k)] * rhs[(k, i)];
            }
        }
        acc
    }
}

/// Complex scalar helper: `re + 0i`.
#[inline]
pub fn re<T: Scalar>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Unit imaginary.
#[inline]
pub fn imag_unit<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: &[&[(f64, f64)]]) -> CMat<f64> {
        let rows: Vec<Vec<Complex<f64>>> = rows
            .iter()
            .map(|r| r.iter().map(|&(a, b)| Complex::new(a, b)).collect())
            .collect();
        Mat::from_rows(&rows).unwrap()
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        let a = Mat::<f64>::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let (vals, vecs) = a.symmetric_eigen();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
        let back = vecs
            .matmul(&Mat::diag(&vals))
            .matmul(&vecs.transpose());
        assert!((&back - &a).max_abs() < 1e-13);
    }

    #[test]
    fn pivoted_cholesky_handles_rank_deficiency() {
        let a = Mat::from_rows(&[
            vec![1.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
            vec![0.0, 0.0, 4.0],
        ])
        .unwrap();
        let f = a.pivoted_cholesky(1e-12).unwrap();
        assert!((&f.matmul(&f.transpose()) - &a).max_abs() < 1e-14);
    }

    #[test]
    fn pivoted_cholesky_rejects_indefinite() {
        let a = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(
            a.pivoted_cholesky(1e-12),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn expm_of_pauli_rotation() {
        // exp(i t sigma_z) = diag(e^{it}, e^{-it})
        let t = 0.7;
        let z = cm(&[&[(0.0, t), (0.0, 0.0)], &[(0.0, 0.0), (0.0, -t)]]);
        let e = z.expm();
        assert!((e[(0, 0)] - Complex::new(t.cos(), t.sin())).norm() < 1e-15);
        assert!((e[(1, 1)] - Complex::new(t.cos(), -t.sin())).norm() < 1e-15);
        assert!(e[(0, 1)].norm() < 1e-16);
    }

    #[test]
    fn expm_large_norm_stays_unitary() {
        // exp of 40 * (i/2) sigma_x
        let s = 20.0;
        let z = cm(&[&[(0.0, 0.0), (0.0, s)], &[(0.0, s), (0.0, 0.0)]]);
        let e = z.expm();
        assert!(e.unitarity_residual() < 1e-12);
        assert!((e[(0, 0)].re - s.cos()).abs() < 1e-12);
    }

    #[test]
    fn complex_op_norm_matches_singular_value() {
        // [[1, i],[0, 1]] has singular values (sqrt5 +- 1)/2
        let a = cm(&[&[(1.0, 0.0), (0.0, 1.0)], &[(0.0, 0.0), (1.0, 0.0)]]);
        let expected = (5f64.sqrt() + 1.0) / 2.0;
        assert!((a.op_norm() - expected).abs() < 1e-13);
    }
}
