use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::LinalgError;
use crate::scalar::Real;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_diagonal(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds from nested rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(LinalgError::DimensionMismatch { expected: n, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    /// Real matrix given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<Complex<T>>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex::new(T::lit(x), T::zero())).collect()).collect();
        Self::from_rows(&rows)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).map(|i| self[(i, i)]).fold(Complex::zero(), |a, b| a + b)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if other.n != self.n {
            return Err(LinalgError::DimensionMismatch { expected: self.n, found: other.n });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let orow = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for (o, &b) in orow.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        if other.n != self.n {
            return Err(LinalgError::DimensionMismatch { expected: self.n, found: other.n });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect();
        Ok(Self { n: self.n, data })
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
    }

    /// Determinant by partially pivoted LU on a copy.
    pub fn determinant(&self) -> Complex<T> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Complex::<T>::one();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| a[i * n + k].norm().partial_cmp(&a[j * n + k].norm()).unwrap()).unwrap_or(k);
            if a[p * n + k].is_zero() {
                return Complex::zero();
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let piv = a[k * n + k];
            det *= piv;
            for i in k + 1..n {
                let f = a[i * n + k] / piv;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let akj = a[k * n + j];
                    a[i * n + j] -= f * akj;
                }
            }
        }
        det
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

/// Hermitian matrix. The only constructors symmetrize or check, so
/// `a[(i, j)] == a[(j, i)].conj()` holds bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T>(ComplexMatrix<T>);

impl<T: Real> HermitianMatrix<T> {
    /// Builds from the upper triangle (diagonal imaginary parts dropped).
    pub fn from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::new(upper(i, i).re, T::zero());
            for j in i + 1..n {
                let z = upper(i, j);
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        Self(m)
    }

    /// Accepts `m` only if it is exactly hermitian.
    pub fn try_from_matrix(m: ComplexMatrix<T>) -> Result<Self, LinalgError> {
        let n = m.n();
        for i in 0..n {
            for j in i..n {
                if m[(i, j)] != m[(j, i)].conj() {
                    return Err(LinalgError::NotHermitian { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.0.n()
    }

    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.0
    }

    /// Hermitian matrix plus `shift` times the identity.
    pub fn shifted(mut self, shift: T) -> Self {
        for i in 0..self.n() {
            self.0[(i, i)].re += shift;
        }
        self
    }
}

impl<T> Index<(usize, usize)> for HermitianMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, idx: (usize, usize)) -> &Complex<T> {
        &self.0[idx]
    }
}

/// Diagonal metric `diag(1, …, 1, t, …, t)` with `k` leading ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSpec {
    pub n: usize,
    pub k: usize,
    pub t: f64,
}

impl MetricSpec {
    pub fn new(n: usize, k: usize, t: f64) -> Result<Self, LinalgError> {
        let spec = Self { n, k, t };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), LinalgError> {
        if self.n == 0 {
            return Err(LinalgError::InvalidMetric("dimension n must be positive".into()));
        }
        if self.k > self.n {
            return Err(LinalgError::InvalidMetric(format!("k = {} exceeds n = {}", self.k, self.n)));
        }
        if !self.t.is_finite() {
            return Err(LinalgError::InvalidMetric(format!("t = {} is not finite", self.t)));
        }
        if self.t == 0.0 {
            return Err(LinalgError::SingularMetric);
        }
        Ok(())
    }

    /// Fraction `k / n` of unit entries.
    pub fn lambda(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn is_indefinite(&self) -> bool {
        self.t < 0.0 && self.k > 0 && self.k < self.n
    }

    /// Per-sample lower bound on the number of real eigenvalues, `|n - 2k|`.
    /// Zero-information (`n`) for positive metrics, where everything is real.
    pub fn min_real_count(&self) -> usize {
        if self.t > 0.0 {
            self.n
        } else {
            self.n.abs_diff(2 * self.k)
        }
    }

    /// Diagonal entry `i` of the metric.
    #[inline]
    pub fn entry(&self, i: usize) -> f64 {
        if i < self.k {
            1.0
        } else {
            self.t
        }
    }
}
