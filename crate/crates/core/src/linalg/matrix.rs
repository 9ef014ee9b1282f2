use std::fmt;
use std::ops::{Deref, DerefMut, Index, IndexMut};

use num_complex::Complex;

use crate::scalar::{czero, Real};

/// Dense complex column vector.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct ComplexVector<T> {
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexVector<T> {
    pub fn zeros(len: usize) -> Self {
        Self { data: vec![czero(); len] }
    }

    pub fn from_vec(data: Vec<Complex<T>>) -> Self {
        Self { data }
    }

    pub fn from_fn(len: usize, f: impl FnMut(usize) -> Complex<T>) -> Self {
        Self { data: (0..len).map(f).collect() }
    }

    /// Unit vector with a one at `index`.
    pub fn basis(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.data[index] = Complex::new(T::one(), T::zero());
        v
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.data
    }

    /// Inner product `self^H other`.
    pub fn dot(&self, other: &Self) -> Complex<T> {
        dotc(&self.data, &other.data)
    }

    pub fn norm_sqr(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self::from_fn(self.len(), |i| self.data[i] + other.data[i])
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self::from_fn(self.len(), |i| self.data[i] - other.data[i])
    }

    /// `self += s * x`
    pub fn axpy(&mut self, s: Complex<T>, x: &Self) {
        assert_eq!(self.len(), x.len());
        for (a, b) in self.data.iter_mut().zip(&x.data) {
            *a += s * b;
        }
    }

    /// Leading `n` entries.
    pub fn head(&self, n: usize) -> Self {
        Self { data: self.data[..n].to_vec() }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Outer product `self other^H`.
    pub fn outer(&self, other: &Self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.len(), other.len(), |i, j| self.data[i] * other.data[j].conj())
    }
}

impl<T> Deref for ComplexVector<T> {
    type Target = [Complex<T>];
    fn deref(&self) -> &[Complex<T>] {
        &self.data
    }
}

impl<T> DerefMut for ComplexVector<T> {
    fn deref_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }
}

impl<T> From<Vec<Complex<T>>> for ComplexVector<T> {
    fn from(data: Vec<Complex<T>>) -> Self {
        Self { data }
    }
}

impl<T> FromIterator<Complex<T>> for ComplexVector<T> {
    fn from_iter<I: IntoIterator<Item = Complex<T>>>(iter: I) -> Self {
        Self { data: iter.into_iter().collect() }
    }
}

/// `x^H y` over slices.
pub(crate) fn dotc<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> Complex<T> {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = czero();
    for (a, b) in x.iter().zip(y) {
        acc += a.conj() * b;
    }
    acc
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![czero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, T::one())
    }

    pub fn scaled_identity(n: usize, s: T) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(s, T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must match dimensions");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex::new(d, T::zero());
        }
        m
    }

    /// Stacks columns side by side.
    pub fn from_columns(cols: &[ComplexVector<T>]) -> Self {
        let rows = cols.first().map_or(0, ComplexVector::len);
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i])
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

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Complex<T>] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> ComplexVector<T> {
        ComplexVector::from_fn(self.rows, |i| self[(i, j)])
    }

    pub fn set_column(&mut self, j: usize, v: &ComplexVector<T>) {
        assert_eq!(v.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = v[i];
        }
    }

    /// Leading `n` columns.
    pub fn leading_columns(&self, n: usize) -> Self {
        assert!(n <= self.cols);
        Self::from_fn(self.rows, n, |i, j| self[(i, j)])
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> Complex<T> {
        self.diagonal().into_iter().fold(czero(), |a, b| a + b)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul_vec(&self, x: &ComplexVector<T>) -> ComplexVector<T> {
        assert_eq!(self.cols, x.len(), "matrix-vector dimension mismatch");
        ComplexVector::from_fn(self.rows, |i| {
            let row = self.row(i);
            let mut acc = czero();
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            acc
        })
    }

    /// `self^H x` without forming the adjoint.
    pub fn adjoint_mul_vec(&self, x: &ComplexVector<T>) -> ComplexVector<T> {
        assert_eq!(self.rows, x.len(), "adjoint matrix-vector dimension mismatch");
        let mut out = vec![czero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * xi;
            }
        }
        ComplexVector::from_vec(out)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == czero() {
                    continue;
                }
                let orow = other.row(k);
                for (o, b) in out.row_mut(i).iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self^H other` without forming the adjoint.
    pub fn adjoint_matmul(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "adjoint product dimension mismatch");
        let mut out = Self::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            let arow = self.row(k);
            let brow = other.row(k);
            for (i, a) in arow.iter().enumerate() {
                let ac = a.conj();
                for (o, b) in out.row_mut(i).iter_mut().zip(brow) {
                    *o += ac * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// `self += s * u v^H`
    pub fn add_outer(&mut self, s: Complex<T>, u: &ComplexVector<T>, v: &ComplexVector<T>) {
        assert_eq!((self.rows, self.cols), (u.len(), v.len()), "outer product shape mismatch");
        for i in 0..self.rows {
            let ui = s * u[i];
            for (o, vj) in self.row_mut(i).iter_mut().zip(v.iter()) {
                *o += ui * vj.conj();
            }
        }
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> T {
        assert!(self.is_square());
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(A + A^H) / 2`
    pub fn symmetrized(&self) -> Self {
        assert!(self.is_square());
        let half = T::lit(0.5);
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    pub fn symmetrize_in_place(&mut self) {
        let half = T::lit(0.5);
        for i in 0..self.rows {
            self[(i, i)].im = T::zero();
            for j in i + 1..self.cols {
                let avg = (self[(i, j)] + self[(j, i)].conj()) * half;
                self[(i, j)] = avg;
                self[(j, i)] = avg.conj();
            }
        }
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> fmt::Display for ComplexMatrix<T> {
    /// One row per line, entries as `re+imi`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl<T: Real> fmt::Display for ComplexVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
        write!(f, "{} {}", self.len(), entries.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn adjoint_products_agree_with_explicit_adjoint() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64 + 1.0, j as f64 - 0.5));
        let b = ComplexMatrix::from_fn(3, 4, |i, j| c(j as f64, i as f64 * 0.3));
        let x = ComplexVector::from_fn(3, |i| c(1.0, -(i as f64)));
        assert_eq!(a.adjoint_matmul(&b), a.adjoint().matmul(&b));
        let y1 = a.adjoint_mul_vec(&x);
        let y2 = a.adjoint().mul_vec(&x);
        for (u, v) in y1.iter().zip(y2.iter()) {
            assert!((u - v).norm() < 1e-14);
        }
    }

    #[test]
    fn dot_conjugates_left_argument() {
        let x = ComplexVector::from_vec(vec![c(0.0, 1.0)]);
        let y = ComplexVector::from_vec(vec![c(0.0, 1.0)]);
        assert_eq!(x.dot(&y), c(1.0, 0.0));
    }

    #[test]
    fn symmetrize_produces_hermitian() {
        let mut a = ComplexMatrix::from_fn(4, 4, |i, j| c((i * 3 + j) as f64, (i as f64) - (j as f64) * 2.0));
        a.symmetrize_in_place();
        assert_eq!(a.hermitian_defect(), 0.0);
    }
}
