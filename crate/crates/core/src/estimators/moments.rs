use num_complex::Complex;

use super::EstimatorError;
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::Real;

/// Exponentially weighted second-order statistics of `(r, d)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Moments<T> {
    /// `Σ λ^{n-l} r[l] r^H[l]`
    pub r: ComplexMatrix<T>,
    /// `Σ λ^{n-l} d*[l] r[l]`
    pub p: ComplexVector<T>,
    /// `Σ λ^{n-l} |d[l]|²`
    pub sigma_d2: T,
    pub lambda: T,
    pub count: usize,
}

impl<T: Real> Moments<T> {
    pub fn new(dim: usize, lambda: T) -> Self {
        Self { r: ComplexMatrix::zeros(dim, dim), p: ComplexVector::zeros(dim), sigma_d2: T::zero(), lambda, count: 0 }
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    /// Discounts the past by λ and adds one sample.
    pub fn push(&mut self, r: &ComplexVector<T>, d: Complex<T>) {
        let lambda = self.lambda;
        let n = self.dim();
        for i in 0..n {
            let ri = r[i];
            for (a, rj) in self.r.row_mut(i).iter_mut().zip(r.iter()) {
                *a = *a * lambda + ri * rj.conj();
            }
            self.p[i] = self.p[i] * lambda + ri * d.conj();
        }
        self.sigma_d2 = self.sigma_d2 * lambda + d.norm_sqr();
        self.count += 1;
    }
}

/// A finite record of `(r[l], d[l])` pairs with its forgetting factor.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchDataset<T> {
    pub samples: Vec<(ComplexVector<T>, Complex<T>)>,
    pub lambda: T,
}

impl<T: Real> BatchDataset<T> {
    pub fn new(samples: Vec<(ComplexVector<T>, Complex<T>)>, lambda: T) -> Result<Self, EstimatorError> {
        let first = samples.first().ok_or(EstimatorError::EmptyData)?.0.len();
        if let Some((r, _)) = samples.iter().find(|(r, _)| r.len() != first) {
            return Err(EstimatorError::Dimension { expected: first, found: r.len() });
        }
        Ok(Self { samples, lambda })
    }

    pub fn dim(&self) -> usize {
        self.samples[0].0.len()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Weighted moments at the last sample; weight of sample `l` is `λ^{n-1-l}`.
    pub fn moments(&self) -> Moments<T> {
        let mut m = Moments::new(self.dim(), self.lambda);
        for (r, d) in &self.samples {
            m.push(r, *d);
        }
        m
    }

    /// Weight `λ^{n-1-l}` of sample `l` in [`Self::moments`].
    pub fn weight(&self, l: usize) -> T {
        self.lambda.powi((self.len() - 1 - l) as i32)
    }
}
