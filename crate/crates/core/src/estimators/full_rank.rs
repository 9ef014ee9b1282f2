use std::fmt;

use num_complex::Complex;

use super::{AdaptiveFilter, EstimatorError};
use crate::linalg::{hermitian_rank1_update_in_place, ComplexMatrix, ComplexVector};
use crate::Real;

/// Conventional exponentially weighted RLS over the full `JM` observation.
#[derive(Clone, Debug, PartialEq)]
pub struct FullRankRlsState<T> {
    pub w: ComplexVector<T>,
    /// Tracks `R⁻¹[i]`.
    pub p: ComplexMatrix<T>,
    pub lambda: T,
    pub steps: u64,
}

impl<T: Real> FullRankRlsState<T> {
    /// Zero filter with `P(0) = δ⁻¹ I`.
    pub fn new(dim: usize, lambda: T, delta: T) -> Self {
        Self {
            w: ComplexVector::zeros(dim),
            p: ComplexMatrix::scaled_identity(dim, T::one() / delta),
            lambda,
            steps: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// One recursion; returns the a priori output `w^H[i-1] r[i]`.
    pub fn step(&mut self, r: &ComplexVector<T>, d: Complex<T>) -> Result<Complex<T>, EstimatorError> {
        if r.len() != self.dim() {
            return Err(EstimatorError::Dimension { expected: self.dim(), found: r.len() });
        }
        let x = self.w.dot(r);
        let step = self.steps + 1;
        let gain = hermitian_rank1_update_in_place(&mut self.p, r, self.lambda)
            .map_err(|source| EstimatorError::Step { step, source })?;
        self.w.axpy((d - x).conj(), &gain);
        self.steps = step;
        Ok(x)
    }
}

impl<T: Real> AdaptiveFilter<T> for FullRankRlsState<T> {
    fn output(&self, r: &ComplexVector<T>) -> Complex<T> {
        self.w.dot(r)
    }

    fn update(&mut self, r: &ComplexVector<T>, d: Complex<T>) -> Result<Complex<T>, EstimatorError> {
        self.step(r, d)
    }

    fn composite(&self) -> ComplexVector<T> {
        self.w.clone()
    }
}

impl<T: Real> fmt::Display for FullRankRlsState<T> {
    /// Text dump: a header line, then `w` and `P` in the linalg text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "full-rank-rls lambda={} steps={}", self.lambda, self.steps)?;
        writeln!(f, "w {}", self.w)?;
        write!(f, "P {}", self.p)
    }
}
