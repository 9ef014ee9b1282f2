//! Full-rank and joint iterative reduced-rank least-squares estimators.
//!
//! A reduced-rank filter is the pair `(T_D, w̄)`: the `JM x D` projection
//! `T_D` maps `r` to `r̄ = T_D^H r` and the output is `x = w̄^H r̄`. The pair
//! only acts through the composite `T_D w̄`, so any invertible `G` with
//! `(T_D G, G⁻¹ w̄)` yields the same output.

mod batch;
mod full_rank;
mod jio_rls;
mod moments;
mod oracle;
mod ses;

use thiserror::Error;

use crate::linalg::LinalgError;

pub use batch::{jio_batch_ls, BatchOptions, LsSolution};
pub use full_rank::FullRankRlsState;
pub use jio_rls::JioRlsState;
pub use moments::{BatchDataset, Moments};
pub use oracle::{genie_moments, mmse_genie, optimal_reduced_rank, truncated_wiener};
pub use ses::{filter_cost, ses, ses_reduced};

/// Initial inverse-correlation regularization: `P(0) = δ⁻¹ I`.
pub const DEFAULT_DELTA: f64 = 0.01;

/// Forgetting factor used throughout the experiments.
pub const DEFAULT_LAMBDA: f64 = 0.998;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("rank {rank} outside 1..={max}")]
    InvalidRank { rank: usize, max: usize },
    #[error("dataset is empty")]
    EmptyData,
    #[error("reduced Gram matrix T^H R T is singular (smallest eigenvalue {min_eigenvalue:e})")]
    SingularReducedGram { min_eigenvalue: f64 },
    #[error("correlation matrix singular even after ridge (condition estimate {condition:e})")]
    SingularCorrelation { condition: f64 },
    #[error("reduced-rank filter vanished at iteration {iteration}; reinitialize")]
    ZeroFilter { iteration: usize },
    #[error("update {step} failed: {source}")]
    Step { step: u64, source: LinalgError },
}

/// An adaptive linear estimator driven one snapshot at a time.
pub trait AdaptiveFilter<T: crate::Real> {
    /// Output with the current (a priori) filter, not touching the state.
    fn output(&self, r: &crate::linalg::ComplexVector<T>) -> num_complex::Complex<T>;

    /// Absorbs `(r, d)`; returns the output defined by the recursion.
    fn update(
        &mut self,
        r: &crate::linalg::ComplexVector<T>,
        d: num_complex::Complex<T>,
    ) -> Result<num_complex::Complex<T>, EstimatorError>;

    /// Composite `JM`-length filter `w` with `x = w^H r`.
    fn composite(&self) -> crate::linalg::ComplexVector<T>;
}
