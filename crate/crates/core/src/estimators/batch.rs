use num_complex::Complex;

use super::{ses_reduced, BatchDataset, EstimatorError};
use crate::linalg::{hermitian_eig, hermitian_solve, to_f64, ComplexMatrix, ComplexVector, LinalgError};
use crate::Real;

/// Stopping rule of the alternating solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BatchOptions {
    pub max_iters: usize,
    /// Relative SES change below which the alternation stops.
    pub tol: f64,
}

impl Default for BatchOptions {
    fn default() -> Self {
        Self { max_iters: 100, tol: 1e-8 }
    }
}

/// Result of [`jio_batch_ls`].
#[derive(Clone, Debug, PartialEq)]
pub struct LsSolution<T> {
    pub t: ComplexMatrix<T>,
    pub wbar: ComplexVector<T>,
    pub ses: T,
    pub iterations: usize,
    /// SES after every completed `(T_D, w̄)` alternation.
    pub ses_history: Vec<T>,
    /// `||T_D w̄||` after every alternation.
    pub composite_norms: Vec<T>,
    /// Ridge added to `R̂`, zero when none was needed.
    pub ridge: T,
}

/// Condition number above which `R̂` gets a ridge.
const RIDGE_CONDITION: f64 = 1e12;

/// Weight of the initial-condition term in the `R_w̄` and `P_D` accumulations,
/// relative to `||w̄||²`.
const PROXIMAL_WEIGHT: f64 = 1e-12;

/// Joint iterative LS design of `(T_D, w̄)` on a finite record.
///
/// Alternates `T_D = R⁻¹ P_D R_w̄⁻¹` and `w̄ = R̄⁻¹ p̄` from `T_D = [I_D; 0]`,
/// `w̄ = e_1`. Both accumulations carry the regularizing initial term
/// (`R_w̄ = w̄ w̄^H + ε I`, `P_D = p w̄^H + ε R T_D`), which makes the
/// projection step the smallest change of `T_D` that minimizes the cost for
/// the current `w̄`:
///
/// `T_D ← T_D + (R⁻¹ p - T_D w̄) w̄^H / (ε + ||w̄||²)`.
pub fn jio_batch_ls<T: Real>(
    data: &BatchDataset<T>,
    rank: usize,
    opts: BatchOptions,
) -> Result<LsSolution<T>, EstimatorError> {
    let dim = data.dim();
    if rank == 0 || rank > dim {
        return Err(EstimatorError::InvalidRank { rank, max: dim });
    }
    let m = data.moments();
    let (r, ridge) = regularized(&m.r)?;
    let wiener = hermitian_solve(&r, &m.p)?;

    let mut t = ComplexMatrix::from_fn(dim, rank, |i, j| {
        if i == j {
            Complex::new(T::one(), T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    let mut wbar = ComplexVector::basis(rank, 0);
    let mut history = Vec::new();
    let mut norms = Vec::new();
    let tol = T::lit(opts.tol);
    let mut iterations = 0;

    for iter in 1..=opts.max_iters {
        let wn = wbar.norm_sqr();
        if wn == T::zero() {
            return Err(EstimatorError::ZeroFilter { iteration: iter });
        }
        // projection step
        let eps = T::lit(PROXIMAL_WEIGHT) * wn;
        let residual = wiener.sub(&t.mul_vec(&wbar));
        t.add_outer(Complex::new(T::one() / (eps + wn), T::zero()), &residual, &wbar);

        // reduced-rank filter step
        let mut r_bar = t.adjoint_matmul(&r.matmul(&t));
        r_bar.symmetrize_in_place();
        let p_bar = t.adjoint_mul_vec(&m.p);
        wbar = match hermitian_solve(&r_bar, &p_bar) {
            Ok(w) => w,
            Err(LinalgError::SolveFailure { .. }) => {
                let min = hermitian_eig(&r_bar)?.eigenvalues.last().copied().unwrap_or_else(T::zero);
                return Err(EstimatorError::SingularReducedGram { min_eigenvalue: to_f64(min) });
            }
            Err(e) => return Err(e.into()),
        };
        let ses = ses_reduced(&r_bar, &p_bar, m.sigma_d2)?;
        norms.push(t.mul_vec(&wbar).norm());
        iterations = iter;
        let done = history
            .last()
            .is_some_and(|&prev: &T| (prev - ses).abs() < tol * prev.abs().max(T::min_positive_value()));
        history.push(ses);
        if done {
            break;
        }
    }

    Ok(LsSolution {
        t,
        wbar,
        ses: *history.last().expect("at least one iteration"),
        iterations,
        ses_history: history,
        composite_norms: norms,
        ridge,
    })
}

/// Adds `1e-6 · trace(R)/JM · I` when `R` is too ill-conditioned to invert.
fn regularized<T: Real>(r: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, T), EstimatorError> {
    let eig = hermitian_eig(r)?;
    let max = eig.eigenvalues.first().copied().unwrap_or_else(T::zero);
    let min = eig.eigenvalues.last().copied().unwrap_or_else(T::zero);
    let condition = if min > T::zero() { max / min } else { T::infinity() };
    if condition <= T::lit(RIDGE_CONDITION) {
        return Ok((r.clone(), T::zero()));
    }
    let ridge = T::lit(1e-6) * r.trace().re / T::from_count(r.rows());
    let ridged = r.add(&ComplexMatrix::scaled_identity(r.rows(), ridge));
    let min_ridged = min + ridge;
    if !(ridge > T::zero()) || !(min_ridged > T::zero()) {
        return Err(EstimatorError::SingularCorrelation { condition: to_f64(condition) });
    }
    Ok((ridged, ridge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{optimal_reduced_rank, ses};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn gauss(rng: &mut ChaCha8Rng) -> C {
        use rand_distr::StandardNormal;
        C::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) * std::f64::consts::FRAC_1_SQRT_2
    }

    /// Four strong sources in white noise; `d` is source 0.
    fn subspace_data(dim: usize, len: usize, rng: &mut ChaCha8Rng) -> BatchDataset<f64> {
        let sources: Vec<ComplexVector<f64>> = (0..4).map(|_| ComplexVector::from_fn(dim, |_| gauss(rng))).collect();
        let samples = (0..len)
            .map(|_| {
                let b: Vec<C> = (0..4).map(|_| gauss(rng)).collect();
                let mut r = ComplexVector::from_fn(dim, |_| gauss(rng) * 0.1);
                for (s, bk) in sources.iter().zip(&b) {
                    r.axpy(*bk, s);
                }
                (r, b[0])
            })
            .collect();
        BatchDataset::new(samples, 0.998).unwrap()
    }

    fn full_rank_ses(data: &BatchDataset<f64>) -> f64 {
        let m = data.moments();
        m.sigma_d2 - m.p.dot(&hermitian_solve(&m.r, &m.p).unwrap()).re
    }

    #[test]
    fn full_dimension_matches_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let data = subspace_data(8, 200, &mut rng);
        let sol = jio_batch_ls(&data, 8, BatchOptions::default()).unwrap();
        let full = full_rank_ses(&data);
        assert!((sol.ses - full).abs() <= 1e-8 * full);
    }

    #[test]
    fn rank_one_is_a_scaled_full_rank_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let data = subspace_data(8, 200, &mut rng);
        let sol = jio_batch_ls(&data, 1, BatchOptions::default()).unwrap();
        let full = full_rank_ses(&data);
        assert!((sol.ses - full).abs() <= 1e-6 * full);
    }

    #[test]
    fn reaches_truncated_wiener_on_dominant_subspace() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let data = subspace_data(12, 600, &mut rng);
        let m = data.moments();
        let sol = jio_batch_ls(&data, 4, BatchOptions::default()).unwrap();
        let w_opt = optimal_reduced_rank(&m.r, &m.p, 4).unwrap();
        let oracle = crate::estimators::filter_cost(&m.r, &m.p, m.sigma_d2, &w_opt);
        assert!(sol.iterations <= 50);
        assert!((sol.ses - oracle).abs() <= 0.05 * oracle, "jio {} oracle {}", sol.ses, oracle);
        assert!(sol.ses - oracle <= 0.05 * m.sigma_d2);
    }

    #[test]
    fn ses_never_increases_and_norms_stay_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for rank in 1..=6 {
            let data = subspace_data(10, 300, &mut rng);
            let opts = BatchOptions { max_iters: 100, tol: 0.0 };
            let sol = jio_batch_ls(&data, rank, opts).unwrap();
            assert_eq!(sol.iterations, 100);
            for w in sol.ses_history.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-12, "SES rose from {} to {}", w[0], w[1]);
            }
            let max = sol.composite_norms.iter().cloned().fold(0.0, f64::max);
            let min = sol.composite_norms.iter().cloned().fold(f64::INFINITY, f64::min);
            assert!(min > 0.0 && max / min < 1e3);
            assert!(sol.composite_norms.iter().all(|n| n.is_finite()));
        }
    }

    #[test]
    fn reported_ses_matches_projection_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let data = subspace_data(8, 100, &mut rng);
        let m = data.moments();
        let sol = jio_batch_ls(&data, 3, BatchOptions::default()).unwrap();
        let direct = ses(&m.r, &m.p, m.sigma_d2, &sol.t).unwrap();
        assert!((direct - sol.ses).abs() < 1e-9 * m.sigma_d2);
    }

    #[test]
    fn rank_deficient_data_gets_a_ridge() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        // three samples in six dimensions
        let samples = (0..3)
            .map(|_| (ComplexVector::from_fn(6, |_| C::new(rng.random(), rng.random())), C::new(1.0, 0.0)))
            .collect();
        let data = BatchDataset::new(samples, 1.0).unwrap();
        let sol = jio_batch_ls(&data, 2, BatchOptions::default()).unwrap();
        assert!(sol.ridge > 0.0);
        assert!(sol.ses.is_finite());
    }

    #[test]
    fn invalid_rank_and_zero_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let data = subspace_data(5, 50, &mut rng);
        assert!(matches!(jio_batch_ls(&data, 0, BatchOptions::default()), Err(EstimatorError::InvalidRank { .. })));
        assert!(matches!(jio_batch_ls(&data, 6, BatchOptions::default()), Err(EstimatorError::InvalidRank { .. })));
        // d = 0 makes p = 0 so w̄ collapses after the first alternation
        let zero_d = BatchDataset::new(data.samples.iter().map(|(r, _)| (r.clone(), C::new(0.0, 0.0))).collect(), 0.998)
            .unwrap();
        assert!(matches!(
            jio_batch_ls(&zero_d, 2, BatchOptions { max_iters: 5, tol: 0.0 }),
            Err(EstimatorError::ZeroFilter { iteration: 2 })
        ));
    }
}
