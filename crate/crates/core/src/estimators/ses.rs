use super::EstimatorError;
use crate::linalg::{hermitian_eig, hermitian_solve, to_f64, ComplexMatrix, ComplexVector, LinalgError};
use crate::Real;

/// Sum of error squares of the best reduced-rank filter for a given projection:
/// `σ_d² - p^H T (T^H R T)⁻¹ T^H p`.
pub fn ses<T: Real>(
    r: &ComplexMatrix<T>,
    p: &ComplexVector<T>,
    sigma_d2: T,
    t: &ComplexMatrix<T>,
) -> Result<T, EstimatorError> {
    if t.rows() != r.rows() || p.len() != r.rows() {
        return Err(EstimatorError::Dimension { expected: r.rows(), found: t.rows().min(p.len()) });
    }
    let rt = r.matmul(t);
    let mut r_bar = t.adjoint_matmul(&rt);
    r_bar.symmetrize_in_place();
    let p_bar = t.adjoint_mul_vec(p);
    ses_reduced(&r_bar, &p_bar, sigma_d2)
}

/// SES from reduced-rank quantities: `σ_d² - p̄^H R̄⁻¹ p̄`.
pub fn ses_reduced<T: Real>(r_bar: &ComplexMatrix<T>, p_bar: &ComplexVector<T>, sigma_d2: T) -> Result<T, EstimatorError> {
    match hermitian_solve(r_bar, p_bar) {
        Ok(w) => Ok(sigma_d2 - p_bar.dot(&w).re),
        Err(LinalgError::SolveFailure { .. }) => {
            let min = hermitian_eig(r_bar)?.eigenvalues.last().copied().unwrap_or_else(T::zero);
            Err(EstimatorError::SingularReducedGram { min_eigenvalue: to_f64(min) })
        }
        Err(e) => Err(e.into()),
    }
}

/// Weighted squared error of an arbitrary composite filter `u`:
/// `σ_d² - 2 Re(u^H p) + u^H R u`.
pub fn filter_cost<T: Real>(r: &ComplexMatrix<T>, p: &ComplexVector<T>, sigma_d2: T, u: &ComplexVector<T>) -> T {
    let ru = r.mul_vec(u);
    sigma_d2 - T::lit(2.0) * u.dot(p).re + u.dot(&ru).re
}
