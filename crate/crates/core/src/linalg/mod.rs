//! Dense complex linear algebra shared by every estimator.
//!
//! Sizes here never exceed a few hundred, so everything is plain row-major
//! storage with cubic factorizations. Hermitian inputs are checked against a
//! tolerance of `1e-10 * max|a_ij|` and symmetrized before factorizing.

mod eig;
mod matrix;
mod update;

use num_complex::Complex;
use thiserror::Error;

pub use eig::{hermitian_eig, inv_sqrt, HermitianEig};
pub use matrix::{ComplexMatrix, ComplexVector};
pub use update::{hermitian_rank1_update_in_place, rank1_inverse_update, rank1_inverse_update_in_place};

use crate::scalar::{czero, Real};

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Denominators of the matrix inversion lemma below this magnitude are rejected.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {defect:e} exceeds {tol:e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("factorization failed at pivot {pivot}: value {value:e} is not positive")]
    SolveFailure { pivot: usize, value: f64 },
    #[error("matrix is not positive definite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("degenerate rank-1 update: denominator magnitude {denominator:e}")]
    DegenerateUpdate { denominator: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
}

pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Checks squareness and Hermitian symmetry, returning the symmetrized copy.
pub(crate) fn checked_hermitian<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch { expected: a.rows(), found: a.cols() });
    }
    let tol = T::lit(HERMITIAN_TOL) * a.max_abs();
    let defect = a.hermitian_defect();
    if defect > tol {
        return Err(LinalgError::NotHermitian { defect: to_f64(defect), tol: to_f64(tol) });
    }
    Ok(a.symmetrized())
}

/// Lower Cholesky factor `L` with `A = L L^H`.
pub(crate) fn cholesky<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>, LinalgError> {
    let n = a.rows();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut diag = a[(j, j)].re;
        for k in 0..j {
            diag -= l[(j, k)].norm_sqr();
        }
        if !(diag > T::zero()) {
            return Err(LinalgError::SolveFailure { pivot: j, value: to_f64(diag) });
        }
        let ljj = diag.sqrt();
        l[(j, j)] = Complex::new(ljj, T::zero());
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

fn cholesky_solve_in_place<T: Real>(l: &ComplexMatrix<T>, x: &mut [Complex<T>]) {
    let n = l.rows();
    for i in 0..n {
        let mut s = x[i];
        for k in 0..i {
            s -= l[(i, k)] * x[k];
        }
        x[i] = s / l[(i, i)].re;
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= l[(k, i)].conj() * x[k];
        }
        x[i] = s / l[(i, i)].re;
    }
}

/// Solves `A x = b` for Hermitian positive definite `A` by Cholesky.
pub fn hermitian_solve<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexVector<T>,
) -> Result<ComplexVector<T>, LinalgError> {
    if a.rows() != b.len() {
        return Err(LinalgError::DimensionMismatch { expected: a.rows(), found: b.len() });
    }
    let a = checked_hermitian(a)?;
    let l = cholesky(&a)?;
    let mut x = b.clone();
    cholesky_solve_in_place(&l, &mut x);
    Ok(x)
}

/// Inverse of a Hermitian positive definite matrix.
pub fn hermitian_inverse<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>, LinalgError> {
    let a = checked_hermitian(a)?;
    let n = a.rows();
    let l = cholesky(&a)?;
    let mut inv = ComplexMatrix::zeros(n, n);
    let mut col = vec![czero(); n];
    for j in 0..n {
        col.iter_mut().for_each(|z| *z = czero());
        col[j] = Complex::new(T::one(), T::zero());
        cholesky_solve_in_place(&l, &mut col);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    inv.symmetrize_in_place();
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn random_hpd(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
        let g = ComplexMatrix::from_fn(n, n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        g.adjoint_matmul(&g).add(&ComplexMatrix::scaled_identity(n, 0.5))
    }

    /// Gaussian elimination with partial pivoting on the dense system.
    fn lu_oracle(a: &ComplexMatrix<f64>, b: &ComplexVector<f64>) -> Vec<C> {
        let n = a.rows();
        let mut m: Vec<Vec<C>> = (0..n).map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i]);
            row
        }).collect();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| m[i][k].norm().partial_cmp(&m[j][k].norm()).unwrap()).unwrap();
            m.swap(k, p);
            for i in k + 1..n {
                let f = m[i][k] / m[k][k];
                for j in k..=n {
                    let t = m[k][j];
                    m[i][j] -= f * t;
                }
            }
        }
        let mut x = vec![c(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut s = m[i][n];
            for j in i + 1..n {
                s -= m[i][j] * x[j];
            }
            x[i] = s / m[i][i];
        }
        x
    }

    #[test]
    fn solve_identity() {
        let b = ComplexVector::from_vec(vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 0.0)]);
        let x = hermitian_solve(&ComplexMatrix::identity(3), &b).unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_diagonal() {
        let a = ComplexMatrix::from_diagonal(&[2.0, 4.0]);
        let b = ComplexVector::from_vec(vec![c(2.0, 0.0), c(4.0, 0.0)]);
        let x = hermitian_solve(&a, &b).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_matches_lu_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_hpd(6, &mut rng);
            let b = ComplexVector::from_fn(6, |_| c(rng.random::<f64>(), rng.random::<f64>()));
            let x = hermitian_solve(&a, &b).unwrap();
            let oracle = lu_oracle(&a, &b);
            for (u, v) in x.iter().zip(&oracle) {
                assert!((u - v).norm() <= 1e-9 * (1.0 + v.norm()));
            }
            let resid = a.mul_vec(&x).sub(&b).norm();
            assert!(resid <= 1e-9 * b.norm());
        }
    }

    #[test]
    fn solve_rejects_non_hermitian() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]);
        let b = ComplexVector::zeros(2);
        assert!(matches!(hermitian_solve(&a, &b), Err(LinalgError::NotHermitian { .. })));
    }

    #[test]
    fn solve_reports_failing_pivot() {
        let a = ComplexMatrix::from_diagonal(&[1.0, 0.0, 3.0]);
        let b = ComplexVector::zeros(3);
        match hermitian_solve(&a, &b) {
            Err(LinalgError::SolveFailure { pivot, .. }) => assert_eq!(pivot, 1),
            other => panic!("expected solve failure, got {other:?}"),
        }
        let indefinite = ComplexMatrix::from_diagonal(&[1.0, -2.0]);
        assert!(matches!(
            hermitian_solve(&indefinite, &ComplexVector::zeros(2)),
            Err(LinalgError::SolveFailure { pivot: 1, .. })
        ));
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_hpd(7, &mut rng);
        let inv = hermitian_inverse(&a).unwrap();
        let prod = a.matmul(&inv).sub(&ComplexMatrix::identity(7));
        assert!(prod.max_abs() < 1e-10);
    }
}
