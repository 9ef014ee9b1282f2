use num_complex::Complex;

use super::{checked_hermitian, to_f64, ComplexMatrix, LinalgError};
use crate::scalar::{creal, Real};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Clone, Debug)]
pub struct HermitianEig<T> {
    pub eigenvalues: Vec<T>,
    /// Column `j` is the unit eigenvector of `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix<T>,
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
pub fn hermitian_eig<T: Real>(a: &ComplexMatrix<T>) -> Result<HermitianEig<T>, LinalgError> {
    let mut a = checked_hermitian(a)?;
    let n = a.rows();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let eps = T::epsilon();

    let off_diag = |m: &ComplexMatrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                s += m[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    };

    let mut converged = scale == T::zero();
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off = off_diag(&a);
        if off <= eps * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= eps * eps * scale {
                    continue;
                }
                // Reduce to a real symmetric 2x2 problem via the phase of a_pq.
                let phase = apq / r;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (T::lit(2.0) * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                let w_pp = creal(cs);
                let w_pq = creal(sn);
                let w_qp = phase.conj() * (-sn);
                let w_qq = phase.conj() * cs;
                rotate(&mut a, p, q, w_pp, w_pq, w_qp, w_qq);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * w_pp + vkq * w_qp;
                    v[(k, q)] = vkp * w_pq + vkq * w_qq;
                }
                a[(p, q)] = creal(T::zero());
                a[(q, p)] = creal(T::zero());
            }
        }
    }
    if !converged {
        let off = off_diag(&a);
        if off > T::lit(1e3) * eps * scale {
            return Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS, residual: to_f64(off) });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.partial_cmp(&a[(i, i)].re).unwrap_or(std::cmp::Ordering::Equal));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig { eigenvalues, eigenvectors })
}

/// `A <- W^H A W` where `W` acts on columns `p`, `q` only.
fn rotate<T: Real>(
    a: &mut ComplexMatrix<T>,
    p: usize,
    q: usize,
    w_pp: Complex<T>,
    w_pq: Complex<T>,
    w_qp: Complex<T>,
    w_qq: Complex<T>,
) {
    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * w_pp + akq * w_qp;
        a[(k, q)] = akp * w_pq + akq * w_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = w_pp.conj() * apk + w_qp.conj() * aqk;
        a[(q, k)] = w_pq.conj() * apk + w_qq.conj() * aqk;
    }
}

/// Hermitian positive definite inverse square root `A^{-1/2}`.
pub fn inv_sqrt<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>, LinalgError> {
    let eig = hermitian_eig(a)?;
    let n = a.rows();
    let min = eig.eigenvalues.last().copied().unwrap_or_else(T::one);
    if !(min > T::zero()) {
        return Err(LinalgError::NotPositiveDefinite { min_eigenvalue: to_f64(min) });
    }
    let v = &eig.eigenvectors;
    let inv_roots: Vec<T> = eig.eigenvalues.iter().map(|&l| T::one() / l.sqrt()).collect();
    let mut s = ComplexMatrix::from_fn(n, n, |i, j| {
        let mut acc = creal(T::zero());
        for (k, &w) in inv_roots.iter().enumerate() {
            acc += v[(i, k)] * v[(j, k)].conj() * w;
        }
        acc
    });
    s.symmetrize_in_place();
    Ok(s)
}
