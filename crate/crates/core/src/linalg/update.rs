use num_complex::Complex;

use super::{to_f64, ComplexMatrix, ComplexVector, LinalgError, DEGENERATE_DENOMINATOR};
use crate::scalar::{czero, Real};

/// Matrix inversion lemma step shared by every recursion in the crate.
///
/// With `P_prev` the inverse of some matrix `A`, returns the gain
/// `λ⁻¹ P_prev u / (1 + λ⁻¹ v^H P_prev u)` and `P_next`, the inverse of
/// `λ A + u v^H`.
pub fn rank1_inverse_update<T: Real>(
    p_prev: &ComplexMatrix<T>,
    u: &ComplexVector<T>,
    v: &ComplexVector<T>,
    lambda: T,
) -> Result<(ComplexVector<T>, ComplexMatrix<T>), LinalgError> {
    let mut p = p_prev.clone();
    let gain = rank1_inverse_update_in_place(&mut p, u, v, lambda)?;
    Ok((gain, p))
}

/// In-place form of [`rank1_inverse_update`]; returns the gain.
pub fn rank1_inverse_update_in_place<T: Real>(
    p: &mut ComplexMatrix<T>,
    u: &ComplexVector<T>,
    v: &ComplexVector<T>,
    lambda: T,
) -> Result<ComplexVector<T>, LinalgError> {
    let n = p.rows();
    if u.len() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, found: u.len() });
    }
    if v.len() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, found: v.len() });
    }
    let inv_lambda = T::one() / lambda;
    let pu = p.mul_vec(u);
    // v^H P as a row
    let mut vhp = vec![czero::<T>(); n];
    for (i, vi) in v.iter().enumerate() {
        let vc = vi.conj();
        for (o, a) in vhp.iter_mut().zip(p.row(i)) {
            *o += vc * a;
        }
    }
    let den = Complex::new(T::one(), T::zero()) + v.dot(&pu) * inv_lambda;
    if den.norm() < T::lit(DEGENERATE_DENOMINATOR) {
        return Err(LinalgError::DegenerateUpdate { denominator: to_f64(den.norm()) });
    }
    let gain = pu.scale(Complex::new(inv_lambda, T::zero()) / den);
    for i in 0..n {
        let gi = gain[i];
        for (a, r) in p.row_mut(i).iter_mut().zip(&vhp) {
            *a = (*a - gi * r) * inv_lambda;
        }
    }
    Ok(gain)
}

/// Hermitian fast path of [`rank1_inverse_update_in_place`] with `u = v = x`.
///
/// Uses `x^H P = (P x)^H` and writes an exactly Hermitian result, so the
/// recursion never accumulates asymmetry.
pub fn hermitian_rank1_update_in_place<T: Real>(
    p: &mut ComplexMatrix<T>,
    x: &ComplexVector<T>,
    lambda: T,
) -> Result<ComplexVector<T>, LinalgError> {
    let n = p.rows();
    if x.len() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, found: x.len() });
    }
    let inv_lambda = T::one() / lambda;
    let px = p.mul_vec(x);
    let den = T::one() + x.dot(&px).re * inv_lambda;
    if den.abs() < T::lit(DEGENERATE_DENOMINATOR) {
        return Err(LinalgError::DegenerateUpdate { denominator: to_f64(den.abs()) });
    }
    let gain = px.scale(Complex::new(inv_lambda / den, T::zero()));
    for i in 0..n {
        let gi = gain[i];
        for j in i..n {
            let val = (p[(i, j)] - gi * px[j].conj()) * inv_lambda;
            if i == j {
                p[(i, i)] = Complex::new(val.re, T::zero());
            } else {
                p[(i, j)] = val;
                p[(j, i)] = val.conj();
            }
        }
    }
    Ok(gain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_inverse;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn rel_err(a: &ComplexMatrix<f64>, b: &ComplexMatrix<f64>) -> f64 {
        a.sub(b).frobenius_norm() / b.frobenius_norm()
    }

    #[test]
    fn scalar_sherman_morrison() {
        let e1 = ComplexVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let (gain, p) = rank1_inverse_update(&ComplexMatrix::identity(2), &e1, &e1, 1.0).unwrap();
        assert_eq!(gain, ComplexVector::from_vec(vec![c(0.5, 0.0), c(0.0, 0.0)]));
        assert_eq!(p, ComplexMatrix::from_diagonal(&[0.5, 1.0]));
    }

    #[test]
    fn zero_vector_only_rescales() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p0 = ComplexMatrix::from_fn(3, 3, |_, _| c(rng.random(), rng.random())).symmetrized();
        let z = ComplexVector::zeros(3);
        let (gain, p1) = rank1_inverse_update(&p0, &z, &z, 0.998).unwrap();
        assert_eq!(gain, z);
        assert!(p1.sub(&p0.scale_real(1.0 / 0.998)).max_abs() < 1e-15);
    }

    #[test]
    fn degenerate_denominator_is_rejected() {
        // P = I, u = e1, v = -e1 with λ = 1 gives 1 + v^H P u = 0.
        let u = ComplexVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let v = ComplexVector::from_vec(vec![c(-1.0, 0.0), c(0.0, 0.0)]);
        let err = rank1_inverse_update(&ComplexMatrix::identity(2), &u, &v, 1.0).unwrap_err();
        assert!(matches!(err, LinalgError::DegenerateUpdate { .. }));
    }

    #[test]
    fn single_step_matches_direct_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 5;
        let g = ComplexMatrix::from_fn(n, n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let a = g.adjoint_matmul(&g).add(&ComplexMatrix::identity(n));
        let p = hermitian_inverse(&a).unwrap();
        let u = ComplexVector::from_fn(n, |_| c(rng.random(), rng.random()));
        let v = ComplexVector::from_fn(n, |_| c(rng.random(), rng.random()));
        let lambda = 0.9;
        let (_, p_next) = rank1_inverse_update(&p, &u, &v, lambda).unwrap();
        let mut direct = a.scale_real(lambda);
        direct.add_outer(c(1.0, 0.0), &u, &v);
        let prod = p_next.matmul(&direct);
        assert!(prod.sub(&ComplexMatrix::identity(n)).max_abs() < 1e-10);
    }

    #[test]
    fn thousand_updates_track_direct_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 4;
        let lambda = 0.998;
        let delta = 0.01;
        let mut p = ComplexMatrix::scaled_identity(n, 1.0 / delta);
        let mut p_fast = p.clone();
        let mut gram = ComplexMatrix::scaled_identity(n, delta);
        for _ in 0..1000 {
            let x = ComplexVector::from_fn(n, |_| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            let (_, next) = rank1_inverse_update(&p, &x, &x, lambda).unwrap();
            p = next;
            hermitian_rank1_update_in_place(&mut p_fast, &x, lambda).unwrap();
            gram = gram.scale_real(lambda);
            gram.add_outer(c(1.0, 0.0), &x, &x);
        }
        let direct = hermitian_inverse(&gram).unwrap();
        assert!(rel_err(&p, &direct) < 1e-8);
        assert!(rel_err(&p_fast, &direct) < 1e-8);
    }
}
