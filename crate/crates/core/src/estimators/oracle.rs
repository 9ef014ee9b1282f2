use num_complex::Complex;

use super::EstimatorError;
use crate::linalg::{hermitian_eig, hermitian_solve, inv_sqrt, ComplexMatrix, ComplexVector, HermitianEig};
use crate::signal::Scenario;
use crate::Real;

/// Rank-`D` Wiener filter from known statistics.
///
/// With `S = R^{-1/2}` and `R = V Λ V^H`, the whitened cross-correlation has
/// coordinates `c = V^H S p`. The `D` coordinates of largest magnitude are kept
/// and the filter is `w = S V c_D`.
pub fn optimal_reduced_rank<T: Real>(
    r: &ComplexMatrix<T>,
    p: &ComplexVector<T>,
    rank: usize,
) -> Result<ComplexVector<T>, EstimatorError> {
    let n = r.rows();
    if p.len() != n {
        return Err(EstimatorError::Dimension { expected: n, found: p.len() });
    }
    if rank == 0 || rank > n {
        return Err(EstimatorError::InvalidRank { rank, max: n });
    }
    let s = inv_sqrt(r)?;
    let v = hermitian_eig(r)?.eigenvectors;
    let mut c = v.adjoint_mul_vec(&s.mul_vec(p));
    for j in dominant(&c, n).into_iter().skip(rank) {
        c[j] = Complex::new(T::zero(), T::zero());
    }
    Ok(s.mul_vec(&v.mul_vec(&c)))
}

/// Rank-`D` Wiener filter on a precomputed eigendecomposition that may be
/// only semidefinite: eigen-directions with `λ_j ≤ 1e-12 λ_max` are never used.
pub fn truncated_wiener<T: Real>(eig: &HermitianEig<T>, p: &ComplexVector<T>, rank: usize) -> ComplexVector<T> {
    let n = p.len();
    let floor = T::lit(1e-12) * eig.eigenvalues.first().copied().unwrap_or_else(T::zero).max(T::zero());
    let v = &eig.eigenvectors;
    let proj = v.adjoint_mul_vec(p);
    let mut c = ComplexVector::from_fn(n, |j| {
        let l = eig.eigenvalues[j];
        if l > floor && l > T::zero() {
            proj[j] / l.sqrt()
        } else {
            Complex::new(T::zero(), T::zero())
        }
    });
    for j in dominant(&c, n).into_iter().skip(rank) {
        c[j] = Complex::new(T::zero(), T::zero());
    }
    for (j, cj) in c.iter_mut().enumerate() {
        if cj.norm_sqr() > T::zero() {
            *cj = *cj / eig.eigenvalues[j].sqrt();
        }
    }
    v.mul_vec(&c)
}

/// Indices sorted by decreasing magnitude, ties by index.
fn dominant<T: Real>(c: &ComplexVector<T>, n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| c[b].norm_sqr().partial_cmp(&c[a].norm_sqr()).unwrap_or(std::cmp::Ordering::Equal));
    idx
}

/// Ensemble `(R, p)` of the desired user at symbol `i` given the realization:
/// `R = Σ_k A_k² (p̄_k p̄_k^H + p_k p_k^H + p̃_k p̃_k^H) + σ² I`, `p = A_0 p_0`.
pub fn genie_moments(scenario: &Scenario, i: usize) -> (ComplexMatrix<f64>, ComplexVector<f64>) {
    let dim = scenario.dim();
    let one = Complex::new(1.0, 0.0);
    let mut r = ComplexMatrix::scaled_identity(dim, scenario.noise_variance);
    let mut p = ComplexVector::zeros(dim);
    for k in 0..scenario.config.users {
        let a = scenario.streams.amplitudes[k];
        let vs = scenario.signature_vectors(k, i as i64);
        for v in &vs {
            r.add_outer(one * (a * a), v, v);
        }
        if k == 0 {
            p = vs[1].scale(one * a);
        }
    }
    r.symmetrize_in_place();
    (r, p)
}

/// Full-rank MMSE filter `R⁻¹ p` with exact channel, powers and noise level.
/// Without noise `R` can be singular; the minimum-norm solution is used then.
pub fn mmse_genie(scenario: &Scenario, i: usize) -> Result<ComplexVector<f64>, EstimatorError> {
    let (r, p) = genie_moments(scenario, i);
    match hermitian_solve(&r, &p) {
        Ok(w) => Ok(w),
        Err(_) => Ok(truncated_wiener(&hermitian_eig(&r)?, &p, r.rows())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{filter_cost, FullRankRlsState};
    use crate::signal::SystemConfig;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn random_pd(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
        let a = ComplexMatrix::from_fn(n, n, |_, _| C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        a.adjoint_matmul(&a).add(&ComplexMatrix::scaled_identity(n, 0.1))
    }

    #[test]
    fn full_dimension_is_the_wiener_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = random_pd(6, &mut rng);
        let p = ComplexVector::from_fn(6, |_| C::new(rng.random(), rng.random()));
        let w = optimal_reduced_rank(&r, &p, 6).unwrap();
        assert!(w.sub(&hermitian_solve(&r, &p).unwrap()).max_abs() < 1e-8);
    }

    #[test]
    fn white_data_returns_p_when_rank_spans_it() {
        let r = ComplexMatrix::<f64>::identity(5);
        let mut p = ComplexVector::zeros(5);
        p[1] = C::new(2.0, -1.0);
        p[3] = C::new(0.5, 0.5);
        for d in 2..=5 {
            let w = optimal_reduced_rank(&r, &p, d).unwrap();
            assert!(w.sub(&p).max_abs() < 1e-12);
        }
        let w1 = optimal_reduced_rank(&r, &p, 1).unwrap();
        assert!((w1[1] - p[1]).norm() < 1e-12 && w1[3].norm() < 1e-12);
    }

    #[test]
    fn rank_one_signal_needs_one_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = ComplexVector::from_fn(8, |_| C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let mut r = ComplexMatrix::scaled_identity(8, 0.01);
        r.add_outer(C::new(1.0, 0.0), &s, &s);
        let p = s.clone();
        let full = 1.0 - p.dot(&hermitian_solve(&r, &p).unwrap()).re;
        let w = optimal_reduced_rank(&r, &p, 1).unwrap();
        assert!((filter_cost(&r, &p, 1.0, &w) - full).abs() < 1e-6);
    }

    #[test]
    fn truncated_wiener_agrees_on_definite_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = random_pd(6, &mut rng);
        let p = ComplexVector::from_fn(6, |_| C::new(rng.random(), rng.random()));
        let eig = hermitian_eig(&r).unwrap();
        for d in 1..=6 {
            let a = truncated_wiener(&eig, &p, d);
            let b = optimal_reduced_rank(&r, &p, d).unwrap();
            assert!(a.sub(&b).max_abs() < 1e-8, "rank {d}");
        }
    }

    #[test]
    fn truncated_wiener_ignores_null_space() {
        let mut r = ComplexMatrix::<f64>::zeros(3, 3);
        r[(0, 0)] = C::new(2.0, 0.0);
        let p = ComplexVector::from_vec(vec![C::new(1.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0)]);
        let w = truncated_wiener(&hermitian_eig(&r).unwrap(), &p, 3);
        assert!((w[0] - C::new(0.5, 0.0)).norm() < 1e-12);
        assert!(w[1].norm() < 1e-12 && w[2].norm() < 1e-12);
    }

    #[test]
    fn genie_single_user_without_noise_is_matched_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cfg = SystemConfig { users: 1, ebn0_db: 120.0, ..Default::default() };
        let sc = Scenario::draw(&cfg, 10, &mut rng).unwrap();
        let w = mmse_genie(&sc, 5).unwrap();
        let p0 = sc.signature_vectors(0, 5)[1].clone();
        let cos = w.dot(&p0).norm() / (w.norm() * p0.norm());
        assert!(cos > 0.99, "alignment {cos}");
    }

    #[test]
    fn full_rank_rls_converges_to_genie() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = SystemConfig { users: 4, fdt: 0.0, ebn0_db: 15.0, ..Default::default() };
        let n = 5000;
        let sc = Scenario::draw(&cfg, n, &mut rng).unwrap();
        let stream = sc.generate(&mut rng);
        let mut rls = FullRankRlsState::new(sc.dim(), 1.0, 0.01);
        for (i, r) in stream.iter().enumerate() {
            rls.step(r, sc.desired(i)).unwrap();
        }
        let genie = mmse_genie(&sc, n - 1).unwrap();
        let err = rls.w.sub(&genie).max_abs();
        assert!(err < 5e-2, "deviation {err}, genie scale {}", genie.max_abs());
    }
}
