use num_complex::Complex;

use super::RankDecision;
use crate::estimators::{truncated_wiener, Moments};
use crate::linalg::{hermitian_eig, ComplexVector};
use crate::Real;

/// Leave-one-out cross-validation over the window `samples` (oldest first).
///
/// Sample `l` has weight `α^{n-1-l}`. For every `l` the moments are deflated
/// by that sample, `R - a_l r r^H` and `p - a_l d* r`, and the rank-`d`
/// truncated Wiener filter of what is left predicts `d[l]`. The cost of rank
/// `d` is `Σ_l a_l |d[l] - w_{(l)}^H r[l]|²`. Ranks needing more samples than
/// the window holds (`n < d + 1`) score `+∞`.
pub fn select_rank_cv<T: Real>(
    samples: &[(ComplexVector<T>, Complex<T>)],
    alpha: T,
    d_min: usize,
    d_max: usize,
) -> RankDecision<T> {
    let n = samples.len();
    let mut costs = vec![T::zero(); d_max + 1 - d_min];
    if n == 0 {
        log::warn!("cross-validation on an empty window; all costs are zero");
        return RankDecision::argmin(d_min, costs);
    }
    let dim = samples[0].0.len();
    let mut full = Moments::new(dim, alpha);
    for (r, d) in samples {
        full.push(r, *d);
    }
    for (l, (r, d)) in samples.iter().enumerate() {
        let a = alpha.powi((n - 1 - l) as i32);
        let mut rm = full.r.clone();
        rm.add_outer(Complex::new(-a, T::zero()), r, r);
        rm.symmetrize_in_place();
        let mut pm = full.p.clone();
        pm.axpy(-(d.conj() * a), r);
        let eig = match hermitian_eig(&rm) {
            Ok(e) => e,
            Err(e) => {
                log::warn!("cross-validation skipped sample {l}: {e}");
                continue;
            }
        };
        for (j, cost) in costs.iter_mut().enumerate() {
            let w = truncated_wiener(&eig, &pm, d_min + j);
            *cost += (*d - w.dot(r)).norm_sqr() * a;
        }
    }
    for (j, cost) in costs.iter_mut().enumerate() {
        if n < d_min + j + 1 {
            *cost = T::infinity();
        }
    }
    RankDecision::argmin(d_min, costs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::filter_cost;
    use crate::linalg::ComplexMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn noise(rng: &mut ChaCha8Rng) -> C {
        C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    }

    /// Refits every left-out filter from a fresh direct sum.
    fn literal_cv(samples: &[(ComplexVector<f64>, C)], alpha: f64, d: usize) -> f64 {
        let n = samples.len();
        let dim = samples[0].0.len();
        let mut cost = 0.0;
        for l in 0..n {
            let mut r = ComplexMatrix::zeros(dim, dim);
            let mut p = ComplexVector::zeros(dim);
            for (m, (x, dm)) in samples.iter().enumerate() {
                if m != l {
                    let a = alpha.powi((n - 1 - m) as i32);
                    r.add_outer(C::new(a, 0.0), x, x);
                    p.axpy(dm.conj() * a, x);
                }
            }
            let w = truncated_wiener(&hermitian_eig(&r).unwrap(), &p, d);
            cost += alpha.powi((n - 1 - l) as i32) * (samples[l].1 - w.dot(&samples[l].0)).norm_sqr();
        }
        cost
    }

    fn random_window(n: usize, dim: usize, rng: &mut ChaCha8Rng) -> Vec<(ComplexVector<f64>, C)> {
        let w = ComplexVector::from_fn(dim, |_| noise(rng));
        (0..n)
            .map(|_| {
                let r = ComplexVector::from_fn(dim, |_| noise(rng));
                let d = w.dot(&r) + noise(rng) * 0.5;
                (r, d)
            })
            .collect()
    }

    #[test]
    fn deflation_matches_literal_refits() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [10, 25, 50] {
            let samples = random_window(n, 6, &mut rng);
            let dec = select_rank_cv(&samples, 0.95, 1, 6);
            for d in 1..=6 {
                let lit = literal_cv(&samples, 0.95, d);
                assert!((dec.score(d) - lit).abs() < 1e-8 * (1.0 + lit), "n {n} d {d}");
            }
        }
    }

    #[test]
    fn single_candidate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let samples = random_window(20, 5, &mut rng);
        assert_eq!(select_rank_cv(&samples, 0.99, 3, 3).d_opt, 3);
    }

    #[test]
    fn noiseless_rank_two_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let basis = [ComplexVector::from_fn(6, |_| noise(&mut rng)), ComplexVector::from_fn(6, |_| noise(&mut rng))];
        let w = ComplexVector::from_fn(6, |_| noise(&mut rng));
        let samples: Vec<_> = (0..30)
            .map(|_| {
                let mut r = basis[0].scale(noise(&mut rng));
                r.axpy(noise(&mut rng), &basis[1]);
                let d = w.dot(&r);
                (r, d)
            })
            .collect();
        let dec = select_rank_cv(&samples, 0.99, 1, 5);
        assert!(dec.score(2) < 1e-6);
        assert!(dec.score(1) > 1e-3);
        assert_eq!(dec.d_opt, 2);
    }

    #[test]
    fn leave_one_out_error_dominates_training_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut wins = 0;
        for _ in 0..100 {
            // d unrelated to r
            let samples: Vec<_> =
                (0..30).map(|_| (ComplexVector::from_fn(5, |_| noise(&mut rng)), noise(&mut rng))).collect();
            let alpha = 0.98;
            let dec = select_rank_cv(&samples, alpha, 1, 5);
            let mut m = Moments::new(5, alpha);
            for (r, d) in &samples {
                m.push(r, *d);
            }
            let eig = hermitian_eig(&m.r).unwrap();
            let ok = (1..=5).all(|d| {
                let w = truncated_wiener(&eig, &m.p, d);
                dec.score(d) >= filter_cost(&m.r, &m.p, m.sigma_d2, &w)
            });
            wins += ok as usize;
        }
        assert!(wins >= 95, "{wins}/100");
    }

    #[test]
    fn short_window_skips_large_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples = random_window(3, 6, &mut rng);
        let dec = select_rank_cv(&samples, 0.99, 1, 5);
        assert!(dec.score(3).is_infinite() && dec.score(2).is_finite());
        assert!(dec.d_opt <= 2);
    }
}
