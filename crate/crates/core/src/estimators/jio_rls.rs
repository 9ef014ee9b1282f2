use std::fmt;

use num_complex::Complex;

use super::{AdaptiveFilter, EstimatorError};
use crate::linalg::{hermitian_rank1_update_in_place, ComplexMatrix, ComplexVector, LinalgError};
use crate::Real;

/// Recursion carriers of the joint iterative reduced-rank RLS.
#[derive(Clone, Debug, PartialEq)]
pub struct JioRlsState<T> {
    /// Projection `T_D`, `JM x D`.
    pub t: ComplexMatrix<T>,
    /// Reduced-rank filter `w̄`, length `D`.
    pub wbar: ComplexVector<T>,
    /// `R⁻¹[i]`, `JM x JM`.
    pub p: ComplexMatrix<T>,
    /// `R_w̄⁻¹`, `D x D`.
    pub q: ComplexMatrix<T>,
    /// `R̄⁻¹[i]`, `D x D`.
    pub phi: ComplexMatrix<T>,
    pub lambda: T,
    pub steps: u64,
    /// `Σ λ^{i-l}`, the total weight of the `R_w̄` accumulation.
    pub weight: T,
    /// Feeds `T_D` with `R_w̄ / Σ λ^{i-l}`, the weighted average of `w̄ w̄^H`,
    /// so that `T_D w̄` has the scale of `R⁻¹ p`. When off, the raw sum is used.
    pub average_rw: bool,
}

impl<T: Real> JioRlsState<T> {
    /// `T_D(0) = [I_D; 0]`, `w̄(0) = e_1` and all inverses at `δ⁻¹ I`.
    pub fn new(dim: usize, rank: usize, lambda: T, delta: T) -> Result<Self, EstimatorError> {
        if rank == 0 || rank > dim {
            return Err(EstimatorError::InvalidRank { rank, max: dim });
        }
        let t = ComplexMatrix::from_fn(dim, rank, |i, j| {
            if i == j {
                Complex::new(T::one(), T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        });
        Ok(Self::with_filters(t, ComplexVector::basis(rank, 0), lambda, delta))
    }

    /// Starts from arbitrary filters with fresh `δ⁻¹ I` inverses.
    pub fn with_filters(t: ComplexMatrix<T>, wbar: ComplexVector<T>, lambda: T, delta: T) -> Self {
        let (dim, rank) = (t.rows(), t.cols());
        assert_eq!(wbar.len(), rank, "filter length must equal the projection rank");
        let inv = T::one() / delta;
        Self {
            t,
            wbar,
            p: ComplexMatrix::scaled_identity(dim, inv),
            q: ComplexMatrix::scaled_identity(rank, inv),
            phi: ComplexMatrix::scaled_identity(rank, inv),
            lambda,
            steps: 0,
            weight: T::zero(),
            average_rw: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.t.rows()
    }

    pub fn rank(&self) -> usize {
        self.t.cols()
    }

    /// One recursion in fixed order:
    ///
    /// 1. `k`, `P` from the inverse update with `r[i]`;
    /// 2. `t`, `Q_w` from the inverse update with `w̄[i-1]`, `t` then scaled by
    ///    `Σ λ^{i-l}` when [`Self::average_rw`] is set;
    /// 3. `T_D[i] = T_D[i-1] + k (d* t^H - r^H T_D[i-1])`;
    /// 4. `r̄ = T_D^H[i] r`, then `k̄`, `Φ̄` from the inverse update with `r̄`;
    /// 5. `w̄[i] = w̄[i-1] + k̄ ξ*` with `ξ = d - w̄^H[i-1] r̄`.
    ///
    /// Returns `x = w̄^H[i-1] r̄[i]`.
    pub fn step(&mut self, r: &ComplexVector<T>, d: Complex<T>) -> Result<Complex<T>, EstimatorError> {
        if r.len() != self.dim() {
            return Err(EstimatorError::Dimension { expected: self.dim(), found: r.len() });
        }
        let step = self.steps + 1;
        let fail = |source: LinalgError| EstimatorError::Step { step, source };

        let k = hermitian_rank1_update_in_place(&mut self.p, r, self.lambda).map_err(fail)?;
        let mut t_gain = hermitian_rank1_update_in_place(&mut self.q, &self.wbar, self.lambda).map_err(fail)?;
        self.weight = self.lambda * self.weight + T::one();
        if self.average_rw {
            t_gain = t_gain.scale(Complex::new(self.weight, T::zero()));
        }

        let r_bar_prev = self.t.adjoint_mul_vec(r);
        let dc = d.conj();
        // row correction shared by every row of T: d* t^H - r̄_prev^H
        let correction: Vec<Complex<T>> =
            t_gain.iter().zip(r_bar_prev.iter()).map(|(tj, rj)| dc * tj.conj() - rj.conj()).collect();
        for i in 0..self.dim() {
            let ki = k[i];
            for (a, c) in self.t.row_mut(i).iter_mut().zip(&correction) {
                *a += ki * c;
            }
        }

        let r_bar = self.t.adjoint_mul_vec(r);
        let k_bar = hermitian_rank1_update_in_place(&mut self.phi, &r_bar, self.lambda).map_err(fail)?;
        let x = self.wbar.dot(&r_bar);
        let xi = d - x;
        self.wbar.axpy(xi.conj(), &k_bar);
        self.steps = step;
        Ok(x)
    }

    /// Output of the rank-`d` prefix `(T_{:,1:d}, w̄_{1:d})`.
    pub fn prefix_output(&self, r: &ComplexVector<T>, d: usize) -> Complex<T> {
        let mut x = Complex::new(T::zero(), T::zero());
        for i in 0..self.dim() {
            let row = &self.t.row(i)[..d];
            let mut tw = Complex::new(T::zero(), T::zero());
            for (a, w) in row.iter().zip(self.wbar.iter()) {
                tw += a * w;
            }
            x += tw.conj() * r[i];
        }
        x
    }

    /// Composite filter of the rank-`d` prefix, `T_{:,1:d} w̄_{1:d}`.
    pub fn prefix_composite(&self, d: usize) -> ComplexVector<T> {
        ComplexVector::from_fn(self.dim(), |i| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (a, w) in self.t.row(i)[..d].iter().zip(self.wbar.iter()) {
                acc += a * w;
            }
            acc
        })
    }
}

impl<T: Real> AdaptiveFilter<T> for JioRlsState<T> {
    fn output(&self, r: &ComplexVector<T>) -> Complex<T> {
        self.wbar.dot(&self.t.adjoint_mul_vec(r))
    }

    fn update(&mut self, r: &ComplexVector<T>, d: Complex<T>) -> Result<Complex<T>, EstimatorError> {
        self.step(r, d)
    }

    fn composite(&self) -> ComplexVector<T> {
        self.t.mul_vec(&self.wbar)
    }
}

impl<T: Real> fmt::Display for JioRlsState<T> {
    /// Text dump: header line, then `wbar`, `T`, `P`, `Q`, `Phi` each prefixed
    /// by its name and written in the linalg text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "jio-rls lambda={} steps={} dim={} rank={} weight={} average_rw={}",
            self.lambda,
            self.steps,
            self.dim(),
            self.rank(),
            self.weight,
            self.average_rw
        )?;
        writeln!(f, "wbar {}", self.wbar)?;
        write!(f, "T {}", self.t)?;
        write!(f, "P {}", self.p)?;
        write!(f, "Q {}", self.q)?;
        write!(f, "Phi {}", self.phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::FullRankRlsState;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn noise(rng: &mut ChaCha8Rng) -> C {
        C::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    }

    #[test]
    fn zero_input_keeps_filters() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = JioRlsState::new(6, 3, 0.998, 0.01).unwrap();
        for _ in 0..20 {
            let r = ComplexVector::from_fn(6, |_| noise(&mut rng));
            s.step(&r, noise(&mut rng)).unwrap();
        }
        let before = s.clone();
        s.step(&ComplexVector::zeros(6), C::new(1.0, 0.0)).unwrap();
        assert_eq!(s.t, before.t);
        assert_eq!(s.wbar, before.wbar);
        assert!(s.p.sub(&before.p.scale_real(1.0 / 0.998)).max_abs() < 1e-12 * before.p.max_abs());
        assert!(s.phi.sub(&before.phi.scale_real(1.0 / 0.998)).max_abs() < 1e-12 * before.phi.max_abs());
        // Q_w is driven by w̄[i-1], not by the data
        let mut q = before.q.clone();
        hermitian_rank1_update_in_place(&mut q, &before.wbar, 0.998).unwrap();
        assert_eq!(s.q, q);
    }

    #[test]
    fn full_dimension_tracks_full_rank_rls() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 6;
        let w_true = ComplexVector::from_fn(n, |_| noise(&mut rng));
        let mut jio = JioRlsState::new(n, n, 1.0, 0.01).unwrap();
        let mut full = FullRankRlsState::new(n, 1.0, 0.01);
        for _ in 0..300 {
            let r = ComplexVector::from_fn(n, |_| noise(&mut rng));
            let d = w_true.dot(&r) + noise(&mut rng) * 0.1;
            jio.step(&r, d).unwrap();
            full.step(&r, d).unwrap();
        }
        let err = jio.composite().sub(&full.w).max_abs();
        assert!(err < 1e-2, "composite deviates by {err}");
    }

    #[test]
    fn prefix_evaluation_matches_truncated_filters() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = JioRlsState::new(8, 5, 0.99, 0.01).unwrap();
        for _ in 0..30 {
            let r = ComplexVector::from_fn(8, |_| noise(&mut rng));
            s.step(&r, noise(&mut rng)).unwrap();
        }
        let r = ComplexVector::from_fn(8, |_| noise(&mut rng));
        for d in 1..=5 {
            let standalone = s.wbar.head(d).dot(&s.t.leading_columns(d).adjoint_mul_vec(&r));
            assert!((s.prefix_output(&r, d) - standalone).norm() < 1e-12);
            assert!((s.prefix_composite(d).dot(&r) - standalone).norm() < 1e-12);
        }
        assert!((s.prefix_output(&r, 5) - s.output(&r)).norm() < 1e-12);
    }

    #[test]
    fn reaches_batch_ses_on_stationary_scenario() {
        use crate::estimators::{jio_batch_ls, ses, BatchDataset, BatchOptions};
        use crate::signal::{Scenario, SystemConfig};
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cfg = SystemConfig { users: 8, fdt: 0.0, ..Default::default() };
        let sc = Scenario::draw(&cfg, 2000, &mut rng).unwrap();
        let samples: Vec<_> = sc.generate(&mut rng).into_iter().enumerate().map(|(i, r)| (r, sc.desired(i))).collect();
        let mut s = JioRlsState::new(sc.dim(), 4, 0.998, 0.01).unwrap();
        for (r, d) in &samples {
            s.step(r, *d).unwrap();
        }
        let data = BatchDataset::new(samples, 0.998).unwrap();
        let m = data.moments();
        let batch = jio_batch_ls(&data, 4, BatchOptions::default()).unwrap();
        let rls = ses(&m.r, &m.p, m.sigma_d2, &s.t).unwrap();
        assert!((rls - batch.ses).abs() <= 0.1 * batch.ses, "rls {rls} batch {}", batch.ses);
    }

    #[test]
    fn raw_accumulation_loses_the_filter_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 6;
        let w_true = ComplexVector::from_fn(n, |_| noise(&mut rng));
        let mut raw = JioRlsState::new(n, 2, 0.99, 0.01).unwrap();
        raw.average_rw = false;
        let mut avg = JioRlsState::new(n, 2, 0.99, 0.01).unwrap();
        for _ in 0..1000 {
            let r = ComplexVector::from_fn(n, |_| noise(&mut rng));
            let d = w_true.dot(&r);
            raw.step(&r, d).unwrap();
            avg.step(&r, d).unwrap();
        }
        assert!(avg.composite().sub(&w_true).max_abs() < 1e-2);
        assert!(raw.composite().sub(&w_true).max_abs() > 0.1);
    }

    proptest::proptest! {
        #[test]
        fn recursion_commutes_with_basis_change(seed in 0u64..500) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (n, d) = (6, 3);
            let mut a = JioRlsState::new(n, d, 0.99, 0.01).unwrap();
            for _ in 0..10 {
                let r = ComplexVector::from_fn(n, |_| noise(&mut rng));
                a.step(&r, noise(&mut rng)).unwrap();
            }
            let g = ComplexMatrix::from_fn(d, d, |_, _| noise(&mut rng)).add(&ComplexMatrix::identity(d));
            let g_inv = crate::linalg::hermitian_inverse(&g.adjoint_matmul(&g)).unwrap().matmul(&g.adjoint());
            let mut b = a.clone();
            b.t = a.t.matmul(&g);
            b.wbar = g_inv.mul_vec(&a.wbar);
            b.phi = g_inv.matmul(&a.phi).matmul(&g_inv.adjoint());
            b.q = g.adjoint_matmul(&a.q).matmul(&g);
            for _ in 0..10 {
                let r = ComplexVector::from_fn(n, |_| noise(&mut rng));
                let dd = noise(&mut rng);
                let xa = a.step(&r, dd).unwrap();
                let xb = b.step(&r, dd).unwrap();
                proptest::prop_assert!((xa - xb).norm() < 1e-8 * (1.0 + xa.norm()));
            }
        }
    }

    #[test]
    fn rank_bounds_are_checked() {
        assert!(matches!(JioRlsState::<f64>::new(4, 0, 0.9, 0.01), Err(EstimatorError::InvalidRank { .. })));
        assert!(matches!(JioRlsState::<f64>::new(4, 5, 0.9, 0.01), Err(EstimatorError::InvalidRank { .. })));
    }

    #[test]
    fn dump_lists_every_carrier() {
        let s = JioRlsState::<f64>::new(3, 2, 0.998, 0.01).unwrap();
        let text = s.to_string();
        for key in ["jio-rls", "wbar 2", "T 3 2", "P 3 3", "Q 2 2", "Phi 2 2"] {
            assert!(text.contains(key), "missing {key}");
        }
    }
}
