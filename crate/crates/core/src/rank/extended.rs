use std::collections::VecDeque;

use num_complex::Complex;

use super::{select_rank_cv, select_rank_stopping, RankConfig, RankDecision, Selector};
use crate::estimators::{AdaptiveFilter, EstimatorError, JioRlsState, Moments};
use crate::linalg::{ComplexMatrix, ComplexVector};
use crate::Real;

/// `Σ_l α^{i-l} |d[l] - w̄_d^H T_d^H r[l]|²` for `d = d_min ..= d_max`, where
/// `(T_d, w̄_d)` are the leading `d` columns/entries of the given filters and
/// the sums are the α-weighted moments of the past data.
pub fn aposteriori_costs<T: Real>(
    t: &ComplexMatrix<T>,
    wbar: &ComplexVector<T>,
    moments: &Moments<T>,
    d_min: usize,
    d_max: usize,
) -> Vec<T> {
    if moments.count == 0 {
        log::warn!("rank selection on an empty history; all costs are zero");
        return vec![T::zero(); d_max + 1 - d_min];
    }
    let dim = t.rows();
    let mut u = ComplexVector::zeros(dim);
    let mut ru = ComplexVector::zeros(dim);
    let mut costs = Vec::with_capacity(d_max + 1 - d_min);
    for d in 1..=d_max {
        let col = t.column(d - 1);
        let w = wbar[d - 1];
        u.axpy(w, &col);
        ru.axpy(w, &moments.r.mul_vec(&col));
        if d >= d_min {
            let cost = moments.sigma_d2 - T::lit(2.0) * u.dot(&moments.p).re + u.dot(&ru).re;
            costs.push(cost.max(T::zero()));
        }
    }
    costs
}

/// Cost of the rank-`d` prefix of an extended filter.
pub fn aposteriori_cost<T: Real>(state: &ExtendedJioState<T>, d: usize) -> T {
    aposteriori_costs(&state.jio.t, &state.jio.wbar, &state.moments, d, d)[0]
}

/// Rank minimizing the a posteriori cost over the state's bounds.
pub fn select_rank_extended<T: Real>(state: &ExtendedJioState<T>) -> RankDecision<T> {
    let c = &state.config;
    RankDecision::argmin(c.d_min, aposteriori_costs(&state.jio.t, &state.jio.wbar, &state.moments, c.d_min, c.d_max))
}

/// A rank-`D_max` JIO filter whose output uses the currently selected prefix.
#[derive(Clone, Debug)]
pub struct ExtendedJioState<T> {
    pub jio: JioRlsState<T>,
    pub config: RankConfig,
    pub selector: Selector,
    /// α-weighted moments of all past `(r, d)`.
    pub moments: Moments<T>,
    /// Last `cv_window` samples, kept for cross-validation only.
    pub history: VecDeque<(ComplexVector<T>, Complex<T>)>,
    pub current: usize,
    pub last_decision: Option<RankDecision<T>>,
}

impl<T: Real> ExtendedJioState<T> {
    /// `selector` must be one of the single-filter rules.
    pub fn new(dim: usize, config: RankConfig, selector: Selector, lambda: T, delta: T) -> Result<Self, EstimatorError> {
        config.validate(dim)?;
        assert!(selector != Selector::Multiple, "the multiple-filters selector has its own state");
        Ok(Self {
            jio: JioRlsState::new(dim, config.d_max, lambda, delta)?,
            config,
            selector,
            moments: Moments::new(dim, T::lit(config.alpha)),
            history: VecDeque::new(),
            current: config.d_min,
            last_decision: None,
        })
    }

    pub fn rank(&self) -> usize {
        self.current
    }

    /// Runs the configured selector on the current state.
    pub fn select(&self) -> RankDecision<T> {
        let c = &self.config;
        match self.selector {
            Selector::Extended | Selector::Multiple => select_rank_extended(self),
            Selector::Stopping => select_rank_stopping(&self.jio.t, T::lit(c.delta), c.d_min, c.d_max),
            Selector::CrossValidation => {
                let samples: Vec<_> = self.history.iter().cloned().collect();
                select_rank_cv(&samples, T::lit(c.alpha), c.d_min, c.d_max)
            }
        }
    }
}

impl<T: Real> AdaptiveFilter<T> for ExtendedJioState<T> {
    fn output(&self, r: &ComplexVector<T>) -> Complex<T> {
        self.jio.prefix_output(r, self.current)
    }

    /// Adapts the `D_max` filters, then re-selects the rank used for the next
    /// output. Returns the a priori output at the previously selected rank.
    fn update(&mut self, r: &ComplexVector<T>, d: Complex<T>) -> Result<Complex<T>, EstimatorError> {
        let x = self.output(r);
        self.jio.step(r, d)?;
        self.moments.push(r, d);
        let reselect = match self.selector {
            Selector::CrossValidation => {
                if self.history.len() == self.config.cv_window {
                    self.history.pop_front();
                }
                self.history.push_back((r.clone(), d));
                self.moments.count % self.config.cv_interval == 0
            }
            _ => true,
        };
        if reselect {
            let decision = self.select();
            self.current = decision.d_opt;
            self.last_decision = Some(decision);
        }
        Ok(x)
    }

    fn composite(&self) -> ComplexVector<T> {
        self.jio.prefix_composite(self.current)
    }
}
