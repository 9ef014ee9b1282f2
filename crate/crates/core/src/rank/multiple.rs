use num_complex::Complex;
use rayon::prelude::*;

use super::{RankConfig, RankDecision};
use crate::estimators::{filter_cost, AdaptiveFilter, EstimatorError, JioRlsState, Moments};
use crate::linalg::ComplexVector;
use crate::Real;

/// Rank of the filter pair with the smallest a posteriori cost; `states[j]`
/// must have rank `d_min + j`.
pub fn select_rank_multiple<T: Real>(states: &[JioRlsState<T>], moments: &Moments<T>, d_min: usize) -> RankDecision<T> {
    let costs = states
        .iter()
        .map(|s| {
            if moments.count == 0 {
                T::zero()
            } else {
                filter_cost(&moments.r, &moments.p, moments.sigma_d2, &s.composite()).max(T::zero())
            }
        })
        .collect();
    if moments.count == 0 {
        log::warn!("rank selection on an empty history; all costs are zero");
    }
    RankDecision::argmin(d_min, costs)
}

/// One independent JIO filter per candidate rank.
#[derive(Clone, Debug)]
pub struct MultipleJioState<T> {
    pub states: Vec<JioRlsState<T>>,
    pub config: RankConfig,
    pub moments: Moments<T>,
    pub current: usize,
    pub last_decision: Option<RankDecision<T>>,
}

impl<T: Real> MultipleJioState<T> {
    pub fn new(dim: usize, config: RankConfig, lambda: T, delta: T) -> Result<Self, EstimatorError> {
        config.validate(dim)?;
        let states = (config.d_min..=config.d_max)
            .map(|d| JioRlsState::new(dim, d, lambda, delta))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            states,
            config,
            moments: Moments::new(dim, T::lit(config.alpha)),
            current: config.d_min,
            last_decision: None,
        })
    }

    pub fn rank(&self) -> usize {
        self.current
    }

    fn selected(&self) -> &JioRlsState<T> {
        &self.states[self.current - self.config.d_min]
    }
}

impl<T: Real> AdaptiveFilter<T> for MultipleJioState<T> {
    fn output(&self, r: &ComplexVector<T>) -> Complex<T> {
        self.selected().output(r)
    }

    fn update(&mut self, r: &ComplexVector<T>, d: Complex<T>) -> Result<Complex<T>, EstimatorError> {
        let x = self.output(r);
        self.states.par_iter_mut().map(|s| s.step(r, d).map(|_| ())).collect::<Result<Vec<()>, _>>()?;
        self.moments.push(r, d);
        let decision = select_rank_multiple(&self.states, &self.moments, self.config.d_min);
        self.current = decision.d_opt;
        self.last_decision = Some(decision);
        Ok(x)
    }

    fn composite(&self) -> ComplexVector<T> {
        self.selected().composite()
    }
}
