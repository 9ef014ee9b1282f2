//! Automatic rank selection for the joint iterative reduced-rank filter.
//!
//! Every selector searches `D_min ..= D_max`. The extended, stopping-rule and
//! cross-validation selectors drive one filter of rank `D_max` and evaluate its
//! leading-column prefixes; the multiple-filters selector runs one filter per
//! rank.

mod cv;
mod extended;
mod multiple;
mod stopping;

use std::fmt;
use std::str::FromStr;

pub use cv::select_rank_cv;
pub use extended::{aposteriori_cost, aposteriori_costs, select_rank_extended, ExtendedJioState};
pub use multiple::{select_rank_multiple, MultipleJioState};
pub use stopping::{projection_ratios, select_rank_stopping};

use crate::estimators::EstimatorError;
use crate::Real;

/// Selection forgetting factor `α`.
pub const DEFAULT_ALPHA: f64 = 0.99;
/// Stopping-rule threshold `δ`.
pub const DEFAULT_STOPPING_DELTA: f64 = 0.01;
pub const DEFAULT_D_MIN: usize = 3;
pub const DEFAULT_D_MAX: usize = 8;

/// Outcome of one selection: the chosen rank and the score of every
/// candidate `d_min ..= d_max` (a cost, or a projection ratio for the
/// stopping rule).
#[derive(Clone, Debug, PartialEq)]
pub struct RankDecision<T> {
    pub d_opt: usize,
    pub d_min: usize,
    pub scores: Vec<T>,
}

impl<T: Real> RankDecision<T> {
    pub fn d_max(&self) -> usize {
        self.d_min + self.scores.len() - 1
    }

    pub fn score(&self, d: usize) -> T {
        self.scores[d - self.d_min]
    }

    /// Smallest-cost candidate; ties and NaNs resolve toward the smaller rank.
    pub fn argmin(d_min: usize, scores: Vec<T>) -> Self {
        let mut best = 0;
        for (j, &s) in scores.iter().enumerate() {
            let b = scores[best];
            if s < b || (b.is_nan() && !s.is_nan()) {
                best = j;
            }
        }
        Self { d_opt: d_min + best, d_min, scores }
    }
}

/// Which rule picks the rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selector {
    Extended,
    Multiple,
    Stopping,
    CrossValidation,
}

impl Selector {
    pub const ALL: [Selector; 4] = [Selector::Extended, Selector::Multiple, Selector::Stopping, Selector::CrossValidation];

    pub fn name(self) -> &'static str {
        match self {
            Selector::Extended => "extended",
            Selector::Multiple => "multiple",
            Selector::Stopping => "stopping",
            Selector::CrossValidation => "cv",
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "extended" => Ok(Selector::Extended),
            "multiple" => Ok(Selector::Multiple),
            "stopping" => Ok(Selector::Stopping),
            "cv" | "cross-validation" => Ok(Selector::CrossValidation),
            other => Err(format!("unknown rank selector `{other}` (extended, multiple, stopping, cv)")),
        }
    }
}

/// Parameters shared by the rank selectors.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RankConfig {
    pub d_min: usize,
    pub d_max: usize,
    pub alpha: f64,
    pub delta: f64,
    /// Samples kept for cross-validation.
    pub cv_window: usize,
    /// Cross-validation re-selects every this many samples.
    pub cv_interval: usize,
}

impl Default for RankConfig {
    fn default() -> Self {
        Self {
            d_min: DEFAULT_D_MIN,
            d_max: DEFAULT_D_MAX,
            alpha: DEFAULT_ALPHA,
            delta: DEFAULT_STOPPING_DELTA,
            cv_window: 50,
            cv_interval: 10,
        }
    }
}

impl RankConfig {
    pub fn validate(&self, dim: usize) -> Result<(), EstimatorError> {
        if self.d_min == 0 || self.d_min > self.d_max {
            return Err(EstimatorError::InvalidRank { rank: self.d_min, max: self.d_max });
        }
        if self.d_max > dim {
            return Err(EstimatorError::InvalidRank { rank: self.d_max, max: dim });
        }
        if self.cv_interval == 0 {
            return Err(EstimatorError::InvalidRank { rank: 0, max: dim });
        }
        Ok(())
    }
}
