use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::estimators::{DEFAULT_DELTA, DEFAULT_LAMBDA};
use crate::rank::{RankConfig, Selector};
use crate::signal::SystemConfig;

/// The receiver under test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Estimator {
    FullRankRls,
    JioRls,
    JioRlsAutorank(Selector),
    /// Full-rank MMSE filter from the true channels, powers and noise level.
    MmseGenie,
    /// Rank-`D` cross-spectral truncation of the genie moments.
    RrSvdOracle,
}

impl Estimator {
    /// Whether the rank parameter `D` affects this estimator.
    pub fn uses_rank(self) -> bool {
        matches!(self, Estimator::JioRls | Estimator::RrSvdOracle)
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Estimator::FullRankRls => f.write_str("full-rank-rls"),
            Estimator::JioRls => f.write_str("jio-rls"),
            Estimator::JioRlsAutorank(s) => write!(f, "jio-rls-autorank:{s}"),
            Estimator::MmseGenie => f.write_str("mmse-genie"),
            Estimator::RrSvdOracle => f.write_str("rr-svd-oracle"),
        }
    }
}

impl FromStr for Estimator {
    type Err = String;

    /// Accepts `-` or `_` as separator; `jio-rls-autorank` alone means the
    /// extended-filters selector.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().replace('_', "-");
        let (head, sel) = match s.split_once(':') {
            Some((h, sel)) => (h, Some(sel)),
            None => (s.as_str(), None),
        };
        let est = match head {
            "full-rank-rls" | "full-rank" => Estimator::FullRankRls,
            "jio-rls" => Estimator::JioRls,
            "jio-rls-autorank" | "autorank" => {
                Estimator::JioRlsAutorank(sel.map(str::parse).transpose()?.unwrap_or(Selector::Extended))
            }
            "mmse-genie" | "mmse" => Estimator::MmseGenie,
            "rr-svd-oracle" | "svd-oracle" => Estimator::RrSvdOracle,
            other => {
                return Err(format!(
                    "unknown estimator `{other}` (full-rank-rls, jio-rls, jio-rls-autorank[:selector], mmse-genie, rr-svd-oracle)"
                ))
            }
        };
        if sel.is_some() && !matches!(est, Estimator::JioRlsAutorank(_)) {
            return Err(format!("estimator `{head}` takes no rank selector"));
        }
        Ok(est)
    }
}

impl TryFrom<String> for Estimator {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Estimator> for String {
    fn from(e: Estimator) -> Self {
        e.to_string()
    }
}

/// Parameter varied across the points of an experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    /// Rank `D`.
    Rank,
    /// Data symbols after training.
    Symbols,
    /// Normalized Doppler `f_d T`.
    Fdt,
    /// `E_b/N_0` in dB.
    Snr,
    /// Number of users `K`.
    Users,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Rank => "rank",
            Axis::Symbols => "symbols",
            Axis::Fdt => "fdt",
            Axis::Snr => "snr",
            Axis::Users => "users",
        }
    }

    /// Grid used when a sweep over this axis gets no explicit values.
    pub fn default_values(self, spec: &ExperimentSpec) -> Vec<f64> {
        match self {
            Axis::Rank => (1..=8).map(f64::from).collect(),
            Axis::Symbols => vec![spec.data_symbols as f64],
            Axis::Fdt => vec![0.0, 1e-4, 5e-4, 1e-3, 2e-3, 5e-3],
            Axis::Snr => (0..=8).map(|i| f64::from(2 * i)).collect(),
            Axis::Users => (1..=8).map(|i| f64::from(2 * i)).collect(),
        }
    }

    fn integral(self) -> bool {
        matches!(self, Axis::Rank | Axis::Symbols | Axis::Users)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rank" => Ok(Axis::Rank),
            "symbols" => Ok(Axis::Symbols),
            "fdt" => Ok(Axis::Fdt),
            "snr" => Ok(Axis::Snr),
            "users" => Ok(Axis::Users),
            other => Err(format!("unknown sweep axis `{other}`")),
        }
    }
}

/// An empty `values` list stands for [`Axis::default_values`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: Axis,
    #[serde(default)]
    pub values: Vec<f64>,
}

/// Everything that determines an experiment, bit for bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub scenario: SystemConfig,
    pub estimator: Estimator,
    pub sweep: Sweep,
    pub runs: usize,
    /// Symbols with the true `b_0[i]` as reference.
    pub training_symbols: usize,
    /// Decision-directed symbols after training; only these count for BER.
    pub data_symbols: usize,
    pub lambda: f64,
    /// RLS initialization `P(0) = δ⁻¹ I`.
    pub delta: f64,
    /// Fixed rank `D` when the estimator uses one.
    pub rank: usize,
    pub rank_selection: RankConfig,
    pub seed: u64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            scenario: SystemConfig::default(),
            estimator: Estimator::JioRls,
            sweep: Sweep { axis: Axis::Symbols, values: Vec::new() },
            runs: 200,
            training_symbols: 200,
            data_symbols: 300,
            lambda: DEFAULT_LAMBDA,
            delta: DEFAULT_DELTA,
            rank: 4,
            rank_selection: RankConfig::default(),
            seed: 1,
        }
    }
}

/// Settings of one sweep point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSpec {
    pub value: f64,
    pub scenario: SystemConfig,
    pub rank: usize,
    pub training_symbols: usize,
    pub data_symbols: usize,
}

impl PointSpec {
    pub fn len(&self) -> usize {
        self.training_symbols + self.data_symbols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl ExperimentSpec {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let spec: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(spec)
    }

    pub fn to_toml_string(&self) -> Result<String, HarnessError> {
        toml::to_string(self).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Same spec sweeping `axis`; keeps the values if the axis is unchanged.
    pub fn with_axis(&self, axis: Axis) -> Self {
        let mut s = self.clone();
        if s.sweep.axis != axis {
            s.sweep = Sweep { axis, values: Vec::new() };
        }
        s
    }

    /// The sweep values, with the axis default standing in for an empty list.
    pub fn values(&self) -> Vec<f64> {
        if self.sweep.values.is_empty() {
            self.sweep.axis.default_values(self)
        } else {
            self.sweep.values.clone()
        }
    }

    pub fn point(&self, value: f64) -> PointSpec {
        let mut p = PointSpec {
            value,
            scenario: self.scenario.clone(),
            rank: self.rank,
            training_symbols: self.training_symbols,
            data_symbols: self.data_symbols,
        };
        match self.sweep.axis {
            Axis::Rank => p.rank = value as usize,
            Axis::Symbols => p.data_symbols = value as usize,
            Axis::Fdt => p.scenario.fdt = value,
            Axis::Snr => p.scenario.ebn0_db = value,
            Axis::Users => p.scenario.users = value as usize,
        }
        p
    }

    pub fn points(&self) -> Vec<PointSpec> {
        self.values().into_iter().map(|v| self.point(v)).collect()
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |m: String| Err(HarnessError::Config(m));
        if self.runs == 0 {
            return fail("runs must be at least 1".into());
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0) || !(self.delta > 0.0) {
            return fail("need 0 < λ ≤ 1 and δ > 0".into());
        }
        for v in self.values() {
            if !v.is_finite() || (self.sweep.axis.integral() && (v < 0.0 || v.fract() != 0.0)) {
                return fail(format!("{} value {v} is not admissible", self.sweep.axis));
            }
        }
        for p in self.points() {
            p.scenario.validate()?;
            let dim = p.scenario.dim();
            if self.estimator.uses_rank() && (p.rank == 0 || p.rank > dim) {
                return fail(format!("rank {} outside 1..={dim}", p.rank));
            }
            if let Estimator::JioRlsAutorank(_) = self.estimator {
                self.rank_selection.validate(dim)?;
            }
            if p.is_empty() {
                return fail("no symbols to process".into());
            }
        }
        Ok(())
    }
}
