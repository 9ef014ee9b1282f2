use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Estimator, ExperimentSpec, HarnessError, PointSpec};
use crate::estimators::{
    genie_moments, mmse_genie, optimal_reduced_rank, AdaptiveFilter, EstimatorError, FullRankRlsState, JioRlsState,
};
use crate::rank::{ExtendedJioState, MultipleJioState, Selector};
use crate::signal::{qpsk_slice, Scenario};
use crate::{Vector, C64};

/// Share of failed runs above which an experiment is rejected.
pub const MAX_FAILED_FRACTION: f64 = 0.1;

/// The RNG of run `run`: ChaCha8 keyed by `seed`, on stream `run`.
///
/// Every estimator and every sweep point sees the same scenario and noise for
/// a given `(seed, run)`, as long as the system configuration matches.
pub fn run_rng(seed: u64, run: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    rng
}

/// Per-symbol record of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace {
    /// Bit errors (0, 1 or 2) of the a priori decision at every symbol,
    /// training included.
    pub bit_errors: Vec<u8>,
    /// `|b_0[i] - x[i]|²` with the a priori output.
    pub squared_errors: Vec<f64>,
    /// Rank used for each output, for auto-rank receivers.
    pub ranks: Option<Vec<usize>>,
    pub training_symbols: usize,
}

impl RunTrace {
    /// Bit errors counted after training.
    pub fn counted_errors(&self) -> u64 {
        self.bit_errors[self.training_symbols..].iter().map(|&e| u64::from(e)).sum()
    }

    pub fn counted_bits(&self) -> u64 {
        2 * (self.bit_errors.len() - self.training_symbols) as u64
    }

    pub fn ber(&self) -> f64 {
        let bits = self.counted_bits();
        if bits == 0 {
            0.0
        } else {
            self.counted_errors() as f64 / bits as f64
        }
    }

    /// Bit error rate over symbols `range`, training or not.
    pub fn window_ber(&self, range: std::ops::Range<usize>) -> f64 {
        let n = range.len();
        let e: u64 = self.bit_errors[range].iter().map(|&e| u64::from(e)).sum();
        e as f64 / (2 * n) as f64
    }
}

enum Receiver {
    Full(FullRankRlsState<f64>),
    Jio(JioRlsState<f64>),
    Extended(Box<ExtendedJioState<f64>>),
    Multiple(Box<MultipleJioState<f64>>),
    Genie,
    Oracle(usize),
}

impl Receiver {
    fn new(spec: &ExperimentSpec, point: &PointSpec) -> Result<Self, EstimatorError> {
        let dim = point.scenario.dim();
        let (lambda, delta) = (spec.lambda, spec.delta);
        Ok(match spec.estimator {
            Estimator::FullRankRls => Receiver::Full(FullRankRlsState::new(dim, lambda, delta)),
            Estimator::JioRls => Receiver::Jio(JioRlsState::new(dim, point.rank, lambda, delta)?),
            Estimator::JioRlsAutorank(Selector::Multiple) => {
                Receiver::Multiple(Box::new(MultipleJioState::new(dim, spec.rank_selection, lambda, delta)?))
            }
            Estimator::JioRlsAutorank(sel) => {
                Receiver::Extended(Box::new(ExtendedJioState::new(dim, spec.rank_selection, sel, lambda, delta)?))
            }
            Estimator::MmseGenie => Receiver::Genie,
            Estimator::RrSvdOracle => Receiver::Oracle(point.rank),
        })
    }

    fn adaptive(&mut self) -> Option<&mut dyn AdaptiveFilter<f64>> {
        match self {
            Receiver::Full(s) => Some(s),
            Receiver::Jio(s) => Some(s),
            Receiver::Extended(s) => Some(s.as_mut()),
            Receiver::Multiple(s) => Some(s.as_mut()),
            Receiver::Genie | Receiver::Oracle(_) => None,
        }
    }

    fn rank(&self) -> Option<usize> {
        match self {
            Receiver::Extended(s) => Some(s.rank()),
            Receiver::Multiple(s) => Some(s.rank()),
            _ => None,
        }
    }

    /// A priori output at symbol `i`; adaptive receivers then absorb `(r, d)`
    /// with `d` given by `reference(x)`.
    fn process(
        &mut self,
        scenario: &Scenario,
        i: usize,
        r: &Vector,
        reference: impl FnOnce(C64) -> C64,
    ) -> Result<C64, EstimatorError> {
        match self {
            Receiver::Genie => Ok(mmse_genie(scenario, i)?.dot(r)),
            Receiver::Oracle(rank) => {
                let (rm, p) = genie_moments(scenario, i);
                Ok(optimal_reduced_rank(&rm, &p, *rank)?.dot(r))
            }
            _ => {
                let f = self.adaptive().expect("adaptive receiver");
                let x = f.output(r);
                f.update(r, reference(x))?;
                Ok(x)
            }
        }
    }
}

/// One Monte-Carlo run of `spec` at `point`: draws the scenario and noise
/// from [`run_rng`], trains on the true symbols, then switches to decisions.
pub fn simulate_run(spec: &ExperimentSpec, point: &PointSpec, run: usize) -> Result<RunTrace, HarnessError> {
    let mut rng = run_rng(spec.seed, run);
    let n = point.len();
    let scenario = Scenario::draw(&point.scenario, n, &mut rng)?;
    let received = scenario.generate(&mut rng);
    let mut rx = Receiver::new(spec, point)?;
    let mut trace = RunTrace {
        bit_errors: Vec::with_capacity(n),
        squared_errors: Vec::with_capacity(n),
        ranks: rx.rank().map(|_| Vec::with_capacity(n)),
        training_symbols: point.training_symbols,
    };
    for (i, r) in received.iter().enumerate() {
        let b = scenario.desired(i);
        if let (Some(ranks), Some(d)) = (trace.ranks.as_mut(), rx.rank()) {
            ranks.push(d);
        }
        let training = i < point.training_symbols;
        let x = rx.process(&scenario, i, r, |x| if training { b } else { qpsk_slice(x) })?;
        let decided = qpsk_slice(x);
        let errors = u8::from(decided.re.signum() != b.re.signum()) + u8::from(decided.im.signum() != b.im.signum());
        trace.bit_errors.push(errors);
        trace.squared_errors.push((b - x).norm_sqr());
    }
    Ok(trace)
}

/// Aggregate of the runs at one sweep value.
#[derive(Clone, Debug, PartialEq)]
pub struct PointResult {
    pub value: f64,
    /// Post-training bit error rate, pooled over the successful runs.
    pub ber: f64,
    /// 95% normal-approximation half-width from the spread of per-run BERs.
    pub half_width: f64,
    pub runs: usize,
    pub failed_runs: usize,
    /// Mean bit error rate at every symbol index, training included.
    pub ber_curve: Vec<f64>,
    /// Mean `|b - x|²` at every symbol index.
    pub ses_curve: Vec<f64>,
    /// Mean selected rank at every symbol index, for auto-rank receivers.
    pub rank_curve: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub estimator: Estimator,
    pub axis: super::Axis,
    pub points: Vec<PointResult>,
}

/// Aggregates traces in run order. Failed runs are dropped and counted.
pub fn aggregate(value: f64, traces: Vec<Result<RunTrace, HarnessError>>) -> Result<PointResult, HarnessError> {
    let total = traces.len();
    let mut ok = Vec::with_capacity(total);
    for (run, t) in traces.into_iter().enumerate() {
        match t {
            Ok(t) => ok.push(t),
            Err(e) => log::warn!("run {run} at {value} failed: {e}"),
        }
    }
    let failed = total - ok.len();
    if ok.is_empty() || failed as f64 > MAX_FAILED_FRACTION * total as f64 {
        return Err(HarnessError::TooManyFailures { failed, runs: total });
    }
    let runs = ok.len();
    let errors: u64 = ok.iter().map(RunTrace::counted_errors).sum();
    let bits: u64 = ok.iter().map(RunTrace::counted_bits).sum();
    let ber = if bits == 0 { 0.0 } else { errors as f64 / bits as f64 };
    let half_width = if runs > 1 {
        let bers: Vec<f64> = ok.iter().map(RunTrace::ber).collect();
        let mean = bers.iter().sum::<f64>() / runs as f64;
        let var = bers.iter().map(|b| (b - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
        1.96 * (var / runs as f64).sqrt()
    } else {
        0.0
    };
    let len = ok[0].bit_errors.len();
    let mean_curve = |f: &dyn Fn(&RunTrace, usize) -> f64| -> Vec<f64> {
        (0..len).map(|i| ok.iter().map(|t| f(t, i)).sum::<f64>() / runs as f64).collect()
    };
    let ber_curve = mean_curve(&|t, i| f64::from(t.bit_errors[i]) / 2.0);
    let ses_curve = mean_curve(&|t, i| t.squared_errors[i]);
    let rank_curve = ok[0].ranks.is_some().then(|| mean_curve(&|t, i| t.ranks.as_ref().map_or(0.0, |r| r[i] as f64)));
    Ok(PointResult { value, ber, half_width, runs, failed_runs: failed, ber_curve, ses_curve, rank_curve })
}

/// Every run at every sweep point; runs execute in parallel and are reduced
/// in run order, so the result depends on the spec only.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunResult, HarnessError> {
    spec.validate()?;
    let mut points = Vec::new();
    for point in spec.points() {
        let traces: Vec<_> = (0..spec.runs).into_par_iter().map(|run| simulate_run(spec, &point, run)).collect();
        points.push(aggregate(point.value, traces)?);
    }
    Ok(RunResult { estimator: spec.estimator, axis: spec.sweep.axis, points })
}

macro_rules! sweep_fn {
    ($(#[$m:meta])* $name:ident, $axis:ident) => {
        $(#[$m])*
        pub fn $name(spec: &ExperimentSpec) -> Result<RunResult, HarnessError> {
            run_experiment(&spec.with_axis(super::Axis::$axis))
        }
    };
}

sweep_fn!(
    /// BER against the rank `D`, 1 to 8 unless the spec already sweeps rank.
    ber_vs_rank,
    Rank
);
sweep_fn!(
    /// BER over a record of `data_symbols`; the per-symbol curve is the plot.
    ber_vs_symbols,
    Symbols
);
sweep_fn!(ber_vs_fdt, Fdt);
sweep_fn!(ber_vs_snr, Snr);
sweep_fn!(ber_vs_users, Users);
