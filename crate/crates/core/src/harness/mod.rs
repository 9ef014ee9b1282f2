//! Monte-Carlo BER experiments on the simulated uplink.
//!
//! Each run draws a scenario from its own RNG stream, feeds the desired
//! user's receiver with the true symbols for `training_symbols` and with its
//! own QPSK decisions afterwards. BER counts only the decision-directed part.

mod output;
mod run;
mod spec;

use thiserror::Error;

use crate::estimators::EstimatorError;
use crate::signal::SignalError;

pub use output::{emit_csv, emit_plotdata, parse_csv, write_csv, write_plotdata, Row, CSV_HEADER};
pub use run::{
    aggregate, ber_vs_fdt, ber_vs_rank, ber_vs_snr, ber_vs_symbols, ber_vs_users, run_experiment, run_rng,
    simulate_run, PointResult, RunResult, RunTrace, MAX_FAILED_FRACTION,
};
pub use spec::{Axis, Estimator, ExperimentSpec, PointSpec, Sweep};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid experiment: {0}")]
    Config(String),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error("{failed} of {runs} runs failed")]
    TooManyFailures { failed: usize, runs: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("malformed result file: {0}")]
    Parse(String),
}
