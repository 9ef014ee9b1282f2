//! DS-CDMA space-time received-signal generator.
//!
//! The received vector is antenna-major: rows `j*M .. (j+1)*M` hold the
//! `M = N + L - 1` chip samples seen by antenna `j`.

mod channel;
mod codes;
mod config;
mod received;
mod scenario;

use thiserror::Error;

pub use channel::{ChannelState, PathState, UserChannel, DEFAULT_OSCILLATORS};
pub use codes::{build_signatures, SignatureSet, SpreadingCode};
pub use config::SystemConfig;
pub use received::{generate_received, qpsk_slice, qpsk_symbol, SymbolStream};
pub use scenario::Scenario;

use crate::linalg::ComplexVector;

/// One `JM`-length snapshot `r[i]`.
pub type ReceivedVector = ComplexVector<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SignalError {
    #[error("invalid system configuration: {0}")]
    Config(String),
}

/// Noise variance per complex receiver dimension for a given Eb/N0.
///
/// QPSK with unit symbol energy carries `Eb = 1/2`, so `σ² = N0 = 0.5·10^(-Eb/N0/10)`.
pub fn noise_variance(ebn0_db: f64) -> f64 {
    0.5 * 10f64.powf(-ebn0_db / 10.0)
}
