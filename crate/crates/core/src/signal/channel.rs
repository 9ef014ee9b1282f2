//! Clarke-model multipath channels with per-path directions of arrival.
//!
//! Each path gain is a sum of `No` unit sinusoids with random arrival angles
//! and phases, `g[i] = (1/√No) Σ exp(j(2π fdT cos α_n i + φ_n))`, giving a
//! unit-power process whose autocorrelation approaches `J0(2π fdT Δi)`.

use std::f64::consts::PI;

use num_complex::Complex;
use rand::Rng;

use super::SystemConfig;
use crate::linalg::ComplexVector;

pub const DEFAULT_OSCILLATORS: usize = 32;

/// One propagation path of one user.
#[derive(Clone, Debug, PartialEq)]
pub struct PathState {
    /// Delay in chips, `0 ..= L-1`.
    pub delay: usize,
    /// Direction of arrival in radians.
    pub doa: f64,
    /// Square root of the average path power.
    pub amplitude: f64,
    /// Oscillator Doppler frequencies in cycles per symbol.
    freqs: Vec<f64>,
    phases: Vec<f64>,
}

impl PathState {
    pub fn clarke<R: Rng + ?Sized>(delay: usize, doa: f64, power: f64, fdt: f64, oscillators: usize, rng: &mut R) -> Self {
        let n = oscillators as f64;
        let mut freqs = Vec::with_capacity(oscillators);
        let mut phases = Vec::with_capacity(oscillators);
        for k in 0..oscillators {
            let jitter: f64 = rng.random::<f64>() - 0.5;
            let alpha = 2.0 * PI * (k as f64 + jitter) / n;
            freqs.push(fdt * alpha.cos());
            phases.push(2.0 * PI * rng.random::<f64>());
        }
        Self { delay, doa, amplitude: power.sqrt(), freqs, phases }
    }

    /// Time-invariant path with an exact complex gain.
    pub fn fixed(delay: usize, doa: f64, gain: Complex<f64>) -> Self {
        Self { delay, doa, amplitude: gain.norm(), freqs: vec![0.0], phases: vec![gain.arg()] }
    }

    /// Complex path gain at symbol `i`.
    pub fn gain(&self, i: i64) -> Complex<f64> {
        let t = i as f64;
        let mut acc = Complex::new(0.0, 0.0);
        for (f, ph) in self.freqs.iter().zip(&self.phases) {
            acc += Complex::from_polar(1.0, 2.0 * PI * f * t + ph);
        }
        acc * (self.amplitude / (self.freqs.len() as f64).sqrt())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UserChannel {
    pub paths: Vec<PathState>,
}

/// Channels of every user plus the current symbol index.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelState {
    pub users: Vec<UserChannel>,
    pub max_paths: usize,
    pub antennas: usize,
    pub fdt: f64,
    pub time: i64,
}

/// Path powers from a dB profile, normalized to unit total.
pub fn profile_powers(profile_db: &[f64]) -> Vec<f64> {
    let lin: Vec<f64> = profile_db.iter().map(|db| 10f64.powf(db / 10.0)).collect();
    let total: f64 = lin.iter().sum();
    lin.into_iter().map(|p| p / total).collect()
}

impl ChannelState {
    /// Draws delays, DoAs and Clarke oscillators for every user.
    ///
    /// The first path sits at delay 0 and each further path adds 1 or 2 chips.
    /// DoAs are independent per (user, path), uniform on `(0, 2π/3)`.
    pub fn random<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> Self {
        let powers = profile_powers(&cfg.delay_profile_db);
        let users = (0..cfg.users)
            .map(|_| {
                let mut delay = 0;
                let paths = powers
                    .iter()
                    .enumerate()
                    .map(|(p, &power)| {
                        if p > 0 {
                            delay += rng.random_range(1..=2);
                        }
                        let doa = rng.random::<f64>() * 2.0 * PI / 3.0;
                        PathState::clarke(delay, doa, power, cfg.fdt, cfg.oscillators, rng)
                    })
                    .collect();
                UserChannel { paths }
            })
            .collect();
        Self { users, max_paths: cfg.max_paths, antennas: cfg.antennas, fdt: cfg.fdt, time: 0 }
    }

    /// Advances one symbol; the oscillators are deterministic in time.
    pub fn evolve(&mut self) {
        self.time += 1;
    }

    /// Path gains of user `k` at the current symbol.
    pub fn path_gains(&self, k: usize) -> Vec<Complex<f64>> {
        self.users[k].paths.iter().map(|p| p.gain(self.time)).collect()
    }

    /// `JL` space-time channel vector of user `k` at symbol `i`.
    pub fn spacetime_channel_vector(&self, k: usize, i: i64) -> ComplexVector<f64> {
        let l = self.max_paths;
        let mut h = ComplexVector::zeros(self.antennas * l);
        for path in &self.users[k].paths {
            let g = path.gain(i);
            let step = -PI * path.doa.sin();
            for j in 0..self.antennas {
                h[j * l + path.delay] += g * Complex::from_polar(1.0, step * j as f64);
            }
        }
        h
    }
}
