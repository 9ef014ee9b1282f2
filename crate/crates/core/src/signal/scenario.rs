use num_complex::Complex;
use rand::Rng;

use super::received::complex_noise;
use super::{
    build_signatures, generate_received, noise_variance, ChannelState, ReceivedVector, SignalError,
    SignatureSet, SpreadingCode, SymbolStream, SystemConfig,
};
use crate::linalg::ComplexVector;

/// One Monte-Carlo realization: codes, channels, powers and symbols.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub config: SystemConfig,
    pub codes: Vec<SpreadingCode>,
    pub signatures: Vec<SignatureSet>,
    pub channels: ChannelState,
    pub streams: SymbolStream,
    pub noise_variance: f64,
}

impl Scenario {
    /// Draws a realization carrying `len` symbols per user.
    pub fn draw<R: Rng + ?Sized>(config: &SystemConfig, len: usize, rng: &mut R) -> Result<Self, SignalError> {
        config.validate()?;
        let codes: Vec<SpreadingCode> =
            (0..config.users).map(|_| SpreadingCode::random(config.spreading_gain, rng)).collect();
        let signatures = codes
            .iter()
            .map(|c| build_signatures(c, config.max_paths, config.antennas))
            .collect::<Result<Vec<_>, _>>()?;
        let channels = ChannelState::random(config, rng);
        let streams = SymbolStream::random(config.users, len, config.power_std_db, rng);
        Ok(Self {
            config: config.clone(),
            codes,
            signatures,
            channels,
            streams,
            noise_variance: noise_variance(config.ebn0_db),
        })
    }

    pub fn len(&self) -> usize {
        self.streams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.streams.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.config.dim()
    }

    /// Desired-user symbol `b_0[i]`.
    pub fn desired(&self, i: usize) -> Complex<f64> {
        self.streams.symbol(0, i as i64)
    }

    /// `(p̄_k[i-1], p_k[i], p̃_k[i+1])` of user `k`.
    pub fn signature_vectors(&self, k: usize, i: i64) -> [ComplexVector<f64>; 3] {
        let sig = &self.signatures[k];
        [
            sig.f_bar.mul_vec(&self.channels.spacetime_channel_vector(k, i - 1)),
            sig.f.mul_vec(&self.channels.spacetime_channel_vector(k, i)),
            sig.f_tilde.mul_vec(&self.channels.spacetime_channel_vector(k, i + 1)),
        ]
    }

    /// `r[i]` through the reference generator.
    pub fn received<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> ReceivedVector {
        generate_received(&self.streams, &self.channels, &self.signatures, self.noise_variance, i as i64, rng)
    }

    /// The whole stream `r[0..len]`, reusing each channel vector for the three
    /// symbols it touches.
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<ReceivedVector> {
        let n = self.len();
        let dim = self.dim();
        // contributions[k][t + 1] = (f_bar h, f h, f_tilde h) at symbol t, t in -1..=n
        let contributions: Vec<Vec<[ComplexVector<f64>; 3]>> = self
            .signatures
            .iter()
            .enumerate()
            .map(|(k, sig)| {
                (-1..=n as i64).map(|t| sig.apply(&self.channels.spacetime_channel_vector(k, t))).collect()
            })
            .collect();
        (0..n)
            .map(|i| {
                let mut r = ReceivedVector::zeros(dim);
                for (k, per_t) in contributions.iter().enumerate() {
                    let a = self.streams.amplitudes[k];
                    for (slot, off) in [-1i64, 0, 1].into_iter().enumerate() {
                        let t = i as i64 + off;
                        let b = self.streams.symbol(k, t);
                        r.axpy(b * a, &per_t[(t + 1) as usize][slot]);
                    }
                }
                if self.noise_variance > 0.0 {
                    r.axpy(Complex::new(1.0, 0.0), &complex_noise(dim, self.noise_variance, rng));
                }
                r
            })
            .collect()
    }
}
