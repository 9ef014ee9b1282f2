use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ChannelState, ReceivedVector, SignatureSet};

/// QPSK constellation point from two bits.
pub fn qpsk_symbol(re_positive: bool, im_positive: bool) -> Complex<f64> {
    let s = |b: bool| if b { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 };
    Complex::new(s(re_positive), s(im_positive))
}

/// Nearest QPSK point; an exact zero on an axis goes to the positive side.
pub fn qpsk_slice(x: Complex<f64>) -> Complex<f64> {
    qpsk_symbol(x.re >= 0.0, x.im >= 0.0)
}

/// Symbols `b_k[i]` for `i in -1 ..= len` and amplitudes `A_k` of every user.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolStream {
    symbols: Vec<Vec<Complex<f64>>>,
    pub amplitudes: Vec<f64>,
}

impl SymbolStream {
    /// Random QPSK data. User 0 has unit amplitude; interferer powers are
    /// log-normal around 1 with `power_std_db` spread.
    pub fn random<R: Rng + ?Sized>(users: usize, len: usize, power_std_db: f64, rng: &mut R) -> Self {
        let symbols = (0..users)
            .map(|_| (0..len + 2).map(|_| qpsk_symbol(rng.random(), rng.random())).collect())
            .collect();
        let amplitudes = (0..users)
            .map(|k| {
                if k == 0 {
                    1.0
                } else {
                    let db: f64 = rng.sample::<f64, _>(StandardNormal) * power_std_db;
                    10f64.powf(db / 20.0)
                }
            })
            .collect();
        Self { symbols, amplitudes }
    }

    /// Explicit symbols; `symbols[k][0]` is `b_k[-1]`.
    pub fn from_parts(symbols: Vec<Vec<Complex<f64>>>, amplitudes: Vec<f64>) -> Self {
        assert_eq!(symbols.len(), amplitudes.len());
        Self { symbols, amplitudes }
    }

    pub fn users(&self) -> usize {
        self.symbols.len()
    }

    /// Number of symbols with a full previous/next neighbourhood.
    pub fn len(&self) -> usize {
        self.symbols.first().map_or(0, |s| s.len().saturating_sub(2))
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `b_k[i]` for `i >= -1`.
    pub fn symbol(&self, k: usize, i: i64) -> Complex<f64> {
        self.symbols[k][(i + 1) as usize]
    }
}

/// Circularly-symmetric complex Gaussian vector with `E|n_j|² = variance`.
pub fn complex_noise<R: Rng + ?Sized>(len: usize, variance: f64, rng: &mut R) -> ReceivedVector {
    let sd = (variance / 2.0).sqrt();
    ReceivedVector::from_fn(len, |_| {
        Complex::new(rng.sample::<f64, _>(StandardNormal) * sd, rng.sample::<f64, _>(StandardNormal) * sd)
    })
}

/// Received vector `r[i]` with three-symbol ISI from every user plus noise.
pub fn generate_received<R: Rng + ?Sized>(
    streams: &SymbolStream,
    channels: &ChannelState,
    signatures: &[SignatureSet],
    noise_variance: f64,
    i: i64,
    rng: &mut R,
) -> ReceivedVector {
    let dim = signatures[0].antennas() * signatures[0].window();
    let mut r = ReceivedVector::zeros(dim);
    for (k, sig) in signatures.iter().enumerate() {
        let a = streams.amplitudes[k];
        if a == 0.0 {
            continue;
        }
        let offsets = [-1, 0, 1];
        let mats = [&sig.f_bar, &sig.f, &sig.f_tilde];
        for (off, m) in offsets.iter().zip(mats) {
            let t = i + off;
            let h = channels.spacetime_channel_vector(k, t);
            let p = m.mul_vec(&h);
            r.axpy(streams.symbol(k, t) * a, &p);
        }
    }
    if noise_variance > 0.0 {
        r.axpy(Complex::new(1.0, 0.0), &complex_noise(dim, noise_variance, rng));
    }
    r
}
