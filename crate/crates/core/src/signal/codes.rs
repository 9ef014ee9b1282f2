use num_complex::Complex;
use rand::Rng;

use super::SignalError;
use crate::linalg::{ComplexMatrix, ComplexVector};

/// Unit-norm ±1/√N spreading sequence of one user.
#[derive(Clone, Debug, PartialEq)]
pub struct SpreadingCode {
    chips: Vec<f64>,
}

impl SpreadingCode {
    /// Random binary code.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let a = 1.0 / (n as f64).sqrt();
        Self { chips: (0..n).map(|_| if rng.random::<bool>() { a } else { -a }).collect() }
    }

    /// Builds a code from arbitrary chip values, normalized to unit norm.
    pub fn from_chips(chips: &[f64]) -> Self {
        let norm = chips.iter().map(|c| c * c).sum::<f64>().sqrt();
        Self { chips: chips.iter().map(|c| c / norm).collect() }
    }

    pub fn chips(&self) -> &[f64] {
        &self.chips
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }
}

/// Block-diagonal signature matrices for the previous, current and next symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct SignatureSet {
    pub f_bar: ComplexMatrix<f64>,
    pub f: ComplexMatrix<f64>,
    pub f_tilde: ComplexMatrix<f64>,
    antennas: usize,
    window: usize,
    paths: usize,
}

impl SignatureSet {
    pub fn antennas(&self) -> usize {
        self.antennas
    }

    /// Chips per antenna `M`.
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn paths(&self) -> usize {
        self.paths
    }

    /// The `M x L` block of `f_bar`.
    pub fn c_bar(&self) -> ComplexMatrix<f64> {
        block(&self.f_bar, self.window, self.paths)
    }

    pub fn c(&self) -> ComplexMatrix<f64> {
        block(&self.f, self.window, self.paths)
    }

    pub fn c_tilde(&self) -> ComplexMatrix<f64> {
        block(&self.f_tilde, self.window, self.paths)
    }

    /// Signature vectors `(f_bar h, f h, f_tilde h)` for a `JL` channel vector,
    /// exploiting the block structure.
    pub fn apply(&self, h: &ComplexVector<f64>) -> [ComplexVector<f64>; 3] {
        [&self.f_bar, &self.f, &self.f_tilde].map(|m| self.apply_block_diag(m, h))
    }

    fn apply_block_diag(&self, m: &ComplexMatrix<f64>, h: &ComplexVector<f64>) -> ComplexVector<f64> {
        assert_eq!(h.len(), self.antennas * self.paths, "channel vector must be JL long");
        let (mw, l) = (self.window, self.paths);
        let mut out = ComplexVector::zeros(self.antennas * mw);
        for j in 0..self.antennas {
            for row in 0..mw {
                let mut acc = Complex::new(0.0, 0.0);
                for col in 0..l {
                    let a = m[(j * mw + row, j * l + col)];
                    if a.re != 0.0 || a.im != 0.0 {
                        acc += a * h[j * l + col];
                    }
                }
                out[j * mw + row] = acc;
            }
        }
        out
    }
}

fn block(m: &ComplexMatrix<f64>, rows: usize, cols: usize) -> ComplexMatrix<f64> {
    ComplexMatrix::from_fn(rows, cols, |i, j| m[(i, j)])
}

/// Builds the ISI signature matrices of one user.
///
/// Column `l` of the current-symbol block holds the code delayed by `l` chips.
/// The previous-symbol block keeps the tail that spills into the window and
/// the next-symbol block the head that enters it.
pub fn build_signatures(code: &SpreadingCode, paths: usize, antennas: usize) -> Result<SignatureSet, SignalError> {
    let n = code.len();
    if paths > n {
        return Err(SignalError::Config(format!("path bound L = {paths} exceeds spreading gain N = {n}")));
    }
    if paths == 0 || antennas == 0 {
        return Err(SignalError::Config("path bound and antenna count must be positive".into()));
    }
    let m = n + paths - 1;
    let s = code.chips();
    let mut c_bar = ComplexMatrix::zeros(m, paths);
    let mut c = ComplexMatrix::zeros(m, paths);
    let mut c_tilde = ComplexMatrix::zeros(m, paths);
    for l in 0..paths {
        for (k, &chip) in s.iter().enumerate() {
            c[(l + k, l)] = Complex::new(chip, 0.0);
        }
        // previous symbol: chip n - l + row lands on row < l
        for row in 0..l {
            c_bar[(row, l)] = Complex::new(s[n - l + row], 0.0);
        }
        // next symbol: chip k lands on row n + l + k while inside the window
        for k in 0..(paths - 1 - l) {
            c_tilde[(n + l + k, l)] = Complex::new(s[k], 0.0);
        }
    }
    let diag = |b: &ComplexMatrix<f64>| {
        let mut f = ComplexMatrix::zeros(antennas * m, antennas * paths);
        for j in 0..antennas {
            for r in 0..m {
                for col in 0..paths {
                    f[(j * m + r, j * paths + col)] = b[(r, col)];
                }
            }
        }
        f
    };
    Ok(SignatureSet {
        f_bar: diag(&c_bar),
        f: diag(&c),
        f_tilde: diag(&c_tilde),
        antennas,
        window: m,
        paths,
    })
}
