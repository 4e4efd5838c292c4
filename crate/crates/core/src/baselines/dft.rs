use crate::error::{Error, Result};
use crate::signal::Signal;
use crate::wire::{deltas, dft_wire_cost};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DftSelection {
    /// The `k` bins of largest magnitude, ties to the lower bin.
    #[default]
    LargestMagnitude,
    /// Bins `0..k`.
    FirstK,
}

/// Kept half-spectrum coefficients of a real signal, sorted by bin.
#[derive(Debug, Clone, PartialEq)]
pub struct DftCompressed {
    kept: Vec<(usize, Complex64)>,
    original_length: usize,
    sample_rate_hz: f64,
}

impl DftCompressed {
    pub fn new(
        kept: Vec<(usize, Complex64)>,
        original_length: usize,
        sample_rate_hz: f64,
    ) -> Result<Self> {
        if original_length < 2 || original_length > u32::MAX as usize {
            return Err(Error::Parameter(format!(
                "original length {original_length} out of range"
            )));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::Parameter(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        let bins = half_len(original_length);
        for w in kept.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Corrupt(format!(
                    "bins not strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(b, _)) = kept.iter().find(|(b, _)| *b >= bins) {
            return Err(Error::Corrupt(format!("bin {b} outside half spectrum of {bins}")));
        }
        if let Some(&(b, _)) = kept.iter().find(|(_, c)| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Corrupt(format!("non-finite coefficient at bin {b}")));
        }
        Ok(Self {
            kept,
            original_length,
            sample_rate_hz,
        })
    }

    pub fn kept(&self) -> &[(usize, Complex64)] {
        &self.kept
    }

    pub fn original_length(&self) -> usize {
        self.original_length
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.kept.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kept.is_empty()
    }

    pub fn wire_cost(&self) -> usize {
        dft_wire_cost(&deltas(self.kept.iter().map(|&(b, _)| b)))
    }
}

/// Number of bins in the half spectrum of a length-`n` real signal.
pub fn half_len(n: usize) -> usize {
    n / 2 + 1
}

/// Forward transform restricted to the half spectrum.
pub fn half_spectrum(values: &[f64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf.truncate(half_len(n));
    buf
}

pub fn dft_compress(signal: &Signal, k: usize, selection: DftSelection) -> Result<DftCompressed> {
    let n = signal.len();
    let bins = half_len(n);
    if !(1..=bins).contains(&k) {
        return Err(Error::Parameter(format!("k must lie in 1..={bins}, got {k}")));
    }
    let spec = half_spectrum(signal.values());
    let mut chosen: Vec<usize> = match selection {
        DftSelection::FirstK => (0..k).collect(),
        DftSelection::LargestMagnitude => {
            let mut order: Vec<usize> = (0..bins).collect();
            order.sort_by(|&a, &b| spec[b].norm().total_cmp(&spec[a].norm()).then(a.cmp(&b)));
            order.truncate(k);
            order
        }
    };
    chosen.sort_unstable();
    let kept = chosen.into_iter().map(|b| (b, spec[b])).collect();
    DftCompressed::new(kept, n, signal.sample_rate_hz())
}

/// Inverse transform of the conjugate-symmetric extension, before dropping
/// the imaginary part.
fn synthesize(c: &DftCompressed) -> Vec<Complex64> {
    let n = c.original_length;
    let mut full = vec![Complex64::new(0.0, 0.0); n];
    for &(b, z) in &c.kept {
        if b == 0 || 2 * b == n {
            // self-conjugate bins of a real signal are real
            full[b] = Complex64::new(z.re, 0.0);
        } else {
            full[b] = z;
            full[n - b] = z.conj();
        }
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut full);
    let scale = 1.0 / n as f64;
    full.iter_mut().for_each(|z| *z *= scale);
    full
}

pub fn dft_reconstruct(compressed: &DftCompressed) -> Signal {
    let values = synthesize(compressed).into_iter().map(|z| z.re).collect();
    Signal::new(values, compressed.sample_rate_hz).expect("length and values already validated")
}
