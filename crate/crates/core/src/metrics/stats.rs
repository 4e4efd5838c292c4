use crate::error::{Error, Result};
use crate::signal::Signal;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Standard deviation with the 1/n normalisation.
pub fn population_std(x: &[f64]) -> f64 {
    let mu = mean(x);
    (x.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / x.len() as f64).sqrt()
}

/// Standard deviation with the 1/(n-1) normalisation.
pub fn sample_std(x: &[f64]) -> f64 {
    let mu = mean(x);
    (x.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / (x.len() - 1) as f64).sqrt()
}

/// Zero mean, unit sample standard deviation.
pub fn standardize(signal: &Signal) -> Result<Signal> {
    let x = signal.values();
    let mu = mean(x);
    let sd = sample_std(x);
    if !(sd > 0.0) {
        return Err(Error::Degenerate("zero variance".into()));
    }
    signal.map_values(x.iter().map(|v| (v - mu) / sd).collect())
}

/// Adds i.i.d. `N(0, multiple^2)` noise; on a standardized signal the
/// multiple is the noise-to-signal standard deviation ratio.
pub fn add_gaussian_noise(signal: &Signal, multiple: f64, seed: u64) -> Result<Signal> {
    if !(multiple.is_finite() && multiple >= 0.0) {
        return Err(Error::Parameter(format!(
            "noise multiple must be finite and non-negative, got {multiple}"
        )));
    }
    if multiple == 0.0 {
        return Ok(signal.clone());
    }
    let normal = Normal::new(0.0, multiple).map_err(|e| Error::Parameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    signal.map_values(
        signal
            .values()
            .iter()
            .map(|v| v + normal.sample(&mut rng))
            .collect(),
    )
}

/// `1 - bytes / (4 n)`: savings relative to 4 bytes per raw sample.
pub fn compression_fraction(original_length: usize, payload_bytes: usize) -> f64 {
    1.0 - payload_bytes as f64 / (4 * original_length) as f64
}
