use super::stats::population_std;
use crate::error::{Error, Result};

pub const DEFAULT_EMBEDDING: usize = 2;
/// `r` as a multiple of the signal's standard deviation.
pub const DEFAULT_TOLERANCE_FACTOR: f64 = 0.2;

/// Approximate entropy `Phi^m(r) - Phi^(m+1)(r)` with Chebyshev distance and
/// self-matches counted.
///
/// Counts for both window lengths come out of one symmetric pass over
/// window pairs.
pub fn approx_entropy(x: &[f64], m: usize, r: f64) -> Result<f64> {
    let n = x.len();
    if m == 0 || n <= m + 1 {
        return Err(Error::Parameter(format!(
            "need m >= 1 and length > m + 1 (m = {m}, length = {n})"
        )));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Parameter(format!("tolerance must be positive, got {r}")));
    }
    let short = n - m + 1;
    let long = n - m;
    let mut c_m = vec![0u32; short];
    let mut c_m1 = vec![0u32; long];
    for i in 0..short {
        c_m[i] += 1;
        if i < long {
            c_m1[i] += 1;
        }
        for j in i + 1..short {
            if (0..m).all(|k| (x[i + k] - x[j + k]).abs() <= r) {
                c_m[i] += 1;
                c_m[j] += 1;
                if j < long && (x[i + m] - x[j + m]).abs() <= r {
                    c_m1[i] += 1;
                    c_m1[j] += 1;
                }
            }
        }
    }
    let phi = |c: &[u32]| {
        let len = c.len() as f64;
        c.iter().map(|&k| (k as f64 / len).ln()).sum::<f64>() / len
    };
    Ok(phi(&c_m) - phi(&c_m1))
}

/// `m = 2`, `r = 0.2 * std(x)`; a constant signal has zero entropy.
pub fn approx_entropy_default(x: &[f64]) -> Result<f64> {
    let sd = population_std(x);
    if sd == 0.0 {
        return Ok(0.0);
    }
    approx_entropy(x, DEFAULT_EMBEDDING, DEFAULT_TOLERANCE_FACTOR * sd)
}
