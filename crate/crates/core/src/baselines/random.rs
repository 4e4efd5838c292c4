use crate::error::{Error, Result};
use crate::signal::Signal;
use crate::wire::{CompressedSignal, MethodTag, Point};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Both endpoints plus `k - 2` interior samples drawn uniformly without
/// replacement. The draw is a prefix of one seeded shuffle, so for a fixed
/// seed smaller `k` keeps a subset of larger `k`.
pub fn random_compress(signal: &Signal, k: usize, seed: u64) -> Result<CompressedSignal> {
    let v = signal.values();
    let n = v.len();
    if !(2..=n).contains(&k) {
        return Err(Error::Parameter(format!("k must lie in 2..={n}, got {k}")));
    }
    let mut idx: Vec<usize> = interior_order(n, seed)[..k - 2].to_vec();
    idx.push(0);
    idx.push(n - 1);
    idx.sort_unstable();
    let points = idx.into_iter().map(|i| Point::new(i, v[i])).collect();
    CompressedSignal::new(points, n, signal.sample_rate_hz(), MethodTag::Random)
}

/// Interior indices `1..n-1` in the seeded draw order.
pub fn interior_order(n: usize, seed: u64) -> Vec<usize> {
    let mut interior: Vec<usize> = (1..n.saturating_sub(1)).collect();
    interior.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    interior
}
