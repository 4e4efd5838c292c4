use crate::error::{Error, Result};
use crate::signal::Signal;
use crate::wire::{CompressedSignal, MethodTag, Point};

/// One point per window, at the window's first index, holding the window
/// mean. A trailing short window is averaged over the samples it has.
pub fn paa_compress(signal: &Signal, window: usize) -> Result<CompressedSignal> {
    let v = signal.values();
    if window == 0 || window > v.len() {
        return Err(Error::Parameter(format!(
            "window must lie in 1..={}, got {window}",
            v.len()
        )));
    }
    let points = v
        .chunks(window)
        .enumerate()
        .map(|(k, w)| Point::new(k * window, w.iter().sum::<f64>() / w.len() as f64))
        .collect();
    CompressedSignal::new(points, v.len(), signal.sample_rate_hz(), MethodTag::Paa)
}

/// Piecewise-constant: each point's value holds until the next point.
pub fn paa_reconstruct(compressed: &CompressedSignal) -> Result<Signal> {
    let pts = compressed.points();
    let n = compressed.original_length();
    if pts.first().map(|p| p.index) != Some(0) {
        return Err(Error::Underdetermined(
            "PAA compression must start at index 0".into(),
        ));
    }
    let mut out = vec![0.0; n];
    for (k, p) in pts.iter().enumerate() {
        let end = pts.get(k + 1).map_or(n, |q| q.index);
        out[p.index..end].fill(p.value);
    }
    Signal::new(out, compressed.sample_rate_hz())
}
