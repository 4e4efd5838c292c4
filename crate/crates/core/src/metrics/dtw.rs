use crate::error::{Error, Result};

/// Dynamic time warping with squared local cost over the full alignment
/// grid; returns the square root of the optimal path cost. O(|a||b|) time,
/// O(|b|) memory.
pub fn dtw_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Parameter("DTW needs non-empty inputs".into()));
    }
    let m = b.len();
    let mut prev = vec![f64::INFINITY; m + 1];
    let mut cur = vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;
    for &x in a {
        // row recurrence: cur[j] = d^2 + min(prev[j-1], prev[j], cur[j-1])
        let mut left = f64::INFINITY;
        for ((c, w), (&diag, &up)) in cur[1..]
            .iter_mut()
            .zip(b)
            .zip(prev.iter().zip(&prev[1..]))
        {
            let d = x - w;
            let best = if diag < up { diag } else { up };
            let best = if left < best { left } else { best };
            left = d * d + best;
            *c = left;
        }
        cur[0] = f64::INFINITY;
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev[m].sqrt())
}
