//! Slow, direct reference implementations used as test oracles.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Distinct values in random order.
pub fn distinct_signal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|i| i as f64 + rng.random_range(0.0..0.5)).collect();
    for i in (1..n).rev() {
        v.swap(i, rng.random_range(0..=i));
    }
    v
}

/// Small integers, so ties and plateaus are common.
pub fn tied_signal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-6i32..6) as f64).collect()
}

/// A random walk, which has pairs at every scale.
pub fn walk_signal(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut x = 0.0;
    (0..n)
        .map(|_| {
            x += rng.random_range(-1.0..1.0);
            x
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleDiagram {
    /// (min index, max index, birth, death) of every non-global pair.
    pub pairs: BTreeSet<(usize, usize, u64, u64)>,
    pub global: (usize, usize),
    pub unpaired_max: Option<usize>,
}

/// Sublevel sweep that recomputes the components from scratch after adding
/// each sample. A component is a maximal run of added samples, named by its
/// lowest sample; runs touching either end of the signal are attached to
/// the ground and cannot die, nor can the run holding the global minimum.
/// A mortal run dies when it stops being named by its own minimum or becomes
/// attached to the ground.
pub fn sweep_diagram(v: &[f64]) -> OracleDiagram {
    let n = v.len();
    let lt = |a: usize, b: usize| (v[a], a) < (v[b], b);
    let mut order: Vec<usize> = (0..n).collect();
    // insertion sort keeps this independent of the library's sort
    for i in 1..n {
        let mut j = i;
        while j > 0 && lt(order[j], order[j - 1]) {
            order.swap(j, j - 1);
            j -= 1;
        }
    }
    let gmin = order[0];
    let gmax = order[n - 1];

    let runs = |active: &[bool]| -> Vec<(usize, usize, usize, bool)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < n {
            if !active[i] {
                i += 1;
                continue;
            }
            let start = i;
            let mut low = i;
            while i < n && active[i] {
                if lt(i, low) {
                    low = i;
                }
                i += 1;
            }
            let end = i - 1;
            out.push((start, end, low, start == 0 || end == n - 1));
        }
        out
    };

    let mut active = vec![false; n];
    let mut prev = runs(&active);
    let mut pairs = BTreeSet::new();
    let mut unpaired = None;
    for &x in &order {
        active[x] = true;
        let now = runs(&active);
        let find = |i: usize| *now.iter().find(|r| r.0 <= i && i <= r.1).expect("active");
        for &(_, _, low, grounded) in &prev {
            let (_, _, new_low, new_grounded) = find(low);
            if low == gmin {
                if !grounded && new_grounded && x != 0 && x != n - 1 {
                    unpaired = Some(x);
                }
                continue;
            }
            if grounded {
                continue;
            }
            if new_low != low || new_grounded {
                pairs.insert((low, x, v[low].to_bits(), v[x].to_bits()));
            }
        }
        prev = now;
    }
    OracleDiagram {
        pairs,
        global: (gmin, gmax),
        unpaired_max: unpaired,
    }
}

/// ApEn straight from its definition: separate passes for each window
/// length, every (i, j) pair visited.
pub fn naive_apen(x: &[f64], m: usize, r: f64) -> f64 {
    let phi = |m: usize| {
        let count = x.len() - m + 1;
        let mut total = 0.0;
        for i in 0..count {
            let mut c = 0usize;
            for j in 0..count {
                let mut d: f64 = 0.0;
                for k in 0..m {
                    d = d.max((x[i + k] - x[j + k]).abs());
                }
                if d <= r {
                    c += 1;
                }
            }
            total += (c as f64 / count as f64).ln();
        }
        total / count as f64
    };
    phi(m) - phi(m + 1)
}

/// Minimum over every monotone warping path, enumerated recursively.
pub fn exhaustive_dtw(a: &[f64], b: &[f64]) -> f64 {
    fn walk(a: &[f64], b: &[f64], i: usize, j: usize, acc: f64, best: &mut f64) {
        let d = a[i] - b[j];
        let acc = acc + d * d;
        if i == a.len() - 1 && j == b.len() - 1 {
            *best = best.min(acc);
            return;
        }
        if i + 1 < a.len() {
            walk(a, b, i + 1, j, acc, best);
        }
        if j + 1 < b.len() {
            walk(a, b, i, j + 1, acc, best);
        }
        if i + 1 < a.len() && j + 1 < b.len() {
            walk(a, b, i + 1, j + 1, acc, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(a, b, 0, 0, 0.0, &mut best);
    best.sqrt()
}

/// O(n^2) forward DFT, bins `0..=n/2`, as (re, im).
pub fn naive_half_dft(x: &[f64]) -> Vec<(f64, f64)> {
    let n = x.len();
    (0..=n / 2)
        .map(|k| {
            x.iter().enumerate().fold((0.0, 0.0), |(re, im), (t, &v)| {
                let a = -2.0 * std::f64::consts::PI * (k * t % n) as f64 / n as f64;
                (re + v * a.cos(), im + v * a.sin())
            })
        })
        .collect()
}
