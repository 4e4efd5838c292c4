//! Synthetic stand-in for a spoken-digit corpus.
//!
//! Each utterance is 8 kHz, 2500 to 5000 samples long: a Rosenberg glottal
//! pulse train with a drifting pitch contour, differentiated for lip
//! radiation and shaped by three formant resonators whose targets depend on
//! the digit, under a smooth amplitude envelope, with optional fricative
//! noise bursts and a low noise floor, quantized to 16 bits. File names
//! follow the `{digit}_{speaker}_{take}.wav` convention.

use crate::error::Result;
use crate::io::write_wav;
use crate::signal::Signal;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

pub const SAMPLE_RATE_HZ: u32 = 8000;
const SPEAKERS: usize = 6;

/// Formant targets (F1, F2, F3) at onset and offset, per digit.
const FORMANTS: [[(f64, f64, f64); 2]; 10] = [
    [(300.0, 2200.0, 2900.0), (500.0, 1400.0, 2500.0)],
    [(450.0, 900.0, 2500.0), (550.0, 1700.0, 2600.0)],
    [(350.0, 1700.0, 2600.0), (320.0, 900.0, 2300.0)],
    [(400.0, 1500.0, 2400.0), (300.0, 2300.0, 3000.0)],
    [(420.0, 900.0, 2400.0), (480.0, 1100.0, 1800.0)],
    [(700.0, 1200.0, 2500.0), (400.0, 2000.0, 2700.0)],
    [(400.0, 2000.0, 2700.0), (600.0, 1700.0, 2500.0)],
    [(550.0, 1800.0, 2600.0), (450.0, 1300.0, 2500.0)],
    [(650.0, 1700.0, 2500.0), (350.0, 2100.0, 2800.0)],
    [(650.0, 1100.0, 2500.0), (400.0, 1900.0, 2600.0)],
];

/// Digits whose spoken form has a fricative at the start and/or end.
const FRICATIVES: [(bool, bool); 10] = [
    (true, false),
    (false, false),
    (false, false),
    (true, false),
    (true, false),
    (true, true),
    (true, true),
    (true, false),
    (false, false),
    (false, false),
];

#[derive(Debug, Clone)]
pub struct Utterance {
    pub name: String,
    pub digit: u8,
    pub signal: Signal,
}

struct Resonator {
    a1: f64,
    a2: f64,
    gain: f64,
    y1: f64,
    y2: f64,
}

impl Resonator {
    fn new() -> Self {
        Self {
            a1: 0.0,
            a2: 0.0,
            gain: 1.0,
            y1: 0.0,
            y2: 0.0,
        }
    }

    fn tune(&mut self, freq: f64, bandwidth: f64, fs: f64) {
        let r = (-PI * bandwidth / fs).exp();
        self.a1 = 2.0 * r * (2.0 * PI * freq / fs).cos();
        self.a2 = -r * r;
        self.gain = 1.0 - r;
    }

    fn step(&mut self, x: f64) -> f64 {
        let y = self.gain * x + self.a1 * self.y1 + self.a2 * self.y2;
        self.y2 = self.y1;
        self.y1 = y;
        y
    }
}

fn raised_cosine(t: f64) -> f64 {
    0.5 - 0.5 * (PI * t.clamp(0.0, 1.0)).cos()
}

/// The `index`-th utterance of the corpus for `seed`.
pub fn synthetic_utterance(seed: u64, index: usize) -> Utterance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let fs = SAMPLE_RATE_HZ as f64;

    let digit = (index % 10) as u8;
    let speaker = (index / 10) % SPEAKERS;
    let take = index / (10 * SPEAKERS);
    let n: usize = rng.random_range(2500..=5000);

    // speaker-level pitch and vocal tract scale
    let mut srng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    srng.set_stream(speaker as u64);
    let base_f0: f64 = srng.random_range(90.0..160.0);
    let tract: f64 = srng.random_range(0.9..1.15);

    let f0_drift: f64 = rng.random_range(-0.25..0.05);
    let vib_rate: f64 = rng.random_range(3.0..6.0);
    let vib_phase: f64 = rng.random_range(0.0..2.0 * PI);
    let onset: f64 = rng.random_range(0.08..0.2);
    let offset: f64 = rng.random_range(0.75..0.92);
    let ramp: f64 = rng.random_range(0.04..0.1);
    let bw: [f64; 3] = [
        rng.random_range(60.0..110.0),
        rng.random_range(80.0..140.0),
        rng.random_range(110.0..180.0),
    ];
    let [start, end] = FORMANTS[digit as usize];
    let jitter = Normal::new(0.0, 0.05).expect("valid");
    let white = Normal::new(0.0, 1.0).expect("valid");

    let mut res = [Resonator::new(), Resonator::new(), Resonator::new()];
    const OPEN: f64 = 0.4;
    const CLOSE: f64 = 0.16;
    let mut phase = 0.0f64;
    let mut shimmer = 1.0;
    let mut prev_flow = 0.0;
    let mut hp_prev = 0.0;
    let (fric_start, fric_end) = FRICATIVES[digit as usize];
    let fric_len = 0.12;
    let mut out = Vec::with_capacity(n);
    for t in 0..n {
        let u = t as f64 / n as f64;
        let voiced_u = ((u - onset) / (offset - onset)).clamp(0.0, 1.0);
        let f0 = base_f0
            * (1.0 + f0_drift * voiced_u)
            * (1.0 + 0.03 * (2.0 * PI * vib_rate * t as f64 / fs + vib_phase).sin());

        // Rosenberg glottal flow with per-period amplitude jitter; the first
        // difference models lip radiation
        phase += f0 / fs;
        if phase >= 1.0 {
            phase -= 1.0;
            shimmer = 1.0 + jitter.sample(&mut rng);
        }
        let flow = shimmer
            * if phase < OPEN {
                0.5 * (1.0 - (PI * phase / OPEN).cos())
            } else if phase < OPEN + CLOSE {
                (0.5 * PI * (phase - OPEN) / CLOSE).cos()
            } else {
                0.0
            };
        let excitation = flow - prev_flow;
        prev_flow = flow;

        let s = voiced_u.powf(0.8);
        let f = [
            tract * (start.0 + (end.0 - start.0) * s),
            tract * (start.1 + (end.1 - start.1) * s),
            tract * (start.2 + (end.2 - start.2) * s),
        ];
        let mut y = excitation;
        for (k, r) in res.iter_mut().enumerate() {
            r.tune(f[k], bw[k], fs);
            y = r.step(y);
        }

        let env = raised_cosine((u - onset) / ramp) * raised_cosine((offset - u) / ramp);
        let mut v = 4.0 * y * env;

        let noise = white.sample(&mut rng);
        let hp = noise - hp_prev;
        hp_prev = noise;
        let mut fric = 0.0;
        if fric_start {
            let a = onset - fric_len;
            fric += raised_cosine((u - a) / 0.03) * raised_cosine((onset + 0.02 - u) / 0.03);
        }
        if fric_end {
            let b = offset + fric_len;
            fric += raised_cosine((u - offset + 0.02) / 0.03) * raised_cosine((b - u) / 0.03);
        }
        v += 0.08 * fric * hp;
        v += 0.002 * noise;
        out.push(v);
    }

    let peak = out.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-9);
    let level: f64 = rng.random_range(0.3..0.8);
    for v in &mut out {
        let q = (*v / peak * level * 32768.0).round().clamp(-32768.0, 32767.0);
        *v = q / 32768.0;
    }

    Utterance {
        name: format!("{digit}_synth{speaker}_{take}"),
        digit,
        signal: Signal::new(out, fs).expect("finite synthetic samples"),
    }
}

pub fn synthetic_corpus(count: usize, seed: u64) -> Vec<Utterance> {
    (0..count).map(|i| synthetic_utterance(seed, i)).collect()
}

/// Writes `count` utterances as 16-bit WAV files into `dir`.
pub fn write_synthetic_corpus(dir: impl AsRef<Path>, count: usize, seed: u64) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    synthetic_corpus(count, seed)
        .into_iter()
        .map(|u| {
            let path = dir.join(format!("{}.wav", u.name));
            write_wav(&path, u.signal.values(), SAMPLE_RATE_HZ)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::read_wav;

    #[test]
    fn shape_and_determinism() {
        let a = synthetic_corpus(12, 42);
        let b = synthetic_corpus(12, 42);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.signal, y.signal);
            assert!((2500..=5000).contains(&x.signal.len()));
            assert_eq!(x.signal.sample_rate_hz(), 8000.0);
            assert!(x.signal.values().iter().all(|v| v.abs() <= 1.0));
        }
        assert_eq!(a[3].name, "3_synth0_0");
        assert_eq!(a[11].name, "1_synth1_0");
        assert_ne!(synthetic_corpus(1, 43)[0].signal, a[0].signal);
    }

    #[test]
    fn written_files_read_back_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let paths = write_synthetic_corpus(dir.path(), 3, 7).unwrap();
        let corpus = synthetic_corpus(3, 7);
        for (p, u) in paths.iter().zip(&corpus) {
            assert_eq!(read_wav(p).unwrap().values(), u.signal.values());
        }
    }
}
