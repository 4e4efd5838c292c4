//! Corpus sweep: every (signal, method, fraction, noise) cell is compressed
//! to the same byte target, round-tripped through the wire format, and
//! scored by approximate entropy and DTW distance.
//!
//! Pipeline per signal and noise level: standardize, add seeded Gaussian
//! noise, then compress the noisy signal. The byte target for fraction `f`
//! is `floor((1 - f) * 4 n)`; each method takes the largest payload that
//! fits. DTW compares the reconstruction with the compressor's input, and
//! approximate entropy uses a tolerance fixed by the compressor's input
//! (`0.2` of its standard deviation) so every method is scored on the same
//! scale.

use crate::baselines::dft::{half_len, half_spectrum};
use crate::baselines::random::interior_order;
use crate::baselines::{
    dft_compress, paa_compress, random_compress, reconstruct_payload, DftSelection,
};
use crate::corpus::synthetic_corpus;
use crate::error::{Error, Result};
use crate::io::{is_wav, read_signal};
use crate::metrics::{
    add_gaussian_noise, approx_entropy, compression_fraction, dtw_distance, mean,
    population_std, sample_std, standardize, DEFAULT_EMBEDDING, DEFAULT_TOLERANCE_FACTOR,
};
use crate::signal::Signal;
use crate::simplify::{Budget, Simplifier};
use crate::wire::{decode_any, encode_dft_wire, encode_wire, varint_len, HEADER_LEN};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Tsc,
    Dft,
    Paa,
    Random,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Tsc, Method::Dft, Method::Paa, Method::Random];

    pub fn name(self) -> &'static str {
        match self {
            Method::Tsc => "tsc",
            Method::Dft => "dft",
            Method::Paa => "paa",
            Method::Random => "random",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parameter(format!("unknown method {s:?}")))
    }
}

/// One signal of the corpus with labels parsed from its name.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub label: Option<FsddLabel>,
    pub signal: Signal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FsddLabel {
    pub digit: u8,
    pub speaker: String,
    pub take: u32,
}

/// Parses `{digit}_{speaker}_{take}` (extension optional).
pub fn parse_fsdd_name(name: &str) -> Option<FsddLabel> {
    let stem = name.rsplit_once('.').map_or(name, |(s, _)| s);
    let mut parts = stem.split('_');
    let (d, s, t) = (parts.next()?, parts.next()?, parts.next()?);
    if parts.next().is_some() || s.is_empty() {
        return None;
    }
    let digit: u8 = d.parse().ok().filter(|&d| d < 10)?;
    Some(FsddLabel {
        digit,
        speaker: s.to_string(),
        take: t.parse().ok()?,
    })
}

/// Reads every `.wav` and `.csv` file in `dir`, sorted by file name.
pub fn load_corpus(dir: impl AsRef<Path>, limit: Option<usize>) -> Result<Vec<CorpusEntry>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && (is_wav(p)
                    || p.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("csv")))
        })
        .collect();
    paths.sort();
    paths.truncate(limit.unwrap_or(usize::MAX));
    paths
        .into_iter()
        .map(|p| {
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let signal = read_signal(&p)?;
            Ok(CorpusEntry {
                label: parse_fsdd_name(&name),
                name,
                signal,
            })
        })
        .collect()
}

pub fn synthetic_entries(count: usize, seed: u64) -> Vec<CorpusEntry> {
    synthetic_corpus(count, seed)
        .into_iter()
        .map(|u| CorpusEntry {
            label: parse_fsdd_name(&u.name),
            name: u.name,
            signal: u.signal,
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub fractions: Vec<f64>,
    pub noise_multiples: Vec<f64>,
    pub seed: u64,
    pub dft_selection: DftSelection,
    pub apen: bool,
    pub dtw: bool,
    pub timing: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            methods: Method::ALL.to_vec(),
            fractions: vec![0.5, 0.9, 0.95, 0.99],
            noise_multiples: vec![0.0],
            seed: 0,
            dft_selection: DftSelection::FirstK,
            apen: true,
            dtw: true,
            timing: true,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.methods.is_empty() || self.fractions.is_empty() || self.noise_multiples.is_empty() {
            return Err(Error::Parameter("methods, fractions and noise levels must be non-empty".into()));
        }
        if let Some(f) = self.fractions.iter().find(|f| !(0.0..1.0).contains(*f)) {
            return Err(Error::Parameter(format!("fraction {f} outside [0, 1)")));
        }
        if let Some(s) = self.noise_multiples.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return Err(Error::Parameter(format!("noise multiple {s} must be non-negative")));
        }
        Ok(())
    }
}

/// One CSV row. Detail rows describe a single cell; aggregate rows summarise
/// the `ok` detail rows of one (method, fraction, noise) group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub row_type: &'static str,
    pub file: String,
    pub digit: Option<u8>,
    pub speaker: Option<String>,
    pub take: Option<u32>,
    pub method: Method,
    pub target_fraction: f64,
    pub noise_multiple: f64,
    pub status: String,
    pub samples: Option<usize>,
    pub count: usize,
    pub target_bytes: Option<usize>,
    pub bytes: Option<f64>,
    pub achieved_fraction: Option<f64>,
    pub kept: Option<usize>,
    pub apen: Option<f64>,
    pub apen_se: Option<f64>,
    pub dtw: Option<f64>,
    pub dtw_se: Option<f64>,
    pub seconds: Option<f64>,
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub details: Vec<BenchRow>,
    pub aggregates: Vec<BenchRow>,
}

impl BenchReport {
    pub fn aggregate(&self, method: Method, fraction: f64, noise: f64) -> Option<&BenchRow> {
        self.aggregates.iter().find(|r| {
            r.method == method && r.target_fraction == fraction && r.noise_multiple == noise
        })
    }

    /// Detail rows followed by aggregate rows.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for row in self.details.iter().chain(&self.aggregates) {
            out.serialize(row).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Format(format!("{other:?}")),
    }
}

/// Byte target for a compression fraction over a raw 4-bytes-per-sample
/// baseline.
pub fn target_bytes(len: usize, fraction: f64) -> usize {
    ((1.0 - fraction) * (4 * len) as f64).floor() as usize
}

/// Payload size of `indices` (any order) as a point list. Adding an index
/// never lowers the cost, so prefix costs are non-decreasing.
fn prefix_costs(order: impl IntoIterator<Item = usize>, entry: usize) -> Vec<usize> {
    let mut set = BTreeSet::new();
    let mut cost = HEADER_LEN;
    let mut out = vec![cost];
    for i in order {
        let left = set.range(..i).next_back().copied();
        let right = set.range(i + 1..).next().copied();
        let vl = |d: usize| varint_len(d as u64);
        // the first delta is measured from zero
        let from = left.unwrap_or(0);
        cost += entry + vl(i - from);
        if let Some(r) = right {
            cost += vl(r - i);
            cost -= vl(r - from);
        }
        set.insert(i);
        out.push(cost);
    }
    out
}

/// Largest `k` with `costs[k] <= budget`, if any `k >= min`.
fn largest_fitting(costs: &[usize], budget: usize, min: usize) -> Option<usize> {
    let k = costs.partition_point(|&c| c <= budget).checked_sub(1)?;
    (k >= min).then_some(k)
}

fn paa_cost(n: usize, w: usize) -> usize {
    let count = n.div_ceil(w);
    HEADER_LEN + 4 * count + 1 + (count - 1) * varint_len(w as u64)
}

fn mix_seed(seed: u64, file: usize, noise: usize) -> u64 {
    seed ^ (file as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (noise as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

/// Encodes one signal under byte targets, with the per-method ordering work
/// done once up front.
pub struct ByteEncoder<'a> {
    input: &'a Signal,
    selection: DftSelection,
    seed: u64,
    simplifier: Option<Simplifier>,
    dft_costs: Option<Vec<usize>>,
    random_costs: Option<Vec<usize>>,
}

impl<'a> ByteEncoder<'a> {
    pub fn new(input: &'a Signal, methods: &[Method], selection: DftSelection, seed: u64) -> Self {
        let n = input.len();
        let simplifier = methods.contains(&Method::Tsc).then(|| Simplifier::new(input));
        let dft_costs = methods.contains(&Method::Dft).then(|| {
            let order: Vec<usize> = match selection {
                DftSelection::FirstK => (0..half_len(n)).collect(),
                DftSelection::LargestMagnitude => {
                    let spec = half_spectrum(input.values());
                    let mut o: Vec<usize> = (0..spec.len()).collect();
                    o.sort_by(|&a, &b| spec[b].norm().total_cmp(&spec[a].norm()).then(a.cmp(&b)));
                    o
                }
            };
            prefix_costs(order, 8)
        });
        let random_costs = methods
            .contains(&Method::Random)
            .then(|| prefix_costs([0, n - 1].into_iter().chain(interior_order(n, seed)), 4));
        Self {
            input,
            selection,
            seed,
            simplifier,
            dft_costs,
            random_costs,
        }
    }

    /// Largest encoding of `method` that fits in `target` bytes, with the
    /// number of points, bins or windows it keeps. `None` when even the
    /// smallest valid encoding is too big.
    ///
    /// Panics if `method` was not passed to [`ByteEncoder::new`].
    pub fn encode(&self, method: Method, target: usize) -> Result<Option<(Vec<u8>, usize)>> {
        let n = self.input.len();
        Ok(match method {
            Method::Tsc => {
                let s = self.simplifier.as_ref().expect("tsc not requested");
                match s.compress(Budget::Bytes(target)) {
                    Ok(c) => Some((encode_wire(&c), c.len())),
                    Err(Error::BudgetInfeasible(_)) => None,
                    Err(e) => return Err(e),
                }
            }
            Method::Dft => {
                let costs = self.dft_costs.as_ref().expect("dft not requested");
                match largest_fitting(costs, target, 1) {
                    Some(k) => {
                        let c = dft_compress(self.input, k, self.selection)?;
                        Some((encode_dft_wire(&c), k))
                    }
                    None => None,
                }
            }
            Method::Paa => match (1..=n).find(|&w| paa_cost(n, w) <= target) {
                Some(w) => {
                    let c = paa_compress(self.input, w)?;
                    Some((encode_wire(&c), c.len()))
                }
                None => None,
            },
            Method::Random => {
                let costs = self.random_costs.as_ref().expect("random not requested");
                match largest_fitting(costs, target, 2) {
                    Some(k) => {
                        let c = random_compress(self.input, k, self.seed)?;
                        Some((encode_wire(&c), k))
                    }
                    None => None,
                }
            }
        })
    }
}

struct Cell {
    method: Method,
    fraction: f64,
    status: String,
    target: usize,
    bytes: Option<usize>,
    kept: Option<usize>,
    apen: Option<f64>,
    dtw: Option<f64>,
    seconds: Option<f64>,
}

fn run_signal(
    signal: &Signal,
    noise: f64,
    seed: u64,
    cfg: &BenchConfig,
) -> std::result::Result<Vec<Cell>, String> {
    let base = standardize(signal).map_err(|e| e.to_string())?;
    let input = add_gaussian_noise(&base, noise, seed).map_err(|e| e.to_string())?;
    let n = input.len();
    let rate = input.sample_rate_hz();
    let tolerance = DEFAULT_TOLERANCE_FACTOR * population_std(input.values());

    let encoder = ByteEncoder::new(&input, &cfg.methods, cfg.dft_selection, seed);

    let mut cells = Vec::new();
    for &method in &cfg.methods {
        for &fraction in &cfg.fractions {
            let target = target_bytes(n, fraction);
            let start = Instant::now();
            let encoded = encoder.encode(method, target);
            let mut cell = Cell {
                method,
                fraction,
                status: String::new(),
                target,
                bytes: None,
                kept: None,
                apen: None,
                dtw: None,
                seconds: None,
            };
            let recon = match encoded {
                Err(e) => {
                    cell.status = format!("error: {e}");
                    cells.push(cell);
                    continue;
                }
                Ok(None) => {
                    cell.status = "infeasible".into();
                    cells.push(cell);
                    continue;
                }
                Ok(Some((bytes, kept))) => {
                    cell.bytes = Some(bytes.len());
                    cell.kept = Some(kept);
                    decode_any(&bytes, rate).and_then(|p| reconstruct_payload(&p))
                }
            };
            let recon = match recon {
                Ok(r) => r,
                Err(e) => {
                    cell.status = format!("error: {e}");
                    cells.push(cell);
                    continue;
                }
            };
            if cfg.timing {
                cell.seconds = Some(start.elapsed().as_secs_f64());
            }
            let metrics = (|| -> Result<()> {
                if cfg.apen {
                    cell.apen = Some(approx_entropy(recon.values(), DEFAULT_EMBEDDING, tolerance)?);
                }
                if cfg.dtw {
                    cell.dtw = Some(dtw_distance(input.values(), recon.values())?);
                }
                Ok(())
            })();
            cell.status = match metrics {
                Ok(()) => "ok".into(),
                Err(e) => format!("error: {e}"),
            };
            cells.push(cell);
        }
    }
    Ok(cells)
}

/// Runs the sweep on the current rayon pool.
pub fn run_bench(corpus: &[CorpusEntry], cfg: &BenchConfig) -> Result<BenchReport> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(Error::Parameter("corpus is empty".into()));
    }
    let tasks: Vec<(usize, usize)> = (0..corpus.len())
        .flat_map(|f| (0..cfg.noise_multiples.len()).map(move |k| (f, k)))
        .collect();
    let mut details: Vec<BenchRow> = tasks
        .par_iter()
        .flat_map_iter(|&(f, k)| {
            let entry = &corpus[f];
            let noise = cfg.noise_multiples[k];
            let seed = mix_seed(cfg.seed, f, k);
            let row = |method: Method, fraction: f64, status: String| BenchRow {
                row_type: "detail",
                file: entry.name.clone(),
                digit: entry.label.as_ref().map(|l| l.digit),
                speaker: entry.label.as_ref().map(|l| l.speaker.clone()),
                take: entry.label.as_ref().map(|l| l.take),
                method,
                target_fraction: fraction,
                noise_multiple: noise,
                status,
                samples: Some(entry.signal.len()),
                count: 1,
                target_bytes: None,
                bytes: None,
                achieved_fraction: None,
                kept: None,
                apen: None,
                apen_se: None,
                dtw: None,
                dtw_se: None,
                seconds: None,
            };
            let n = entry.signal.len();
            let rows: Vec<BenchRow> = match run_signal(&entry.signal, noise, seed, cfg) {
                Ok(cells) => cells
                    .into_iter()
                    .map(|c| BenchRow {
                        target_bytes: Some(c.target),
                        bytes: c.bytes.map(|b| b as f64),
                        achieved_fraction: c.bytes.map(|b| compression_fraction(n, b)),
                        kept: c.kept,
                        apen: c.apen,
                        dtw: c.dtw,
                        seconds: c.seconds,
                        ..row(c.method, c.fraction, c.status)
                    })
                    .collect(),
                Err(e) => cfg
                    .methods
                    .iter()
                    .flat_map(|&m| cfg.fractions.iter().map(move |&fr| (m, fr)))
                    .map(|(m, fr)| row(m, fr, format!("error: {e}")))
                    .collect(),
            };
            rows
        })
        .collect();
    details.sort_by(|a, b| {
        a.file
            .cmp(&b.file)
            .then(a.method.cmp(&b.method))
            .then(a.target_fraction.total_cmp(&b.target_fraction))
            .then(a.noise_multiple.total_cmp(&b.noise_multiple))
    });
    let aggregates = aggregate(&details);
    Ok(BenchReport { details, aggregates })
}

/// Mean and standard error (sample std over sqrt(count)) per group.
fn mean_se(x: &[f64]) -> (Option<f64>, Option<f64>) {
    match x.len() {
        0 => (None, None),
        1 => (Some(x[0]), None),
        n => (Some(mean(x)), Some(sample_std(x) / (n as f64).sqrt())),
    }
}

pub fn aggregate(details: &[BenchRow]) -> Vec<BenchRow> {
    type Key = (Method, u64, u64);
    let mut groups: BTreeMap<Key, Vec<&BenchRow>> = BTreeMap::new();
    for r in details {
        // non-negative floats order like their bit patterns
        let key = (r.method, r.target_fraction.to_bits(), r.noise_multiple.to_bits());
        groups.entry(key).or_default().push(r);
    }
    let mut out: Vec<BenchRow> = groups
        .into_values()
        .map(|rows| {
            let ok: Vec<&BenchRow> = rows.iter().copied().filter(|r| r.status == "ok").collect();
            let col = |f: fn(&BenchRow) -> Option<f64>| -> Vec<f64> { ok.iter().filter_map(|r| f(r)).collect() };
            let bytes = col(|r| r.bytes);
            let frac = col(|r| r.achieved_fraction);
            let apen = col(|r| r.apen);
            let dtw = col(|r| r.dtw);
            let secs = col(|r| r.seconds);
            let (apen, apen_se) = mean_se(&apen);
            let (dtw, dtw_se) = mean_se(&dtw);
            let first = rows[0];
            BenchRow {
                row_type: "aggregate",
                file: String::new(),
                digit: None,
                speaker: None,
                take: None,
                method: first.method,
                target_fraction: first.target_fraction,
                noise_multiple: first.noise_multiple,
                status: if ok.is_empty() { "empty".into() } else { "ok".into() },
                samples: None,
                count: ok.len(),
                target_bytes: None,
                bytes: mean_se(&bytes).0,
                achieved_fraction: mean_se(&frac).0,
                kept: None,
                apen,
                apen_se,
                dtw,
                dtw_se,
                seconds: mean_se(&secs).0,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.method
            .cmp(&b.method)
            .then(a.target_fraction.total_cmp(&b.target_fraction))
            .then(a.noise_multiple.total_cmp(&b.noise_multiple))
    });
    out
}
