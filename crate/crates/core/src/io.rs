//! Signal ingestion and export: mono PCM WAV and one-value-per-line CSV.

use crate::error::{Error, Result};
use crate::signal::Signal;
use hound::{SampleFormat, WavReader, WavSpec, WavWriter};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

/// Sample rate assigned to CSV input, which carries none.
pub const CSV_DEFAULT_RATE_HZ: f64 = 1.0;

fn map_hound(e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::Io(io),
        other => Error::Format(other.to_string()),
    }
}

/// Reads 8- or 16-bit integer PCM, scaling by the type's maximum magnitude
/// so `i16::MIN` maps to exactly -1.0.
pub fn read_wav_from<R: Read>(reader: R) -> Result<Signal> {
    let mut wav = WavReader::new(reader).map_err(map_hound)?;
    let spec = wav.spec();
    if spec.channels != 1 {
        return Err(Error::UnsupportedChannels(spec.channels));
    }
    if spec.sample_format != SampleFormat::Int {
        return Err(Error::Format("floating-point WAV is not supported".into()));
    }
    let values: Vec<f64> = match spec.bits_per_sample {
        8 => wav
            .samples::<i8>()
            .map(|s| s.map(|v| v as f64 / 128.0))
            .collect::<std::result::Result<_, _>>(),
        16 => wav
            .samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<std::result::Result<_, _>>(),
        bits => return Err(Error::Format(format!("unsupported bit depth {bits}"))),
    }
    .map_err(map_hound)?;
    Signal::new(values, spec.sample_rate as f64)
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<Signal> {
    read_wav_from(BufReader::new(File::open(path)?))
}

/// Writes 16-bit mono PCM; values are clamped to [-1, 1).
pub fn write_wav(path: impl AsRef<Path>, values: &[f64], sample_rate_hz: u32) -> Result<()> {
    let spec = WavSpec {
        channels: 1,
        sample_rate: sample_rate_hz,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let mut w = WavWriter::create(path, spec).map_err(map_hound)?;
    for &v in values {
        let s = (v * 32768.0).round().clamp(i16::MIN as f64, i16::MAX as f64) as i16;
        w.write_sample(s).map_err(map_hound)?;
    }
    w.finalize().map_err(map_hound)
}

/// One sample per line. A non-numeric first line is treated as a header;
/// blank lines are skipped.
pub fn read_csv_from<R: BufRead>(reader: R, sample_rate_hz: f64) -> Result<Signal> {
    let mut values = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let field = line.trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if lineno == 0 => continue,
            Err(_) => {
                return Err(Error::Format(format!(
                    "line {}: not a number: {field:?}",
                    lineno + 1
                )))
            }
        }
    }
    Signal::new(values, sample_rate_hz)
}

pub fn read_csv(path: impl AsRef<Path>, sample_rate_hz: f64) -> Result<Signal> {
    read_csv_from(BufReader::new(File::open(path)?), sample_rate_hz)
}

pub fn write_csv(path: impl AsRef<Path>, values: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for v in values {
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

/// Dispatches on extension: `.wav` is PCM, anything else is CSV.
pub fn read_signal(path: impl AsRef<Path>) -> Result<Signal> {
    let path = path.as_ref();
    if is_wav(path) {
        read_wav(path)
    } else {
        read_csv(path, CSV_DEFAULT_RATE_HZ)
    }
}

pub fn is_wav(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("wav"))
}
