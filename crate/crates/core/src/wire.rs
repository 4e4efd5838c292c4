//! Compact binary transport for compressed signals.
//!
//! Layout (all integers little-endian):
//!
//! | bytes  | field                                            |
//! |--------|--------------------------------------------------|
//! | 0..4   | magic `TSC1`                                     |
//! | 4      | version (`1`)                                    |
//! | 5      | method tag (0 TSC, 1 PAA, 2 DFT, 3 RANDOM)       |
//! | 6..8   | reserved, zero                                   |
//! | 8..12  | original length (`u32`)                          |
//! | 12..16 | entry count (`u32`)                              |
//!
//! Point payloads (TSC, PAA, RANDOM) follow with one entry per point: the
//! LEB128 varint of the index delta (the first delta is the first index)
//! and the value as `f32`. DFT payloads use the same framing with one entry
//! per kept bin: varint bin delta, then the real and imaginary parts as two
//! `f32`s. The sample rate is not transmitted.

use crate::baselines::dft::DftCompressed;
use crate::error::{Error, Result};
use rustfft::num_complex::Complex64;

pub const MAGIC: [u8; 4] = *b"TSC1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MethodTag {
    Tsc = 0,
    Paa = 1,
    Dft = 2,
    Random = 3,
}

impl MethodTag {
    pub fn from_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(Self::Tsc),
            1 => Some(Self::Paa),
            2 => Some(Self::Dft),
            3 => Some(Self::Random),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Tsc => "tsc",
            Self::Paa => "paa",
            Self::Dft => "dft",
            Self::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub index: usize,
    pub value: f64,
}

impl Point {
    pub fn new(index: usize, value: f64) -> Self {
        Self { index, value }
    }
}

/// Surviving `(index, value)` samples of a point-based compression.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressedSignal {
    points: Vec<Point>,
    original_length: usize,
    sample_rate_hz: f64,
    method: MethodTag,
}

impl CompressedSignal {
    pub fn new(
        points: Vec<Point>,
        original_length: usize,
        sample_rate_hz: f64,
        method: MethodTag,
    ) -> Result<Self> {
        if method == MethodTag::Dft {
            return Err(Error::Parameter(
                "DFT payloads are carried by DftCompressed, not point lists".into(),
            ));
        }
        if original_length == 0 || original_length > u32::MAX as usize {
            return Err(Error::Parameter(format!(
                "original length {original_length} out of range"
            )));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::Parameter(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        for w in points.windows(2) {
            if w[1].index <= w[0].index {
                return Err(Error::Corrupt(format!(
                    "indices not strictly increasing ({} then {})",
                    w[0].index, w[1].index
                )));
            }
        }
        if let Some(last) = points.last() {
            if last.index >= original_length {
                return Err(Error::Corrupt(format!(
                    "index {} beyond original length {original_length}",
                    last.index
                )));
            }
        }
        if let Some(p) = points.iter().find(|p| !p.value.is_finite()) {
            return Err(Error::Corrupt(format!("non-finite value at index {}", p.index)));
        }
        if method == MethodTag::Tsc {
            let spans = points.first().map(|p| p.index) == Some(0)
                && points.last().map(|p| p.index) == Some(original_length - 1);
            if !spans {
                return Err(Error::Corrupt(
                    "TSC compression must retain both endpoints".into(),
                ));
            }
        }
        Ok(Self {
            points,
            original_length,
            sample_rate_hz,
            method,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.points.iter().map(|p| p.index)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn original_length(&self) -> usize {
        self.original_length
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn method(&self) -> MethodTag {
        self.method
    }

    /// Values rounded to what survives the `f32` wire boundary.
    pub fn quantized(&self) -> Self {
        let points = self
            .points
            .iter()
            .map(|p| Point::new(p.index, p.value as f32 as f64))
            .collect();
        Self { points, ..*self }
    }

    pub fn wire_cost(&self) -> usize {
        wire_cost(&deltas(self.indices()))
    }
}

/// Number of bytes LEB128 needs for `v`.
pub fn varint_len(mut v: u64) -> usize {
    let mut n = 1;
    while v >= 0x80 {
        v >>= 7;
        n += 1;
    }
    n
}

pub fn write_varint(out: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        out.push((v as u8 & 0x7f) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

/// Index deltas as they appear on the wire; the first delta is the first index.
pub fn deltas(indices: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut prev = 0usize;
    indices
        .into_iter()
        .map(|i| {
            let d = (i - prev) as u64;
            prev = i;
            d
        })
        .collect()
}

/// Exact size of a point payload with the given index deltas.
pub fn wire_cost(deltas: &[u64]) -> usize {
    HEADER_LEN + deltas.iter().map(|&d| varint_len(d) + 4).sum::<usize>()
}

/// Exact size of a DFT payload with the given bin deltas.
pub fn dft_wire_cost(bin_deltas: &[u64]) -> usize {
    HEADER_LEN + bin_deltas.iter().map(|&d| varint_len(d) + 8).sum::<usize>()
}

fn header(out: &mut Vec<u8>, tag: MethodTag, original_length: usize, count: usize) {
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(tag as u8);
    out.extend_from_slice(&[0, 0]);
    out.extend_from_slice(&(original_length as u32).to_le_bytes());
    out.extend_from_slice(&(count as u32).to_le_bytes());
}

pub fn encode_wire(compressed: &CompressedSignal) -> Vec<u8> {
    let mut out = Vec::with_capacity(compressed.wire_cost());
    header(
        &mut out,
        compressed.method,
        compressed.original_length,
        compressed.points.len(),
    );
    let mut prev = 0;
    for p in &compressed.points {
        write_varint(&mut out, (p.index - prev) as u64);
        out.extend_from_slice(&(p.value as f32).to_le_bytes());
        prev = p.index;
    }
    out
}

pub fn encode_dft_wire(compressed: &DftCompressed) -> Vec<u8> {
    let kept = compressed.kept();
    let mut out = Vec::with_capacity(compressed.wire_cost());
    header(&mut out, MethodTag::Dft, compressed.original_length(), kept.len());
    let mut prev = 0;
    for &(bin, c) in kept {
        write_varint(&mut out, (bin - prev) as u64);
        out.extend_from_slice(&(c.re as f32).to_le_bytes());
        out.extend_from_slice(&(c.im as f32).to_le_bytes());
        prev = bin;
    }
    out
}

/// A decoded wire file of either payload shape.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Points(CompressedSignal),
    Spectrum(DftCompressed),
}

impl Payload {
    pub fn method(&self) -> MethodTag {
        match self {
            Payload::Points(c) => c.method(),
            Payload::Spectrum(_) => MethodTag::Dft,
        }
    }

    pub fn original_length(&self) -> usize {
        match self {
            Payload::Points(c) => c.original_length(),
            Payload::Spectrum(d) => d.original_length(),
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(Error::Truncated(format!(
                "needed {n} bytes at offset {}, {} left",
                self.pos,
                self.remaining()
            )));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f32(&mut self) -> Result<f32> {
        Ok(f32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn varint(&mut self) -> Result<u64> {
        let mut v = 0u64;
        for shift in (0..35).step_by(7) {
            let b = self.take(1)?[0];
            v |= u64::from(b & 0x7f) << shift;
            if b & 0x80 == 0 {
                if v > u64::from(u32::MAX) {
                    break;
                }
                return Ok(v);
            }
        }
        Err(Error::Corrupt(format!("varint overflow near offset {}", self.pos)))
    }
}

struct Header {
    tag: MethodTag,
    original_length: usize,
    count: usize,
}

fn read_header(r: &mut Reader<'_>) -> Result<Header> {
    if r.remaining() < HEADER_LEN {
        return Err(Error::Truncated(format!(
            "header needs {HEADER_LEN} bytes, got {}",
            r.remaining()
        )));
    }
    if r.take(4)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = r.take(1)?[0];
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let tag_byte = r.take(1)?[0];
    let tag = MethodTag::from_byte(tag_byte)
        .ok_or_else(|| Error::Format(format!("unknown method tag {tag_byte}")))?;
    if r.take(2)? != [0, 0] {
        return Err(Error::Format("reserved bytes not zero".into()));
    }
    let original_length = r.u32()? as usize;
    let count = r.u32()? as usize;
    if original_length == 0 {
        return Err(Error::Corrupt("original length is zero".into()));
    }
    let min_entry = if tag == MethodTag::Dft { 9 } else { 5 };
    if count.saturating_mul(min_entry) > r.remaining() {
        return Err(Error::Truncated(format!(
            "declared {count} entries but only {} bytes follow",
            r.remaining()
        )));
    }
    Ok(Header {
        tag,
        original_length,
        count,
    })
}

fn next_index(r: &mut Reader<'_>, prev: Option<usize>, limit: usize) -> Result<usize> {
    let delta = r.varint()? as usize;
    let index = match prev {
        None => delta,
        Some(_) if delta == 0 => {
            return Err(Error::Corrupt("non-increasing index (zero delta)".into()))
        }
        Some(p) => p + delta,
    };
    if index >= limit {
        return Err(Error::Corrupt(format!("index {index} beyond limit {limit}")));
    }
    Ok(index)
}

fn finish(r: &Reader<'_>) -> Result<()> {
    if r.remaining() != 0 {
        return Err(Error::Corrupt(format!("{} trailing bytes", r.remaining())));
    }
    Ok(())
}

/// Decodes either payload shape. The sample rate is supplied by the receiver.
pub fn decode_any(bytes: &[u8], sample_rate_hz: f64) -> Result<Payload> {
    let mut r = Reader { buf: bytes, pos: 0 };
    let h = read_header(&mut r)?;
    if h.tag == MethodTag::Dft {
        let mut kept = Vec::with_capacity(h.count);
        let mut prev = None;
        let bins = h.original_length / 2 + 1;
        for _ in 0..h.count {
            let bin = next_index(&mut r, prev, bins)?;
            let re = r.f32()?;
            let im = r.f32()?;
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::Corrupt(format!("non-finite coefficient at bin {bin}")));
            }
            kept.push((bin, Complex64::new(re as f64, im as f64)));
            prev = Some(bin);
        }
        finish(&r)?;
        return Ok(Payload::Spectrum(DftCompressed::new(
            kept,
            h.original_length,
            sample_rate_hz,
        )?));
    }
    let mut points = Vec::with_capacity(h.count);
    let mut prev = None;
    for _ in 0..h.count {
        let index = next_index(&mut r, prev, h.original_length)?;
        let value = r.f32()?;
        if !value.is_finite() {
            return Err(Error::Corrupt(format!("non-finite value at index {index}")));
        }
        points.push(Point::new(index, value as f64));
        prev = Some(index);
    }
    finish(&r)?;
    let c = CompressedSignal::new(points, h.original_length, sample_rate_hz, h.tag)?;
    Ok(Payload::Points(c))
}

/// Decodes a point payload (TSC, PAA or RANDOM).
pub fn decode_wire(bytes: &[u8], sample_rate_hz: f64) -> Result<CompressedSignal> {
    match decode_any(bytes, sample_rate_hz)? {
        Payload::Points(c) => Ok(c),
        Payload::Spectrum(_) => Err(Error::Format(
            "payload is a DFT spectrum, not a point list".into(),
        )),
    }
}

pub fn decode_dft_wire(bytes: &[u8], sample_rate_hz: f64) -> Result<DftCompressed> {
    match decode_any(bytes, sample_rate_hz)? {
        Payload::Spectrum(d) => Ok(d),
        Payload::Points(_) => Err(Error::Format("payload is a point list, not a DFT spectrum".into())),
    }
}
