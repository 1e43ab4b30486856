//! RIFF/WAVE encoding and decoding.
//!
//! Files are written with the canonical 44-byte header:
//!
//! ```text
//! offset size  field
//!      0    4  "RIFF"
//!      4    4  36 + data bytes            (u32 LE)
//!      8    4  "WAVE"
//!     12    4  "fmt "
//!     16    4  16                         (fmt chunk size)
//!     20    2  1 = PCM, 3 = IEEE float
//!     22    2  1 channel
//!     24    4  sample rate
//!     28    4  byte rate = rate * bytes per sample
//!     32    2  block align = bytes per sample
//!     34    2  bits per sample (16 or 32)
//!     36    4  "data"
//!     40    4  data bytes
//!     44       little-endian samples
//! ```
//!
//! The reader accepts PCM 8/16/24/32-bit and float 32/64-bit, including
//! WAVE_FORMAT_EXTENSIBLE headers, skips unknown chunks, and averages
//! multi-channel audio down to mono.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SignalBuffer;

const FORMAT_PCM: u16 = 1;
const FORMAT_FLOAT: u16 = 3;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WavFormat {
    Pcm16,
    #[default]
    Float32,
}

impl FromStr for WavFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pcm16" => Ok(WavFormat::Pcm16),
            "float32" => Ok(WavFormat::Float32),
            other => Err(Error::param(format!("unknown WAV format `{other}` (pcm16 | float32)"))),
        }
    }
}

impl std::fmt::Display for WavFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WavFormat::Pcm16 => "pcm16",
            WavFormat::Float32 => "float32",
        })
    }
}

impl WavFormat {
    fn bytes_per_sample(self) -> u16 {
        match self {
            WavFormat::Pcm16 => 2,
            WavFormat::Float32 => 4,
        }
    }
}

/// Encodes a mono file in memory. Samples must lie in [-1, 1].
pub fn encode_wav(signal: &SignalBuffer, format: WavFormat) -> Result<Vec<u8>> {
    if let Some(i) = signal.samples().iter().position(|s| s.abs() > 1.0) {
        return Err(Error::param(format!(
            "sample {i} = {} is outside [-1, 1]; normalize before writing",
            signal.samples()[i]
        )));
    }
    let bps = format.bytes_per_sample();
    let data_len = signal.len() as u64 * bps as u64;
    if data_len > (u32::MAX - 36) as u64 {
        return Err(Error::param("signal too long for a RIFF file"));
    }
    let data_len = data_len as u32;
    let rate = signal.sample_rate_hz();
    let mut out = Vec::with_capacity(44 + data_len as usize);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVEfmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    let tag = match format {
        WavFormat::Pcm16 => FORMAT_PCM,
        WavFormat::Float32 => FORMAT_FLOAT,
    };
    out.extend_from_slice(&tag.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&rate.to_le_bytes());
    out.extend_from_slice(&(rate * bps as u32).to_le_bytes());
    out.extend_from_slice(&bps.to_le_bytes());
    out.extend_from_slice(&(bps * 8).to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    match format {
        WavFormat::Pcm16 => {
            for &s in signal.samples() {
                let q = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
                out.extend_from_slice(&q.to_le_bytes());
            }
        }
        WavFormat::Float32 => {
            for &s in signal.samples() {
                out.extend_from_slice(&(s as f32).to_le_bytes());
            }
        }
    }
    Ok(out)
}

/// Writes `bytes` to a temporary file beside `path`, then renames it into
/// place.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::Builder::new()
        .prefix(".partial-")
        .tempfile_in(dir)
        .map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn write_wav(signal: &SignalBuffer, path: &Path, format: WavFormat) -> Result<()> {
    let bytes = encode_wav(signal, format)?;
    write_atomic(path, &bytes)
}

pub fn read_wav(path: &Path) -> Result<SignalBuffer> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_wav(&bytes)
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::WavParse {
        offset: offset as u64,
        message: message.into(),
    }
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

struct Fmt {
    format: u16,
    channels: u16,
    rate: u32,
    block_align: u16,
    bits: u16,
}

fn parse_fmt(b: &[u8], at: usize, size: usize) -> Result<Fmt> {
    if size < 16 {
        return Err(parse_err(at, format!("fmt chunk is {size} bytes, need 16")));
    }
    let mut format = u16_at(b, at);
    if format == FORMAT_EXTENSIBLE {
        if size < 40 {
            return Err(parse_err(at, "extensible fmt chunk shorter than 40 bytes"));
        }
        // first two bytes of the subformat GUID carry the real tag
        format = u16_at(b, at + 24);
    }
    let fmt = Fmt {
        format,
        channels: u16_at(b, at + 2),
        rate: u32_at(b, at + 4),
        block_align: u16_at(b, at + 12),
        bits: u16_at(b, at + 14),
    };
    if fmt.channels == 0 {
        return Err(parse_err(at + 2, "zero channels"));
    }
    if fmt.rate == 0 {
        return Err(parse_err(at + 4, "zero sample rate"));
    }
    if fmt.bits == 0 || !fmt.bits.is_multiple_of(8) {
        return Err(parse_err(at + 14, format!("{} bits per sample", fmt.bits)));
    }
    if fmt.block_align as u32 != fmt.channels as u32 * (fmt.bits as u32 / 8) {
        return Err(parse_err(
            at + 12,
            format!(
                "block align {} does not match {} channels x {} bits",
                fmt.block_align, fmt.channels, fmt.bits
            ),
        ));
    }
    Ok(fmt)
}

fn decode_sample(format: u16, bits: u16, s: &[u8]) -> Result<f64> {
    Ok(match (format, bits) {
        (FORMAT_PCM, 8) => (s[0] as f64 - 128.0) / 128.0,
        (FORMAT_PCM, 16) => i16::from_le_bytes([s[0], s[1]]) as f64 / 32768.0,
        (FORMAT_PCM, 24) => {
            let v = i32::from_le_bytes([0, s[0], s[1], s[2]]) >> 8;
            v as f64 / 8_388_608.0
        }
        (FORMAT_PCM, 32) => i32::from_le_bytes([s[0], s[1], s[2], s[3]]) as f64 / 2_147_483_648.0,
        (FORMAT_FLOAT, 32) => f32::from_le_bytes([s[0], s[1], s[2], s[3]]) as f64,
        (FORMAT_FLOAT, 64) => f64::from_le_bytes(s[..8].try_into().expect("8 bytes")),
        (f, b) => {
            return Err(Error::UnsupportedFormat(format!(
                "format tag {f:#06x} with {b} bits per sample"
            )))
        }
    })
}

/// Decodes a RIFF/WAVE byte buffer to mono.
pub fn decode_wav(b: &[u8]) -> Result<SignalBuffer> {
    if b.len() < 12 {
        return Err(parse_err(b.len(), "file shorter than the 12-byte RIFF header"));
    }
    if &b[0..4] != b"RIFF" {
        return Err(parse_err(0, "missing RIFF tag"));
    }
    if &b[8..12] != b"WAVE" {
        return Err(parse_err(8, "missing WAVE tag"));
    }
    let mut at = 12;
    let mut fmt: Option<Fmt> = None;
    loop {
        if at + 8 > b.len() {
            return Err(parse_err(at, "reached end of file before a data chunk"));
        }
        let id = &b[at..at + 4];
        let size = u32_at(b, at + 4) as usize;
        let body = at + 8;
        if body + size > b.len() {
            return Err(parse_err(
                at + 4,
                format!(
                    "chunk `{}` declares {size} bytes but only {} remain",
                    String::from_utf8_lossy(id),
                    b.len() - body
                ),
            ));
        }
        match id {
            b"fmt " => fmt = Some(parse_fmt(b, body, size)?),
            b"data" => {
                let fmt = fmt.ok_or_else(|| parse_err(at, "data chunk before fmt chunk"))?;
                return decode_data(&fmt, &b[body..body + size]);
            }
            _ => {}
        }
        at = body + size + (size & 1);
    }
}

fn decode_data(fmt: &Fmt, data: &[u8]) -> Result<SignalBuffer> {
    let width = (fmt.bits / 8) as usize;
    let channels = fmt.channels as usize;
    let block = fmt.block_align as usize;
    // reject unsupported codecs even for empty data
    decode_sample(fmt.format, fmt.bits, &[0u8; 8])?;
    let mut samples = Vec::with_capacity(data.len() / block);
    for frame in data.chunks_exact(block) {
        let mut acc = 0.0;
        for c in 0..channels {
            acc += decode_sample(fmt.format, fmt.bits, &frame[c * width..(c + 1) * width])?;
        }
        let v = acc / channels as f64;
        if !v.is_finite() {
            return Err(Error::UnsupportedFormat("non-finite float sample".into()));
        }
        samples.push(v);
    }
    SignalBuffer::new(samples, fmt.rate)
}
