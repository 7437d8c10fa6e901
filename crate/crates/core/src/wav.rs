//! WAV input and output for PCM16 and IEEE float32 files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Signal;

const PCM16_SCALE: f64 = 32768.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BitDepth {
    #[default]
    Pcm16,
    Float32,
}

/// Outcome of a write: how many samples were outside `[-1, 1]` and clipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WriteReport {
    pub clipped: usize,
}

fn from_hound(err: hound::Error) -> Error {
    match err {
        hound::Error::IoError(e) => Error::Io(e),
        hound::Error::FormatError(msg) => Error::Format(msg.to_string()),
        hound::Error::Unsupported => Error::Format("unsupported WAV feature".into()),
        other => Error::Format(other.to_string()),
    }
}

/// Decoded channels plus the encoding they were stored in.
#[derive(Debug, Clone, PartialEq)]
pub struct WavFile {
    pub channels: Vec<Signal>,
    pub bit_depth: BitDepth,
}

/// Read a WAV file into one [`Signal`] per channel, normalised to `[-1, 1]`.
pub fn read_wav(path: impl AsRef<Path>) -> Result<Vec<Signal>> {
    Ok(read_wav_file(path)?.channels)
}

pub fn read_wav_file(path: impl AsRef<Path>) -> Result<WavFile> {
    let mut reader = hound::WavReader::open(path).map_err(from_hound)?;
    let spec = reader.spec();
    let channels = usize::from(spec.channels);
    if channels == 0 {
        return Err(Error::Format("WAV header declares zero channels".into()));
    }
    if reader.len() == 0 {
        return Err(Error::invalid("WAV data chunk is empty"));
    }
    let (bit_depth, interleaved): (BitDepth, Vec<f64>) =
        match (spec.sample_format, spec.bits_per_sample) {
            (hound::SampleFormat::Int, 16) => (
                BitDepth::Pcm16,
                reader
                    .samples::<i16>()
                    .map(|s| s.map(|v| f64::from(v) / PCM16_SCALE))
                    .collect::<std::result::Result<_, _>>()
                    .map_err(from_hound)?,
            ),
            (hound::SampleFormat::Float, 32) => (
                BitDepth::Float32,
                reader
                    .samples::<f32>()
                    .map(|s| s.map(f64::from))
                    .collect::<std::result::Result<_, _>>()
                    .map_err(from_hound)?,
            ),
            (hound::SampleFormat::Int, bits) => {
                return Err(Error::Format(format!(
                "unsupported encoding: {bits}-bit integer PCM (expected 16-bit PCM or 32-bit float)"
            )))
            }
            (hound::SampleFormat::Float, bits) => {
                return Err(Error::Format(format!(
                    "unsupported encoding: {bits}-bit float (expected 16-bit PCM or 32-bit float)"
                )))
            }
        };
    if interleaved.len() % channels != 0 {
        return Err(Error::Format(format!(
            "{} samples do not divide evenly into {channels} channels",
            interleaved.len()
        )));
    }
    let fs = f64::from(spec.sample_rate);
    let channels = (0..channels)
        .map(|c| {
            let samples = interleaved
                .iter()
                .skip(c)
                .step_by(channels)
                .copied()
                .collect();
            Signal::new(samples, fs)
        })
        .collect::<Result<_>>()?;
    Ok(WavFile {
        channels,
        bit_depth,
    })
}

/// Write channels of equal length and sample rate as an interleaved WAV.
///
/// Samples outside `[-1, 1]` are clipped and counted.
pub fn write_wav(
    path: impl AsRef<Path>,
    channels: &[Signal],
    depth: BitDepth,
) -> Result<WriteReport> {
    let Some(first) = channels.first() else {
        return Err(Error::invalid("no channels to write"));
    };
    let channel_count = u16::try_from(channels.len())
        .map_err(|_| Error::invalid(format!("too many channels ({})", channels.len())))?;
    let len = first.len();
    let fs = first.sample_rate_hz();
    if channels
        .iter()
        .any(|c| c.len() != len || c.sample_rate_hz() != fs)
    {
        return Err(Error::invalid("channels differ in length or sample rate"));
    }
    if fs.fract() != 0.0 || fs > f64::from(u32::MAX) {
        return Err(Error::invalid(format!(
            "WAV needs an integer sample rate, got {fs}"
        )));
    }
    let (bits, format) = match depth {
        BitDepth::Pcm16 => (16, hound::SampleFormat::Int),
        BitDepth::Float32 => (32, hound::SampleFormat::Float),
    };
    let spec = hound::WavSpec {
        channels: channel_count,
        sample_rate: fs as u32,
        bits_per_sample: bits,
        sample_format: format,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(from_hound)?;
    let mut report = WriteReport::default();
    for n in 0..len {
        for channel in channels {
            let raw = channel.samples()[n];
            let v = raw.clamp(-1.0, 1.0);
            if v != raw {
                report.clipped += 1;
            }
            match depth {
                BitDepth::Pcm16 => {
                    let q = (v * PCM16_SCALE).round().clamp(-32768.0, 32767.0) as i16;
                    writer.write_sample(q).map_err(from_hound)?;
                }
                BitDepth::Float32 => writer.write_sample(v as f32).map_err(from_hound)?,
            }
        }
    }
    writer.finalize().map_err(from_hound)?;
    if report.clipped > 0 {
        log::warn!("clipped {} sample(s) to [-1, 1]", report.clipped);
    }
    Ok(report)
}
