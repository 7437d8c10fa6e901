//! Frequency-domain views used to check a remap: Welch power spectra,
//! spectrograms, peak and support-band detection, and Pearson correlation.

use std::f64::consts::TAU;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::Signal;

pub const DEFAULT_SEGMENT_LEN: usize = 4096;
pub const DEFAULT_OVERLAP: f64 = 0.5;

/// One-sided power spectral density on an ascending frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSpectrum {
    frequencies_hz: Vec<f64>,
    power: Vec<f64>,
}

impl PowerSpectrum {
    pub fn new(frequencies_hz: Vec<f64>, power: Vec<f64>) -> Result<Self> {
        if frequencies_hz.len() != power.len() {
            return Err(Error::invalid(format!(
                "{} frequencies but {} power values",
                frequencies_hz.len(),
                power.len()
            )));
        }
        if frequencies_hz.first().is_some_and(|f| *f < 0.0)
            || frequencies_hz
                .windows(2)
                .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::invalid(
                "frequencies must be non-negative and strictly ascending",
            ));
        }
        if power.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::invalid(
                "power values must be finite and non-negative",
            ));
        }
        Ok(Self {
            frequencies_hz,
            power,
        })
    }

    pub fn frequencies_hz(&self) -> &[f64] {
        &self.frequencies_hz
    }

    pub fn power(&self) -> &[f64] {
        &self.power
    }

    pub fn len(&self) -> usize {
        self.power.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power.is_empty()
    }

    /// Spacing of the frequency grid, or 0 for fewer than two bins.
    pub fn bin_width_hz(&self) -> f64 {
        match self.frequencies_hz.as_slice() {
            [a, b, ..] => b - a,
            _ => 0.0,
        }
    }

    /// Sum of power times bin width: the signal variance for a density.
    pub fn total_power(&self) -> f64 {
        self.power.iter().sum::<f64>() * self.bin_width_hz()
    }
}

/// Time × frequency grid of one-sided power densities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrogram {
    times_s: Vec<f64>,
    frequencies_hz: Vec<f64>,
    /// Row-major: `power[t][k]`.
    power: Vec<Vec<f64>>,
}

impl Spectrogram {
    pub fn times_s(&self) -> &[f64] {
        &self.times_s
    }

    pub fn frequencies_hz(&self) -> &[f64] {
        &self.frequencies_hz
    }

    pub fn power(&self) -> &[Vec<f64>] {
        &self.power
    }

    /// Frequency of the strongest bin in each time slice.
    pub fn ridge_hz(&self) -> Vec<f64> {
        self.power
            .iter()
            .map(|row| self.frequencies_hz[argmax(row)])
            .collect()
    }
}

/// `min(4096, largest power of two ≤ len)`.
pub fn default_segment_len(len: usize) -> usize {
    if len == 0 {
        return 0;
    }
    let largest = 1usize << (usize::BITS - 1 - len.leading_zeros());
    largest.min(DEFAULT_SEGMENT_LEN)
}

/// Periodic Hann window.
pub fn hann(len: usize) -> Vec<f64> {
    (0..len)
        .map(|n| 0.5 - 0.5 * (TAU * n as f64 / len as f64).cos())
        .collect()
}

/// Windowed one-sided periodogram helper shared by Welch and the spectrogram.
struct Periodogram {
    fft: Arc<dyn Fft<f64>>,
    window: Vec<f64>,
    scale: f64,
    buf: Vec<Complex<f64>>,
}

impl Periodogram {
    fn new(len: usize, sample_rate_hz: f64) -> Self {
        let window = hann(len);
        let energy: f64 = window.iter().map(|w| w * w).sum();
        Self {
            fft: FftPlanner::new().plan_fft_forward(len),
            scale: 1.0 / (sample_rate_hz * energy),
            window,
            buf: vec![Complex::new(0.0, 0.0); len],
        }
    }

    fn bins(&self) -> usize {
        self.window.len() / 2 + 1
    }

    /// Add this segment's density into `acc`.
    fn accumulate(&mut self, segment: &[f64], acc: &mut [f64]) {
        let len = self.window.len();
        for ((b, x), w) in self.buf.iter_mut().zip(segment).zip(&self.window) {
            *b = Complex::new(x * w, 0.0);
        }
        self.fft.process(&mut self.buf);
        let last = self.bins() - 1;
        for (k, slot) in acc.iter_mut().enumerate() {
            // Interior bins absorb their negative-frequency mirror.
            let one_sided = if k == 0 || (k == last && len % 2 == 0) {
                1.0
            } else {
                2.0
            };
            *slot += one_sided * self.scale * self.buf[k].norm_sqr();
        }
    }
}

fn frequency_axis(len: usize, sample_rate_hz: f64) -> Vec<f64> {
    (0..len / 2 + 1)
        .map(|k| k as f64 * sample_rate_hz / len as f64)
        .collect()
}

/// Welch averaged periodogram with a Hann window.
///
/// `segment_len` must be a power of two no longer than the signal;
/// `overlap_fraction` is in `[0, 1)`. Samples after the last full segment
/// are not used.
pub fn power_spectrum(
    x: &Signal,
    segment_len: usize,
    overlap_fraction: f64,
) -> Result<PowerSpectrum> {
    if segment_len < 2 || !segment_len.is_power_of_two() {
        return Err(Error::invalid(format!(
            "segment length must be a power of two ≥ 2, got {segment_len}"
        )));
    }
    if segment_len > x.len() {
        return Err(Error::invalid(format!(
            "segment length {segment_len} exceeds signal length {}",
            x.len()
        )));
    }
    if !(0.0..1.0).contains(&overlap_fraction) {
        return Err(Error::invalid(format!(
            "overlap fraction must be in [0, 1), got {overlap_fraction}"
        )));
    }
    let fs = x.sample_rate_hz();
    let overlap = (segment_len as f64 * overlap_fraction).round() as usize;
    let step = (segment_len - overlap).max(1);

    let mut pgram = Periodogram::new(segment_len, fs);
    let mut acc = vec![0.0; pgram.bins()];
    let mut segments = 0usize;
    for start in (0..=x.len() - segment_len).step_by(step) {
        pgram.accumulate(&x.samples()[start..start + segment_len], &mut acc);
        segments += 1;
    }
    let inv = 1.0 / segments as f64;
    acc.iter_mut().for_each(|p| *p *= inv);
    PowerSpectrum::new(frequency_axis(segment_len, fs), acc)
}

/// [`power_spectrum`] with the default segment length and 50% overlap.
pub fn power_spectrum_default(x: &Signal) -> Result<PowerSpectrum> {
    power_spectrum(x, default_segment_len(x.len()), DEFAULT_OVERLAP)
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Frequency of the global maximum; ties resolve to the lowest frequency.
pub fn peak_frequency(ps: &PowerSpectrum) -> Result<f64> {
    if ps.is_empty() {
        return Err(Error::invalid("power spectrum is empty"));
    }
    Ok(ps.frequencies_hz[argmax(&ps.power)])
}

/// Lowest and highest frequencies whose power exceeds
/// `threshold_fraction × max power`.
pub fn sweep_endpoints(ps: &PowerSpectrum, threshold_fraction: f64) -> Result<(f64, f64)> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(Error::invalid(format!(
            "threshold fraction must be in (0, 1), got {threshold_fraction}"
        )));
    }
    let max = ps.power.iter().copied().fold(0.0, f64::max);
    let threshold = threshold_fraction * max;
    let above = |p: &f64| *p > threshold;
    let (Some(lo), Some(hi)) = (
        ps.power.iter().position(above),
        ps.power.iter().rposition(above),
    ) else {
        return Err(Error::EmptySupport { threshold_fraction });
    };
    Ok((ps.frequencies_hz[lo], ps.frequencies_hz[hi]))
}

/// Zero-lag Pearson correlation coefficient.
pub fn pearson_r(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "correlation inputs differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::invalid("correlation needs at least 2 samples"));
    }
    let n = a.len() as f64;
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let dx = x - mean_a;
        let dy = y - mean_b;
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// Hann-windowed short-time power spectra.
///
/// Slice `i` starts at sample `i·hop_len`; its time stamp is the window
/// centre.
pub fn spectrogram(x: &Signal, window_len: usize, hop_len: usize) -> Result<Spectrogram> {
    if window_len < 2 || window_len > x.len() {
        return Err(Error::invalid(format!(
            "window length must be in [2, {}], got {window_len}",
            x.len()
        )));
    }
    if hop_len == 0 {
        return Err(Error::invalid("hop length must be at least 1"));
    }
    let fs = x.sample_rate_hz();
    let mut pgram = Periodogram::new(window_len, fs);
    let mut times_s = Vec::new();
    let mut power = Vec::new();
    for start in (0..=x.len() - window_len).step_by(hop_len) {
        let mut row = vec![0.0; pgram.bins()];
        pgram.accumulate(&x.samples()[start..start + window_len], &mut row);
        times_s.push((start as f64 + window_len as f64 / 2.0) / fs);
        power.push(row);
    }
    Ok(Spectrogram {
        times_s,
        frequencies_hz: frequency_axis(window_len, fs),
        power,
    })
}
