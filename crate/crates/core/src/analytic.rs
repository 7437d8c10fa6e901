//! Analytic-signal construction and the envelope / phase views derived from it.
//!
//! The real input is split into its mean and a zero-mean operation signal.
//! The operation signal's discrete Hilbert transform is computed in the
//! frequency domain by multiplying each DFT bin by `-j·sgn(k)`, with the DC
//! bin and (for even lengths) the Nyquist bin zeroed. The pair
//! `(s, ŝ)` then carries everything synthesis needs: the envelope `|s + jŝ|`
//! and the wrapped phase `atan2(ŝ, s)`.

use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::signal::{mean, Signal};

/// Zero-mean operation signal, its Hilbert transform, and the removed mean.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSignal {
    real_part: Vec<f64>,
    imag_part: Vec<f64>,
    mean: f64,
    sample_rate_hz: f64,
}

impl AnalyticSignal {
    /// Assemble an analytic signal from precomputed parts.
    pub fn from_parts(
        real_part: Vec<f64>,
        imag_part: Vec<f64>,
        mean: f64,
        sample_rate_hz: f64,
    ) -> Result<Self> {
        if real_part.len() != imag_part.len() {
            return Err(Error::invalid(format!(
                "real and imaginary parts differ in length ({} vs {})",
                real_part.len(),
                imag_part.len()
            )));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::invalid("sample rate must be positive and finite"));
        }
        Ok(Self {
            real_part,
            imag_part,
            mean,
            sample_rate_hz,
        })
    }

    pub fn real_part(&self) -> &[f64] {
        &self.real_part
    }

    pub fn imag_part(&self) -> &[f64] {
        &self.imag_part
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.real_part.len()
    }

    pub fn is_empty(&self) -> bool {
        self.real_part.is_empty()
    }

    pub fn to_complex(&self) -> Vec<Complex<f64>> {
        self.real_part
            .iter()
            .zip(&self.imag_part)
            .map(|(&re, &im)| Complex::new(re, im))
            .collect()
    }
}

/// Instantaneous amplitude of an analytic signal. Never negative.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope(Vec<f64>);

impl Envelope {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::invalid(format!(
                "envelope value {} at sample {i} is negative or not finite",
                values[i]
            )));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Phase in radians, confined to `[-π, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WrappedPhase(Vec<f64>);

impl WrappedPhase {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !(-PI..=PI).contains(v)) {
            return Err(Error::invalid(format!(
                "phase {} at sample {i} lies outside [-π, π]",
                values[i]
            )));
        }
        Ok(Self(values))
    }

    pub(crate) fn new_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| (-PI..=PI).contains(v)));
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Discrete Hilbert transform of a real sequence via the DFT sign multiplier.
pub fn hilbert_transform(samples: &[f64]) -> Vec<f64> {
    let len = samples.len();
    if len < 2 {
        return vec![0.0; len];
    }
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(len);
    let inverse = planner.plan_fft_inverse(len);

    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&x| Complex::new(x, 0.0)).collect();
    forward.process(&mut buf);

    let half = len / 2;
    let has_nyquist = len % 2 == 0;
    for (k, bin) in buf.iter_mut().enumerate() {
        *bin = if k == 0 || (has_nyquist && k == half) {
            Complex::new(0.0, 0.0)
        } else if k <= (len - 1) / 2 {
            // -j
            Complex::new(bin.im, -bin.re)
        } else {
            // +j
            Complex::new(-bin.im, bin.re)
        };
    }

    inverse.process(&mut buf);
    let scale = 1.0 / len as f64;
    buf.iter().map(|c| c.re * scale).collect()
}

/// Remove the mean and pair the operation signal with its Hilbert transform.
pub fn make_analytic(signal: &Signal) -> AnalyticSignal {
    analytic_from_samples(signal.samples(), signal.sample_rate_hz())
}

pub(crate) fn analytic_from_samples(samples: &[f64], sample_rate_hz: f64) -> AnalyticSignal {
    let mu = mean(samples);
    let real_part: Vec<f64> = samples.iter().map(|&x| x - mu).collect();
    let imag_part = hilbert_transform(&real_part);
    AnalyticSignal {
        real_part,
        imag_part,
        mean: mu,
        sample_rate_hz,
    }
}

pub fn envelope(a: &AnalyticSignal) -> Envelope {
    Envelope(
        a.real_part
            .iter()
            .zip(&a.imag_part)
            .map(|(re, im)| re.hypot(*im))
            .collect(),
    )
}

/// Quadrant-aware angle of each analytic sample, in `(-π, π]`.
///
/// The origin maps to 0.
pub fn instantaneous_phase(a: &AnalyticSignal) -> WrappedPhase {
    WrappedPhase(
        a.real_part
            .iter()
            .zip(&a.imag_part)
            .map(|(&re, &im)| {
                if re == 0.0 && im == 0.0 {
                    0.0
                } else {
                    im.atan2(re)
                }
            })
            .collect(),
    )
}
