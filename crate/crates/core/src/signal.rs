use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, real-valued sample sequence together with its sample rate.
///
/// Construction enforces at least two samples, finite amplitudes and a
/// positive sample rate, so every downstream stage can rely on them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::invalid(format!(
                "sample rate must be positive and finite, got {sample_rate_hz}"
            )));
        }
        if samples.len() < 2 {
            return Err(Error::invalid(format!(
                "signal needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::invalid(format!(
                "sample {i} is not finite ({})",
                samples[i]
            )));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn nyquist_hz(&self) -> f64 {
        self.sample_rate_hz / 2.0
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false: a valid signal holds at least two samples.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Same samples, reinterpreted at a different rate.
    pub fn with_sample_rate(self, sample_rate_hz: f64) -> Result<Self> {
        Signal::new(self.samples, sample_rate_hz)
    }
}

/// Arithmetic mean of the samples.
pub fn compute_mean(signal: &Signal) -> f64 {
    mean(signal.samples())
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}
