//! Synthetic test inputs: tones, logarithmic sweeps, multitones and noise.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::signal::Signal;

fn sample_count(duration_s: f64, sample_rate_hz: f64) -> Result<usize> {
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::invalid(format!(
            "sample rate must be positive and finite, got {sample_rate_hz}"
        )));
    }
    if !(duration_s.is_finite() && duration_s >= 0.0) {
        return Err(Error::invalid(format!(
            "duration must be non-negative and finite, got {duration_s}"
        )));
    }
    let m = (duration_s * sample_rate_hz).round() as usize;
    if m < 2 {
        return Err(Error::invalid(format!(
            "{duration_s} s at {sample_rate_hz} Hz gives {m} sample(s); need at least 2"
        )));
    }
    Ok(m)
}

fn check_frequency(f_hz: f64, sample_rate_hz: f64) -> Result<()> {
    if !(f_hz > 0.0 && f_hz < sample_rate_hz / 2.0) {
        return Err(Error::invalid(format!(
            "frequency {f_hz} Hz must lie in (0, {}) Hz",
            sample_rate_hz / 2.0
        )));
    }
    Ok(())
}

/// `amplitude · sin(2π f0 n / Fs)` for `round(duration · Fs)` samples.
pub fn tone(f0_hz: f64, duration_s: f64, sample_rate_hz: f64, amplitude: f64) -> Result<Signal> {
    multitone(&[(f0_hz, amplitude)], duration_s, sample_rate_hz)
}

/// Sum of sines; an empty component list yields silence.
pub fn multitone(
    components: &[(f64, f64)],
    duration_s: f64,
    sample_rate_hz: f64,
) -> Result<Signal> {
    let m = sample_count(duration_s, sample_rate_hz)?;
    for &(f, a) in components {
        check_frequency(f, sample_rate_hz)?;
        if !a.is_finite() {
            return Err(Error::invalid(format!("amplitude {a} is not finite")));
        }
    }
    let samples = (0..m)
        .map(|n| {
            components
                .iter()
                .map(|(f, a)| a * (TAU * f * n as f64 / sample_rate_hz).sin())
                .sum()
        })
        .collect();
    Signal::new(samples, sample_rate_hz)
}

/// Unit-amplitude sweep with instantaneous frequency
/// `f_start · (f_end / f_start)^(t / duration)`.
///
/// The phase is the closed-form integral, so there is no accumulated drift.
pub fn log_sweep(
    f_start_hz: f64,
    f_end_hz: f64,
    duration_s: f64,
    sample_rate_hz: f64,
) -> Result<Signal> {
    let m = sample_count(duration_s, sample_rate_hz)?;
    check_frequency(f_start_hz, sample_rate_hz)?;
    check_frequency(f_end_hz, sample_rate_hz)?;
    if f_start_hz == f_end_hz {
        return tone(f_start_hz, duration_s, sample_rate_hz, 1.0);
    }
    let k = duration_s / (f_end_hz / f_start_hz).ln();
    let samples = (0..m)
        .map(|n| {
            let t = n as f64 / sample_rate_hz;
            (TAU * f_start_hz * k * (t / k).exp_m1()).sin()
        })
        .collect();
    Signal::new(samples, sample_rate_hz)
}

/// Multiply by `1 + depth · sin(2π rate t)`.
pub fn amplitude_modulate(x: &Signal, rate_hz: f64, depth: f64) -> Result<Signal> {
    if !(rate_hz.is_finite() && depth.is_finite()) {
        return Err(Error::invalid("modulation rate and depth must be finite"));
    }
    let fs = x.sample_rate_hz();
    let samples = x
        .samples()
        .iter()
        .enumerate()
        .map(|(n, v)| v * (1.0 + depth * (TAU * rate_hz * n as f64 / fs).sin()))
        .collect();
    Signal::new(samples, fs)
}

/// Uniform noise in `[-amplitude, amplitude)`, reproducible from `seed`.
pub fn uniform_noise(
    duration_s: f64,
    sample_rate_hz: f64,
    amplitude: f64,
    seed: u64,
) -> Result<Signal> {
    let m = sample_count(duration_s, sample_rate_hz)?;
    if !amplitude.is_finite() {
        return Err(Error::invalid(format!(
            "amplitude {amplitude} is not finite"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..m)
        .map(|_| amplitude * rng.gen_range(-1.0..1.0))
        .collect();
    Signal::new(samples, sample_rate_hz)
}
