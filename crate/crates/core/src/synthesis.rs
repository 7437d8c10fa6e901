//! Resynthesis and the end-to-end remap pipeline.
//!
//! `remap` chains: analytic signal → envelope + wrapped phase → unwrap →
//! instantaneous frequency → warp → re-integration → wrap → `μ + e·cos φ̃`.
//! No smoothing or windowing is added anywhere along the way.

use rayon::prelude::*;

use crate::analytic::{
    analytic_from_samples, envelope, instantaneous_phase, AnalyticSignal, Envelope, WrappedPhase,
};
use crate::error::{Error, Result, Stage};
use crate::phase::{
    apply_warp_with, frequency_to_phase, phase_to_frequency, unwrap_phase, wrap_phase,
    FrequencyTrack, NyquistPolicy, UnwrappedPhase,
};
use crate::signal::Signal;
use crate::warp::WarpFunction;

/// Smallest chunk length accepted by [`remap_chunked`].
pub const MIN_CHUNK_LEN: usize = 16;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RemapOptions {
    pub nyquist: NyquistPolicy,
}

/// Output signal plus the number of samples clamped at Nyquist.
#[derive(Debug, Clone, PartialEq)]
pub struct Remapped {
    pub signal: Signal,
    pub nyquist_clamped: usize,
}

/// Every intermediate product of one remap run.
#[derive(Debug, Clone)]
pub struct RemapTrace {
    pub analytic: AnalyticSignal,
    pub envelope: Envelope,
    pub phase: WrappedPhase,
    pub unwrapped: UnwrappedPhase,
    pub frequency: FrequencyTrack,
    pub warped_frequency: FrequencyTrack,
    pub warped_phase: WrappedPhase,
    pub output: Signal,
    pub nyquist_clamped: usize,
}

/// `mean + env[n]·cos(phase[n])`.
pub fn reconstruct(
    mean: f64,
    env: &Envelope,
    phase: &WrappedPhase,
    sample_rate_hz: f64,
) -> Result<Signal> {
    if env.len() != phase.len() {
        return Err(Error::invalid(format!(
            "envelope has {} samples but phase has {}",
            env.len(),
            phase.len()
        )));
    }
    let samples = env
        .values()
        .iter()
        .zip(phase.values())
        .map(|(e, p)| mean + e * p.cos())
        .collect();
    Signal::new(samples, sample_rate_hz)
}

/// Remap with the default (clamping) Nyquist policy.
pub fn remap(x: &Signal, warp: &WarpFunction) -> Result<Signal> {
    let out = remap_with(x, warp, RemapOptions::default())?;
    warn_clamped(out.nyquist_clamped, x.nyquist_hz());
    Ok(out.signal)
}

pub fn remap_with(x: &Signal, warp: &WarpFunction, options: RemapOptions) -> Result<Remapped> {
    let trace = remap_traced(x, warp, options)?;
    Ok(Remapped {
        signal: trace.output,
        nyquist_clamped: trace.nyquist_clamped,
    })
}

/// Run the pipeline and keep every stage's output for inspection.
pub fn remap_traced(x: &Signal, warp: &WarpFunction, options: RemapOptions) -> Result<RemapTrace> {
    let fs = x.sample_rate_hz();
    let analytic = analytic_from_samples(x.samples(), fs);
    let env = envelope(&analytic);
    let phase = instantaneous_phase(&analytic);
    let unwrapped = unwrap_phase(&phase);
    let frequency = phase_to_frequency(&unwrapped, fs).map_err(|e| e.at(Stage::Differentiate))?;
    let warped =
        apply_warp_with(&frequency, warp, options.nyquist).map_err(|e| e.at(Stage::Warp))?;
    let warped_unwrapped = frequency_to_phase(&warped.track);
    let warped_phase = wrap_phase(&warped_unwrapped);
    let output = reconstruct(analytic.mean(), &env, &warped_phase, fs)
        .map_err(|e| e.at(Stage::Reconstruct))?;
    Ok(RemapTrace {
        analytic,
        envelope: env,
        phase,
        unwrapped,
        frequency,
        warped_frequency: warped.track,
        warped_phase,
        output,
        nyquist_clamped: warped.clamped,
    })
}

/// Remap consecutive, non-overlapping chunks independently and concatenate.
///
/// Chunks are processed in parallel; the output does not depend on
/// scheduling. A trailing single sample has no oscillating part and passes
/// through unchanged.
pub fn remap_chunked(x: &Signal, warp: &WarpFunction, chunk_len: usize) -> Result<Signal> {
    let out = remap_chunked_with(x, warp, chunk_len, RemapOptions::default())?;
    warn_clamped(out.nyquist_clamped, x.nyquist_hz());
    Ok(out.signal)
}

pub fn remap_chunked_with(
    x: &Signal,
    warp: &WarpFunction,
    chunk_len: usize,
    options: RemapOptions,
) -> Result<Remapped> {
    if chunk_len < MIN_CHUNK_LEN {
        return Err(Error::invalid(format!(
            "chunk length must be at least {MIN_CHUNK_LEN}, got {chunk_len}"
        )));
    }
    if chunk_len >= x.len() {
        return remap_with(x, warp, options);
    }
    let fs = x.sample_rate_hz();
    let parts: Vec<Result<Remapped>> = x
        .samples()
        .par_chunks(chunk_len)
        .map(|chunk| {
            if chunk.len() < 2 {
                return Ok(Remapped {
                    signal: Signal::new(vec![chunk[0]; 2], fs)?,
                    nyquist_clamped: 0,
                });
            }
            remap_with(&Signal::new(chunk.to_vec(), fs)?, warp, options)
        })
        .collect();

    let mut samples = Vec::with_capacity(x.len());
    let mut clamped = 0;
    for (part, chunk) in parts.into_iter().zip(x.samples().chunks(chunk_len)) {
        let part = part?;
        samples.extend_from_slice(&part.signal.samples()[..chunk.len()]);
        clamped += part.nyquist_clamped;
    }
    Ok(Remapped {
        signal: Signal::new(samples, fs)?,
        nyquist_clamped: clamped,
    })
}

fn warn_clamped(count: usize, nyquist_hz: f64) {
    if count > 0 {
        log::warn!("{count} warped frequency samples clamped to ±{nyquist_hz} Hz");
    }
}
