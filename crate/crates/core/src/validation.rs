//! Warp → de-warp round trips and the reference experiments.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generate;
use crate::phase::NyquistPolicy;
use crate::signal::Signal;
use crate::spectrum::{
    default_segment_len, peak_frequency, pearson_r, power_spectrum, sweep_endpoints, PowerSpectrum,
    DEFAULT_OVERLAP,
};
use crate::synthesis::{remap_chunked_with, remap_with, RemapOptions, Remapped};
use crate::warp::WarpFunction;

/// Fraction of peak power that counts as "in band" for support endpoints.
pub const DEFAULT_SUPPORT_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationOptions {
    pub nyquist: NyquistPolicy,
    pub chunk_len: Option<usize>,
    /// Welch segment length; `None` picks the default for the signal length.
    pub segment_len: Option<usize>,
    pub overlap: f64,
    pub support_threshold: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            nyquist: NyquistPolicy::default(),
            chunk_len: None,
            segment_len: None,
            overlap: DEFAULT_OVERLAP,
            support_threshold: DEFAULT_SUPPORT_THRESHOLD,
        }
    }
}

impl ValidationOptions {
    pub fn spectrum(&self, x: &Signal) -> Result<PowerSpectrum> {
        let seg = self
            .segment_len
            .unwrap_or_else(|| default_segment_len(x.len()));
        power_spectrum(x, seg, self.overlap)
    }

    pub fn remap(&self, x: &Signal, warp: &WarpFunction) -> Result<Remapped> {
        let options = RemapOptions {
            nyquist: self.nyquist,
        };
        match self.chunk_len {
            Some(chunk) => remap_chunked_with(x, warp, chunk, options),
            None => remap_with(x, warp, options),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<usize>,
    pub sample_rate_hz: f64,
    pub samples: usize,
    pub duration_s: f64,
}

/// Spectral summary of one stage of the round trip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageSummary {
    pub stage: String,
    pub peak_hz: f64,
    /// Support endpoints, absent for a silent signal.
    pub band_hz: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Warnings {
    /// Output samples outside `[-1, 1]` that a WAV writer would clip.
    pub clipped: usize,
    pub nyquist_clamped: usize,
}

/// Self-contained result of a warp → de-warp round trip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub input: InputInfo,
    pub warp: String,
    pub dewarp: String,
    pub signal_r: f64,
    pub psd_r: f64,
    /// PSD peaks of the input, warped and de-warped signals, in that order.
    pub peaks_hz: Vec<f64>,
    pub stages: Vec<StageSummary>,
    pub options: ValidationOptions,
    pub warnings: Warnings,
}

/// Everything produced by [`round_trip`], including the intermediate signals.
#[derive(Debug, Clone)]
pub struct RoundTrip {
    pub warped: Signal,
    pub dewarped: Signal,
    pub report: ValidationReport,
}

fn summarize(stage: &str, ps: &PowerSpectrum, threshold: f64) -> Result<StageSummary> {
    Ok(StageSummary {
        stage: stage.into(),
        peak_hz: peak_frequency(ps)?,
        band_hz: sweep_endpoints(ps, threshold).ok(),
    })
}

fn count_out_of_range(x: &Signal) -> usize {
    x.samples().iter().filter(|v| v.abs() > 1.0).count()
}

/// Warp `x`, de-warp the result, and compare against the original in the
/// time domain and on the PSD grid.
pub fn round_trip(
    x: &Signal,
    warp: &WarpFunction,
    dewarp: &WarpFunction,
    options: &ValidationOptions,
) -> Result<RoundTrip> {
    let warped = options.remap(x, warp)?;
    let dewarped = options.remap(&warped.signal, dewarp)?;

    let ps_in = options.spectrum(x)?;
    let ps_warped = options.spectrum(&warped.signal)?;
    let ps_out = options.spectrum(&dewarped.signal)?;
    let stages = vec![
        summarize("input", &ps_in, options.support_threshold)?,
        summarize("warped", &ps_warped, options.support_threshold)?,
        summarize("dewarped", &ps_out, options.support_threshold)?,
    ];

    let report = ValidationReport {
        input: InputInfo {
            source: None,
            channel: None,
            sample_rate_hz: x.sample_rate_hz(),
            samples: x.len(),
            duration_s: x.duration_s(),
        },
        warp: warp.source_text().to_owned(),
        dewarp: dewarp.source_text().to_owned(),
        signal_r: pearson_r(x.samples(), dewarped.signal.samples())?,
        psd_r: pearson_r(ps_in.power(), ps_out.power())?,
        peaks_hz: stages.iter().map(|s| s.peak_hz).collect(),
        stages,
        options: *options,
        warnings: Warnings {
            clipped: count_out_of_range(&warped.signal) + count_out_of_range(&dewarped.signal),
            nyquist_clamped: warped.nyquist_clamped + dewarped.nyquist_clamped,
        },
    };
    Ok(RoundTrip {
        warped: warped.signal,
        dewarped: dewarped.signal,
        report,
    })
}

/// One line of the reference-experiment table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: String,
    pub target: String,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, measured: String, target: &str, passed: bool) -> Self {
        Self {
            name: name.into(),
            measured,
            target: target.into(),
            passed,
        }
    }
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    (value - target).abs() <= rel * target
}

/// 300 Hz tone through "2/3*f" and back.
pub fn tone_experiment() -> Result<Vec<Check>> {
    let started = Instant::now();
    let x = generate::tone(300.0, 1.0, 16_000.0, 1.0)?;
    let rt = round_trip(
        &x,
        &WarpFunction::parse("2/3*f")?,
        &WarpFunction::parse("3/2*f")?,
        &ValidationOptions::default(),
    )?;
    let elapsed = started.elapsed().as_secs_f64();
    let bin = 16_000.0 / default_segment_len(x.len()) as f64;
    let r = &rt.report;
    Ok(vec![
        Check::new(
            "tone: warped peak",
            format!("{:.2} Hz", r.peaks_hz[1]),
            "200 Hz ± 1 bin",
            (r.peaks_hz[1] - 200.0).abs() <= bin,
        ),
        Check::new(
            "tone: de-warped peak",
            format!("{:.2} Hz", r.peaks_hz[2]),
            "300 Hz ± 1 bin",
            (r.peaks_hz[2] - 300.0).abs() <= bin,
        ),
        Check::new(
            "tone: signal r",
            format!("{:.6}", r.signal_r),
            "≥ 0.999",
            r.signal_r >= 0.999,
        ),
        Check::new(
            "tone: PSD r",
            format!("{:.6}", r.psd_r),
            "≥ 0.95",
            r.psd_r >= 0.95,
        ),
        Check::new(
            "tone: runtime",
            format!("{elapsed:.3} s"),
            "< 1 s",
            elapsed < 1.0,
        ),
    ])
}

/// 21→480 Hz log sweep through "2/3*f" and back.
pub fn sweep_experiment() -> Result<Vec<Check>> {
    let x = generate::log_sweep(21.0, 480.0, 1.0, 16_000.0)?;
    let rt = round_trip(
        &x,
        &WarpFunction::parse("2/3*f")?,
        &WarpFunction::parse("3/2*f")?,
        &ValidationOptions::default(),
    )?;
    let r = &rt.report;
    let band = |i: usize| r.stages[i].band_hz.unwrap_or((f64::NAN, f64::NAN));
    let (lo, hi) = band(1);
    Ok(vec![
        Check::new(
            "sweep: warped band low",
            format!("{lo:.2} Hz"),
            "14 Hz ± 5%",
            within(lo, 14.0, 0.05),
        ),
        Check::new(
            "sweep: warped band high",
            format!("{hi:.2} Hz"),
            "320 Hz ± 5%",
            within(hi, 320.0, 0.05),
        ),
        Check::new(
            "sweep: signal r",
            format!("{:.6}", r.signal_r),
            "≥ 0.99",
            r.signal_r >= 0.99,
        ),
        Check::new(
            "sweep: PSD r",
            format!("{:.6}", r.psd_r),
            "≥ 0.98",
            r.psd_r >= 0.98,
        ),
    ])
}

/// Both reference experiments, in table order.
pub fn demo_checks() -> Result<Vec<Check>> {
    let mut checks = tone_experiment()?;
    checks.extend(sweep_experiment()?);
    Ok(checks)
}
