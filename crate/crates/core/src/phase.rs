//! Phase unwrapping, differentiation to instantaneous frequency, warping,
//! and re-integration back to wrapped phase.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::analytic::WrappedPhase;
use crate::error::{Error, Result};
use crate::warp::WarpFunction;

/// Continuous phase in radians: successive samples never jump by more than π.
#[derive(Debug, Clone, PartialEq)]
pub struct UnwrappedPhase(Vec<f64>);

impl UnwrappedPhase {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("phase sample {i} is not finite")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Instantaneous frequency in Hz, one value per signal sample.
///
/// `initial_phase_rad` is the integration constant that turns the track
/// back into absolute phase.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTrack {
    values: Vec<f64>,
    sample_rate_hz: f64,
    initial_phase_rad: f64,
}

impl FrequencyTrack {
    pub fn new(values: Vec<f64>, sample_rate_hz: f64, initial_phase_rad: f64) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "frequency sample {i} is not finite"
            )));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::invalid("sample rate must be positive and finite"));
        }
        if !initial_phase_rad.is_finite() {
            return Err(Error::invalid("initial phase must be finite"));
        }
        Ok(Self {
            values,
            sample_rate_hz,
            initial_phase_rad,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn initial_phase_rad(&self) -> f64 {
        self.initial_phase_rad
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// What to do when a warped frequency lands beyond ±F_s/2.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NyquistPolicy {
    /// Clamp to ±F_s/2 and count the affected samples.
    #[default]
    ClampWarn,
    /// Fail on the first offending sample.
    Strict,
}

/// A warped track plus the number of samples clamped at Nyquist.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpedTrack {
    pub track: FrequencyTrack,
    pub clamped: usize,
}

/// Restore the 2π multiples lost to wrapping.
///
/// A jump of exactly π is left uncorrected.
pub fn unwrap_phase(phase: &WrappedPhase) -> UnwrappedPhase {
    UnwrappedPhase(unwrap_values(phase.values()))
}

pub(crate) fn unwrap_values(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut turns: f64 = 0.0;
    let mut prev: Option<f64> = None;
    for &v in values {
        if let Some(p) = prev {
            let step = v - p;
            if step.abs() > PI {
                turns -= (step / TAU).round();
            }
        }
        out.push(v + TAU * turns);
        prev = Some(v);
    }
    out
}

/// Forward difference of the phase, scaled to Hz.
///
/// The last difference is repeated so the track keeps the signal's length.
pub fn phase_to_frequency(theta: &UnwrappedPhase, sample_rate_hz: f64) -> Result<FrequencyTrack> {
    let values = theta.values();
    if values.len() < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 phase samples to differentiate, got {}",
            values.len()
        )));
    }
    let scale = sample_rate_hz / TAU;
    let mut freqs: Vec<f64> = values.windows(2).map(|w| scale * (w[1] - w[0])).collect();
    let last = freqs[freqs.len() - 1];
    freqs.push(last);
    FrequencyTrack::new(freqs, sample_rate_hz, values[0])
}

/// Apply `warp` to every sample, clamping at Nyquist.
pub fn apply_warp(track: &FrequencyTrack, warp: &WarpFunction) -> Result<FrequencyTrack> {
    let warped = apply_warp_with(track, warp, NyquistPolicy::ClampWarn)?;
    if warped.clamped > 0 {
        log::warn!(
            "{} warped frequency samples clamped to ±{} Hz",
            warped.clamped,
            track.sample_rate_hz / 2.0
        );
    }
    Ok(warped.track)
}

pub fn apply_warp_with(
    track: &FrequencyTrack,
    warp: &WarpFunction,
    policy: NyquistPolicy,
) -> Result<WarpedTrack> {
    let nyquist = track.sample_rate_hz / 2.0;
    let mut clamped = 0;
    let mut out = Vec::with_capacity(track.values.len());
    for (index, &f) in track.values.iter().enumerate() {
        let v = warp.evaluate(f).map_err(|e| match e {
            Error::WarpEvaluation { f_hz, reason, .. } => Error::WarpEvaluation {
                f_hz,
                index: Some(index),
                reason,
            },
            other => other,
        })?;
        if v.abs() > nyquist {
            match policy {
                NyquistPolicy::ClampWarn => {
                    clamped += 1;
                    out.push(v.clamp(-nyquist, nyquist));
                }
                NyquistPolicy::Strict => {
                    return Err(Error::NyquistExceeded {
                        index,
                        value_hz: v,
                        nyquist_hz: nyquist,
                    })
                }
            }
        } else {
            out.push(v);
        }
    }
    Ok(WarpedTrack {
        track: FrequencyTrack {
            values: out,
            sample_rate_hz: track.sample_rate_hz,
            initial_phase_rad: track.initial_phase_rad,
        },
        clamped,
    })
}

/// Integrate a frequency track back into absolute phase.
///
/// Sample `n` receives the initial phase plus the increments of samples
/// `0..n`, so this exactly inverts [`phase_to_frequency`]. The running sum is
/// compensated; long noisy tracks otherwise drift by more than 1e-9 rad.
pub fn frequency_to_phase(track: &FrequencyTrack) -> UnwrappedPhase {
    let scale = TAU / track.sample_rate_hz;
    let mut out = Vec::with_capacity(track.values.len());
    let mut sum = 0.0_f64;
    let mut compensation = 0.0_f64;
    for &f in &track.values {
        out.push(track.initial_phase_rad + (sum + compensation));
        let inc = scale * f;
        let t = sum + inc;
        if sum.abs() >= inc.abs() {
            compensation += (sum - t) + inc;
        } else {
            compensation += (inc - t) + sum;
        }
        sum = t;
    }
    UnwrappedPhase(out)
}

/// Fold phase into `[-π, π)`.
pub fn wrap_phase(theta: &UnwrappedPhase) -> WrappedPhase {
    WrappedPhase::new_unchecked(theta.values().iter().map(|&v| wrap_value(v)).collect())
}

pub(crate) fn wrap_value(theta: f64) -> f64 {
    let mut v = theta - TAU * ((theta + PI) / TAU).floor();
    // Rounding in the subtraction can leave v a hair outside the interval.
    if v >= PI {
        v -= TAU;
    } else if v < -PI {
        v += TAU;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn wrapped(values: &[f64]) -> WrappedPhase {
        WrappedPhase::new(values.to_vec()).unwrap()
    }

    /// Brute-force unwrap: pick m ∈ {-2..=2} minimising each successive jump.
    fn brute_unwrap(values: &[f64]) -> Vec<f64> {
        let mut out = vec![values[0]];
        for &v in &values[1..] {
            let prev = *out.last().unwrap();
            let best = (-2..=2)
                .map(|m| v + TAU * m as f64)
                .min_by(|a, b| (a - prev).abs().total_cmp(&(b - prev).abs()))
                .unwrap();
            out.push(best);
        }
        out
    }

    #[test]
    fn unwrap_quarter_turn_steps() {
        let input = [0.0, PI / 2.0, PI, -PI / 2.0];
        let oracle = brute_unwrap(&input);
        let got = unwrap_phase(&wrapped(&input));
        let expected = [0.0, PI / 2.0, PI, 3.0 * PI / 2.0];
        for ((g, o), e) in got.values().iter().zip(&oracle).zip(expected) {
            assert_abs_diff_eq!(*o, e, epsilon = 1e-12);
            assert_abs_diff_eq!(*g, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn unwrap_leaves_smooth_input_alone() {
        let input = [0.1, 0.5, -0.3, 1.2, 2.9, 2.0];
        assert_eq!(unwrap_phase(&wrapped(&input)).values(), &input);
    }

    #[test]
    fn unwrap_restores_full_turn() {
        // sin(2π + π/3) reports π/3; the preceding samples climb towards 2π.
        let truth = [0.0, 1.5, 3.0, 4.5, 6.0, 2.0 * PI + PI / 3.0];
        let input: Vec<f64> = truth.iter().map(|t| wrap_value(*t)).collect();
        assert_abs_diff_eq!(input[5], PI / 3.0, epsilon = 1e-12);
        let got = unwrap_phase(&wrapped(&input));
        for (g, e) in got.values().iter().zip(truth) {
            assert_abs_diff_eq!(*g, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn unwrap_tie_is_not_corrected() {
        let got = unwrap_values(&[0.0, PI]);
        assert_eq!(got, vec![0.0, PI]);
    }

    #[test]
    fn linear_phase_gives_constant_frequency() {
        let fs = 16_000.0;
        let theta: Vec<f64> = (0..16_000).map(|n| TAU * 300.0 * n as f64 / fs).collect();
        let track = phase_to_frequency(&UnwrappedPhase::new(theta).unwrap(), fs).unwrap();
        assert_eq!(track.len(), 16_000);
        for v in track.values() {
            assert!((v - 300.0).abs() <= 1e-9, "{v}");
        }
    }

    #[test]
    fn constant_phase_gives_zero_frequency() {
        let track = phase_to_frequency(&UnwrappedPhase::new(vec![1.3; 10]).unwrap(), 8.0).unwrap();
        assert!(track.values().iter().all(|&v| v == 0.0));
        assert_eq!(track.initial_phase_rad(), 1.3);
    }

    #[test]
    fn differentiation_needs_two_samples() {
        let theta = UnwrappedPhase::new(vec![0.0]).unwrap();
        assert!(matches!(
            phase_to_frequency(&theta, 8.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn padding_repeats_final_difference() {
        let theta = UnwrappedPhase::new(vec![0.0, 1.0, 3.0]).unwrap();
        let track = phase_to_frequency(&theta, TAU).unwrap();
        assert_eq!(track.values(), &[1.0, 2.0, 2.0]);
    }

    #[test]
    fn integrating_constant_frequency_gives_ramp() {
        let fs = 16_000.0;
        let track = FrequencyTrack::new(vec![200.0; 100], fs, 0.0).unwrap();
        let theta = frequency_to_phase(&track);
        let slope = TAU * 200.0 / fs;
        for (n, v) in theta.values().iter().enumerate() {
            assert_abs_diff_eq!(*v, slope * n as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn integrating_zero_frequency_holds_initial_phase() {
        let track = FrequencyTrack::new(vec![0.0; 20], 100.0, PI / 3.0).unwrap();
        assert!(frequency_to_phase(&track)
            .values()
            .iter()
            .all(|&v| v == PI / 3.0));
    }

    #[test]
    fn wrap_examples() {
        assert_abs_diff_eq!(wrap_value(2.0 * PI + PI / 3.0), PI / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(wrap_value(-4.0 * PI + PI / 4.0), PI / 4.0, epsilon = 1e-12);
        assert_eq!(wrap_value(0.0), 0.0);
        assert_eq!(wrap_value(PI / 2.0), PI / 2.0);
        assert_eq!(wrap_value(PI), -PI);
        assert_eq!(wrap_value(-PI), -PI);
    }

    #[test]
    fn warp_scales_constant_track() {
        let track = FrequencyTrack::new(vec![300.0; 8], 16_000.0, 0.25).unwrap();
        let down = apply_warp(&track, &WarpFunction::parse("2/3*f").unwrap()).unwrap();
        for v in down.values() {
            assert_abs_diff_eq!(*v, 200.0, epsilon = 1e-12);
        }
        assert_eq!(down.initial_phase_rad(), 0.25);
        let up = apply_warp(&down, &WarpFunction::parse("3/2*f").unwrap()).unwrap();
        for v in up.values() {
            assert_abs_diff_eq!(*v, 300.0, epsilon = 1e-12);
        }
        let same = apply_warp(&track, &WarpFunction::parse("f").unwrap()).unwrap();
        assert_eq!(same, track);
    }

    #[test]
    fn nyquist_clamp_counts_and_strict_fails() {
        let track = FrequencyTrack::new(vec![100.0, 3000.0, -3000.0, 200.0], 8000.0, 0.0).unwrap();
        let w = WarpFunction::parse("2*f").unwrap();
        let warped = apply_warp_with(&track, &w, NyquistPolicy::ClampWarn).unwrap();
        assert_eq!(warped.clamped, 2);
        assert_eq!(warped.track.values(), &[200.0, 4000.0, -4000.0, 400.0]);

        let err = apply_warp_with(&track, &w, NyquistPolicy::Strict).unwrap_err();
        assert!(
            matches!(err, Error::NyquistExceeded { index: 1, .. }),
            "{err}"
        );
    }

    #[test]
    fn warp_failure_names_the_sample() {
        let track = FrequencyTrack::new(vec![10.0, 0.0, 5.0], 100.0, 0.0).unwrap();
        let err = apply_warp(&track, &WarpFunction::parse("1/f").unwrap()).unwrap_err();
        match err {
            Error::WarpEvaluation { index, f_hz, .. } => {
                assert_eq!(index, Some(1));
                assert_eq!(f_hz, 0.0);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn negative_frequencies_reach_the_warp() {
        let track = FrequencyTrack::new(vec![-50.0, 50.0], 1000.0, 0.0).unwrap();
        let w = WarpFunction::parse("abs(f)").unwrap();
        assert_eq!(apply_warp(&track, &w).unwrap().values(), &[50.0, 50.0]);
    }

    fn smooth_phase() -> impl Strategy<Value = Vec<f64>> {
        (2usize..400, -3.0f64..3.0, -20.0f64..20.0).prop_flat_map(|(len, start, base)| {
            prop::collection::vec(-1.0f64..1.0, len).prop_map(move |jitter| {
                let mut acc = start;
                jitter
                    .iter()
                    .map(|j| {
                        let v = acc;
                        acc += (base / 10.0 + j).clamp(-3.0, 3.0);
                        v
                    })
                    .collect()
            })
        })
    }

    proptest! {
        #[test]
        fn unwrap_is_congruent_and_continuous(raw in prop::collection::vec(-PI..=PI, 1..300)) {
            let out = unwrap_phase(&wrapped(&raw));
            for (u, w) in out.values().iter().zip(&raw) {
                let turns = (u - w) / TAU;
                prop_assert!((turns - turns.round()).abs() < 1e-9);
            }
            for pair in out.values().windows(2) {
                prop_assert!((pair[1] - pair[0]).abs() <= PI + 1e-9);
            }
        }

        #[test]
        fn wrap_then_unwrap_then_wrap_is_identity(theta in smooth_phase()) {
            let once = wrap_phase(&UnwrappedPhase::new(theta).unwrap());
            let again = wrap_phase(&unwrap_phase(&once));
            for (a, b) in once.values().iter().zip(again.values()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }

        #[test]
        fn wrap_lands_in_half_open_interval(theta in prop::collection::vec(-1e4f64..1e4, 1..100)) {
            let wrapped = wrap_phase(&UnwrappedPhase::new(theta.clone()).unwrap());
            for (w, t) in wrapped.values().iter().zip(&theta) {
                prop_assert!(*w >= -PI && *w < PI);
                let turns = (t - w) / TAU;
                prop_assert!((turns - turns.round()).abs() < 1e-9);
            }
        }

        #[test]
        fn frequency_phase_round_trip(theta in smooth_phase(), fs in 100.0f64..96_000.0) {
            let track = phase_to_frequency(&UnwrappedPhase::new(theta.clone()).unwrap(), fs).unwrap();
            let back = frequency_to_phase(&track);
            for (a, b) in back.values().iter().zip(&theta) {
                prop_assert!((a - b).abs() <= 1e-9);
            }
        }

        #[test]
        fn identity_warp_is_a_fixed_point(theta in smooth_phase()) {
            let fs = 8000.0;
            let track = phase_to_frequency(&UnwrappedPhase::new(theta.clone()).unwrap(), fs).unwrap();
            let warped = apply_warp(&track, &WarpFunction::parse("f").unwrap()).unwrap();
            let back = frequency_to_phase(&warped);
            for (a, b) in back.values().iter().zip(&theta) {
                prop_assert!((a - b).abs() <= 1e-9);
            }
        }

        #[test]
        fn down_then_up_warp_is_identity(values in prop::collection::vec(-4000.0f64..4000.0, 1..200)) {
            let track = FrequencyTrack::new(values.clone(), 16_000.0, 0.0).unwrap();
            let down = apply_warp(&track, &WarpFunction::parse("2/3*f").unwrap()).unwrap();
            let up = apply_warp(&down, &WarpFunction::parse("3/2*f").unwrap()).unwrap();
            for (a, b) in up.values().iter().zip(&values) {
                prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300));
            }
        }

        #[test]
        fn integration_is_linear(
            a in prop::collection::vec(-2000.0f64..2000.0, 50),
            b in prop::collection::vec(-2000.0f64..2000.0, 50),
            pa in -3.0f64..3.0,
            pb in -3.0f64..3.0,
        ) {
            let fs = 8000.0;
            let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let ta = frequency_to_phase(&FrequencyTrack::new(a, fs, pa).unwrap());
            let tb = frequency_to_phase(&FrequencyTrack::new(b, fs, pb).unwrap());
            let ts = frequency_to_phase(&FrequencyTrack::new(sum, fs, pa + pb).unwrap());
            for ((s, x), y) in ts.values().iter().zip(ta.values()).zip(tb.values()) {
                prop_assert!((s - (x + y)).abs() <= 1e-9);
            }
        }
    }
}
