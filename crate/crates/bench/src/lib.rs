//! Input fixtures shared by the benchmarks.

use specwarp::{generate, Signal, WarpFunction};

pub const SAMPLE_RATE_HZ: f64 = 16_000.0;

/// Benchmark durations in seconds.
pub const DURATIONS_S: [f64; 3] = [1.0, 4.0, 16.0];

/// A 21 to 480 Hz log sweep, the heaviest of the reference signals.
pub fn sweep(duration_s: f64) -> Signal {
    generate::log_sweep(21.0, 480.0, duration_s, SAMPLE_RATE_HZ).expect("valid sweep")
}

pub fn noise(duration_s: f64) -> Signal {
    generate::uniform_noise(duration_s, SAMPLE_RATE_HZ, 0.5, 1).expect("valid noise")
}

pub fn two_thirds() -> WarpFunction {
    WarpFunction::parse("2/3*f").expect("valid warp")
}
