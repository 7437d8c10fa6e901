//! Frequency warping of real signals through their analytic representation.
//!
//! A signal is split into a slowly varying envelope and an instantaneous
//! phase. The phase is turned into an instantaneous-frequency track, every
//! sample of that track is passed through a user-supplied [`WarpFunction`],
//! and the result is integrated back into phase and recombined with the
//! untouched envelope.
//!
//! ```
//! use specwarp::{generate, remap, WarpFunction};
//!
//! let x = generate::tone(300.0, 0.25, 16_000.0, 1.0).unwrap();
//! let y = remap(&x, &WarpFunction::parse("2/3*f").unwrap()).unwrap();
//! assert_eq!(y.len(), x.len());
//! ```

pub mod analytic;
pub mod error;
pub mod generate;
pub mod phase;
pub mod signal;
pub mod spectrum;
pub mod synthesis;
pub mod validation;
pub mod warp;
pub mod wav;

pub use analytic::{
    envelope, hilbert_transform, instantaneous_phase, make_analytic, AnalyticSignal, Envelope,
    WrappedPhase,
};
pub use error::{Error, Result, Stage};
pub use phase::{
    apply_warp, apply_warp_with, frequency_to_phase, phase_to_frequency, unwrap_phase, wrap_phase,
    FrequencyTrack, NyquistPolicy, UnwrappedPhase, WarpedTrack,
};
pub use signal::{compute_mean, Signal};
pub use spectrum::{
    peak_frequency, pearson_r, power_spectrum, power_spectrum_default, spectrogram,
    sweep_endpoints, PowerSpectrum, Spectrogram,
};
pub use synthesis::{
    reconstruct, remap, remap_chunked, remap_chunked_with, remap_traced, remap_with, RemapOptions,
    RemapTrace, Remapped, MIN_CHUNK_LEN,
};
pub use validation::{round_trip, Check, ValidationOptions, ValidationReport};
pub use warp::WarpFunction;
pub use wav::{read_wav, read_wav_file, write_wav, BitDepth, WavFile, WriteReport};
