use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Pipeline stage names, used to tag errors raised inside [`crate::remap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Analytic,
    Unwrap,
    Differentiate,
    Warp,
    Integrate,
    Reconstruct,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Analytic => "analytic signal",
            Stage::Unwrap => "phase unwrap",
            Stage::Differentiate => "phase to frequency",
            Stage::Warp => "frequency warp",
            Stage::Integrate => "frequency to phase",
            Stage::Reconstruct => "reconstruction",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },

    #[error("warp evaluation failed at f = {f_hz} Hz{}: {reason}", sample_suffix(*.index))]
    WarpEvaluation {
        f_hz: f64,
        index: Option<usize>,
        reason: String,
    },

    #[error(
        "warped frequency {value_hz} Hz at sample {index} exceeds the Nyquist limit of {nyquist_hz} Hz"
    )]
    NyquistExceeded {
        index: usize,
        value_hz: f64,
        nyquist_hz: f64,
    },

    #[error("correlation undefined: input has zero variance")]
    UndefinedCorrelation,

    #[error("no spectral bin exceeds {threshold_fraction} of the peak power")]
    EmptySupport { threshold_fraction: f64 },

    #[error("WAV format error: {0}")]
    Format(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{stage}: {source}")]
    AtStage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

fn sample_suffix(index: Option<usize>) -> String {
    index.map(|i| format!(" (sample {i})")).unwrap_or_default()
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn at(self, stage: Stage) -> Self {
        Error::AtStage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, skipping stage annotations.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStage { source, .. } => source.root(),
            other => other,
        }
    }

    /// Stage at which the error was raised, when it came out of the remap pipeline.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::AtStage { stage, .. } => Some(*stage),
            _ => None,
        }
    }
}
