//! Crate-wide error type.

use std::path::PathBuf;

/// Everything that can go wrong across the library and the CLI.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{context}: dimension mismatch (expected {expected}, got {actual})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error(
        "breakpoints must be strictly increasing: t[{index}] = {value} does not exceed {previous}"
    )]
    NonIncreasingBreakpoints {
        index: usize,
        value: f64,
        previous: f64,
    },

    #[error("step size must be positive, got {h}")]
    NonPositiveStep { h: f64 },

    #[error("invalid Butcher tableau '{name}': {violations}")]
    InvalidTableau { name: String, violations: String },

    #[error("non-finite value at stage {stage}, t = {time}")]
    NonFinite { stage: usize, time: f64 },

    #[error("t = {t} outside waveform window [{lo}, {hi}]")]
    OutsideWindow { t: f64, lo: f64, hi: f64 },

    #[error("extrapolation disabled for this waveform: t = {t} lies past {t_end}")]
    ExtrapolationForbidden { t: f64, t_end: f64 },

    #[error("derivative order {order} unsupported (only 1 and 2)")]
    UnsupportedDerivative { order: u32 },

    #[error("{name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time span [{t0}, {t_end}] is not an integer number of steps of {h} (got {steps})")]
    GridMismatch {
        t0: f64,
        t_end: f64,
        h: f64,
        steps: f64,
    },

    #[error("step {step} failed: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("macro step {index} failed: {source}")]
    MacroStepFailed {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{phase}: {source}")]
    InPhase {
        phase: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {key}: {reason}")]
    Config { key: String, reason: String },

    #[error("cost comparison requires runs of the same problem")]
    ProblemMismatch,

    #[error("cost measurement needs at least two macro windows")]
    TooFewWindows,

    #[error("nothing to plot: report has no rows")]
    EmptyReport,

    #[error("eigensolver did not converge; the chain is ill-conditioned")]
    EigenFailure,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid CSV at line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

impl Error {
    /// Process exit code used by the CLI: 1 config, 2 integration/numerics, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 1,
            Error::Io { .. } | Error::EmptyReport => 3,
            Error::InPhase { source, .. }
            | Error::StepFailed { source, .. }
            | Error::MacroStepFailed { source, .. } => source.exit_code().max(2),
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
