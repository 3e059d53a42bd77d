use std::path::PathBuf;

/// Everything that can go wrong across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{}:{line}: {reason}", path.display())]
    Format {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("power iteration did not converge after {iterations} iterations (last residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error(
        "layer 2 sustains the epidemic on its own (tau22 * lambda(A22) = {normalized} >= 1); \
         the layer-1 threshold is undefined"
    )]
    SupercriticalLayer2 { normalized: f64 },

    #[error("operator has zero spectral radius; the threshold is infinite")]
    ZeroSpectrum,

    #[error("mean-field state left the probability simplex at t = {t} (deviation {deviation:e}); retry with dt smaller than {dt}")]
    StepSize { t: f64, dt: f64, deviation: f64 },

    #[error("calibration failed: {reason}")]
    Calibration {
        reason: String,
        /// `(rate, achieved mean)` for every evaluated point.
        trace: Vec<(f64, f64)>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse error classes, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parameter,
    Numeric,
    Io,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidParameter { .. } => ErrorClass::Parameter,
            Error::Format { .. } | Error::Io(_) => ErrorClass::Io,
            Error::Convergence { .. }
            | Error::SupercriticalLayer2 { .. }
            | Error::ZeroSpectrum
            | Error::StepSize { .. }
            | Error::Calibration { .. } => ErrorClass::Numeric,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
