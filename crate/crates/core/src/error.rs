use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the filter, oracle and simulation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value at index {index} in {context}")]
    NonFinite { context: &'static str, index: usize },

    #[error("{context}: expected length {expected}, got {got}")]
    LengthMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("spectrum is not real-representable: imaginary residual {residual:e} exceeds tolerance for block norm {norm:e}")]
    SymmetryCorruption { residual: f64, norm: f64 },

    #[error("linear system is singular or ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("matrix is not circulant: entry ({row}, {col}) deviates by {deviation:e}")]
    NotCirculant {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("reference weight vector has zero norm")]
    ZeroReference,

    #[error("power spectrum is identically zero")]
    ZeroSpectrum,

    #[error("unsupported wav file {path}: {reason}")]
    Wav { path: PathBuf, reason: String },

    #[error("run {algorithm} seed {seed} produced a non-finite metric at frame {frame}")]
    DivergedRun {
        algorithm: String,
        seed: u64,
        frame: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_len(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            context,
            expected,
            got,
        })
    }
}

pub(crate) fn ensure_finite(context: &'static str, values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { context, index }),
        None => Ok(()),
    }
}
