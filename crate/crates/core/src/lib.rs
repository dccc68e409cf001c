//! Frequency-domain Kalman filters for block adaptive system identification.
//!
//! [`AdaptiveFilter`] runs the standard FKF and its two causal-gain
//! modifications on overlap-save frames of `M = 2N` samples. The
//! [`oracle`] module holds dense time-domain references and steady-state
//! predictions, and [`sim`] drives ensembles of runs and computes metrics.

pub mod error;
pub mod filter;
pub mod oracle;
pub mod sim;
pub mod spectral;

pub use rustfft::num_complex::Complex64;

pub use error::{Error, Result};
pub use filter::{
    AdaptiveFilter, AlgorithmConfig, FilterState, FrameResult, PsdMode, Variant,
};
pub use sim::{MetricsTrace, ScenarioConfig, ScenarioResult, SourceSpec, SystemSpec};
pub use spectral::{SpectralVector, TimeBlock, Transform};
