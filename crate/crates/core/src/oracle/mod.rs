//! Independent dense references for the fast frequency-domain code.
//!
//! The time-domain update of each variant, the Wiener solution, the FKF
//! steady-state prediction and the early-stage contraction factors all live
//! here. Apart from the [`crate::filter::Variant`] tag it shares nothing with
//! the fast path: no FFTs, only explicit matrices.

pub mod convergence;
pub mod correlation;
pub mod dense;
pub mod solve;
pub mod timedomain;

pub use convergence::{contraction_mfkf1, contraction_mfkf2};
pub use correlation::{
    analytic_wiener, estimate_correlations, fir_autocorrelation, least_squares_fir, toeplitz,
    CorrelationSet, DEFAULT_CORRELATION_FRAMES,
};
pub use dense::{circulant_of, decompose_blocks, reference_blocks, step_blocks, CirculantPair};
pub use solve::{fkf_steady_state, wiener};
pub use timedomain::{td_step, TimeDomainStep};
