//! Block transforms between length-`M` real frames and their complex spectra,
//! plus the two constraint projections that every filter variant shares.
//!
//! The forward transform is unnormalized, `X[i] = Σ x[n]·exp(−j2πin/M)`, and the
//! inverse carries the `1/M` factor. The causal projection keeps the first half
//! of the time block and the anticausal projection keeps the second half, so for
//! `M = 2N` the two are complementary:
//!
//! ```text
//! causal(V)     = F · diag(I_N, 0_N) · F⁻¹ · V
//! anticausal(V) = F · diag(0_N, I_N) · F⁻¹ · V
//! ```

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{ensure_finite, ensure_len, Error, Result};

/// Relative tolerance on the imaginary residual when an inverse transform is
/// expected to be real.
pub const REAL_RESIDUAL_TOL: f64 = 1e-10;

/// A real time-domain block of length `M`.
#[derive(Clone, PartialEq)]
pub struct TimeBlock(Vec<f64>);

impl TimeBlock {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        ensure_finite("time block", &samples)?;
        Ok(Self(samples))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for TimeBlock {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl fmt::Debug for TimeBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("TimeBlock").field(&self.0).finish()
    }
}

/// A length-`M` complex spectrum (one entry per DFT bin).
#[derive(Clone, PartialEq)]
pub struct SpectralVector(Vec<Complex64>);

impl SpectralVector {
    pub fn new(bins: Vec<Complex64>) -> Result<Self> {
        if let Some(index) = bins.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                context: "spectral vector",
                index,
            });
        }
        Ok(Self(bins))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    /// Per-bin power `|Z_i|²`.
    pub fn power(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Elementwise product with another spectrum.
    pub fn hadamard(&self, other: &SpectralVector) -> SpectralVector {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }

    /// Elementwise `conj(self) · other`.
    pub fn conj_hadamard(&self, other: &SpectralVector) -> SpectralVector {
        debug_assert_eq!(self.len(), other.len());
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.conj() * b)
                .collect(),
        )
    }

    /// Elementwise scaling by a real per-bin weight.
    pub fn scale_bins(&self, weights: &[f64]) -> SpectralVector {
        debug_assert_eq!(self.len(), weights.len());
        Self(self.0.iter().zip(weights).map(|(z, w)| z * *w).collect())
    }

    pub fn scale(&self, factor: f64) -> SpectralVector {
        Self(self.0.iter().map(|z| z * factor).collect())
    }

    pub fn add(&self, other: &SpectralVector) -> SpectralVector {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Conjugate-symmetric part `(Z_i + conj(Z_{M−i})) / 2`: the spectrum of
    /// the real part of the time-domain image. Removes roundoff drift from
    /// vectors that are updated recursively.
    pub fn hermitian_part(&self) -> SpectralVector {
        let m = self.len();
        Self(
            (0..m)
                .map(|i| (self.0[i] + self.0[(m - i) % m].conj()) * 0.5)
                .collect(),
        )
    }

    pub fn max_abs_diff(&self, other: &SpectralVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Deref for SpectralVector {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

impl fmt::Debug for SpectralVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("SpectralVector").field(&self.0).finish()
    }
}

/// Planned forward/inverse transforms for one frame size `M`.
#[derive(Clone)]
pub struct Transform {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Transform").field("len", &self.len).finish()
    }
}

impl Transform {
    pub fn new(len: usize) -> Result<Self> {
        if len < 2 {
            return Err(Error::InvalidConfig(format!(
                "transform length must be at least 2, got {len}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Unnormalized forward DFT of a real block.
    pub fn dft(&self, block: &[f64]) -> Result<SpectralVector> {
        ensure_len("dft input", self.len, block.len())?;
        ensure_finite("dft input", block)?;
        let mut buf: Vec<Complex64> = block.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward.process(&mut buf);
        Ok(SpectralVector(buf))
    }

    /// Unnormalized forward DFT of a complex block.
    pub fn dft_complex(&self, block: &[Complex64]) -> Result<SpectralVector> {
        ensure_len("dft input", self.len, block.len())?;
        let mut buf = block.to_vec();
        self.forward.process(&mut buf);
        Ok(SpectralVector(buf))
    }

    /// Inverse DFT including the `1/M` factor, without any realness check.
    pub fn idft_complex(&self, spec: &SpectralVector) -> Result<Vec<Complex64>> {
        ensure_len("idft input", self.len, spec.len())?;
        let mut buf = spec.0.clone();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.len as f64;
        for z in &mut buf {
            *z *= scale;
        }
        Ok(buf)
    }

    /// Inverse DFT of a spectrum that must represent a real block.
    ///
    /// Fails with [`Error::SymmetryCorruption`] when the largest imaginary
    /// residual exceeds [`REAL_RESIDUAL_TOL`] times the block norm.
    pub fn idft(&self, spec: &SpectralVector) -> Result<TimeBlock> {
        let buf = self.idft_complex(spec)?;
        real_part_checked(buf, REAL_RESIDUAL_TOL)
    }

    /// `F · diag(I_N, 0_N) · F⁻¹ · spec`: zero the last `N` time samples.
    pub fn project_causal(&self, spec: &SpectralVector, n: usize) -> Result<SpectralVector> {
        self.project(spec, n, n..2 * n)
    }

    /// `F · diag(0_N, I_N) · F⁻¹ · spec`: zero the first `N` time samples.
    pub fn project_anticausal(&self, spec: &SpectralVector, n: usize) -> Result<SpectralVector> {
        self.project(spec, n, 0..n)
    }

    fn project(
        &self,
        spec: &SpectralVector,
        n: usize,
        zeroed: std::ops::Range<usize>,
    ) -> Result<SpectralVector> {
        if self.len != 2 * n {
            return Err(Error::LengthMismatch {
                context: "projection frame size (M = 2N)",
                expected: 2 * n,
                got: self.len,
            });
        }
        let mut buf = self.idft_complex(spec)?;
        for z in &mut buf[zeroed] {
            *z = Complex64::new(0.0, 0.0);
        }
        self.forward.process(&mut buf);
        Ok(SpectralVector(buf))
    }
}

pub(crate) fn real_part_checked(buf: Vec<Complex64>, tol: f64) -> Result<TimeBlock> {
    let norm = buf.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let residual = buf.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if residual > tol * norm {
        return Err(Error::SymmetryCorruption { residual, norm });
    }
    Ok(TimeBlock(buf.into_iter().map(|z| z.re).collect()))
}
