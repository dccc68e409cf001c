//! Dense-matrix forms of the frequency-domain operators.
//!
//! Everything here is `O(M²)` or `O(M³)` and only meant for cross-checking the
//! fast paths at small frame sizes.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};

/// The `M × M` DFT matrix `F[i][n] = exp(−j2πin/M)`.
pub fn dft_matrix(m: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(m, m, |i, n| {
        let phase = -2.0 * PI * ((i * n) % m) as f64 / m as f64;
        Complex64::from_polar(1.0, phase)
    })
}

/// `F⁻¹ = Fᴴ / M`.
pub fn idft_matrix(m: usize) -> DMatrix<Complex64> {
    dft_matrix(m).adjoint() / Complex64::new(m as f64, 0.0)
}

/// Naive `O(M²)` DFT of a real sequence.
pub fn naive_dft(x: &[f64]) -> Vec<Complex64> {
    let m = x.len();
    (0..m)
        .map(|i| {
            x.iter()
                .enumerate()
                .map(|(n, &v)| v * Complex64::from_polar(1.0, -2.0 * PI * ((i * n) % m) as f64 / m as f64))
                .sum()
        })
        .collect()
}

/// Naive `O(M²)` inverse DFT, real part only.
pub fn naive_idft_real(spec: &[Complex64]) -> Vec<f64> {
    let m = spec.len();
    (0..m)
        .map(|n| {
            let s: Complex64 = spec
                .iter()
                .enumerate()
                .map(|(i, z)| z * Complex64::from_polar(1.0, 2.0 * PI * ((i * n) % m) as f64 / m as f64))
                .sum();
            s.re / m as f64
        })
        .collect()
}

/// `F · diag(keep) · F⁻¹` where `keep` selects which time samples survive.
fn constraint_matrix(n: usize, keep_first: bool) -> DMatrix<Complex64> {
    let m = 2 * n;
    let mask = DMatrix::from_fn(m, m, |i, j| {
        let kept = if keep_first { i < n } else { i >= n };
        if i == j && kept {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    dft_matrix(m) * mask * idft_matrix(m)
}

/// Dense `G_{N,0}` (keeps the first `N` time samples).
pub fn causal_constraint(n: usize) -> DMatrix<Complex64> {
    constraint_matrix(n, true)
}

/// Dense `G_{0,N}` (keeps the last `N` time samples).
pub fn anticausal_constraint(n: usize) -> DMatrix<Complex64> {
    constraint_matrix(n, false)
}

fn diag_complex(v: impl Iterator<Item = Complex64>) -> DMatrix<Complex64> {
    let v: Vec<Complex64> = v.collect();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(v))
}

fn real_diag(v: &[f64]) -> DMatrix<Complex64> {
    diag_complex(v.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// Kalman gain `K = P Xᴴ [X P Xᴴ + M diag(Φss)]⁻¹` formed with dense matrices.
pub fn dense_kalman_gain(
    covariance: &[f64],
    x_spec: &[Complex64],
    phi_ss: &[f64],
    floor: f64,
) -> Result<DMatrix<Complex64>> {
    let m = x_spec.len();
    let p = real_diag(covariance);
    let x = diag_complex(x_spec.iter().copied());
    let noise = real_diag(&phi_ss.iter().map(|v| m as f64 * v + floor).collect::<Vec<_>>());
    let inner = &x * &p * x.adjoint() + noise;
    let inv = inner
        .try_inverse()
        .ok_or(Error::IllConditioned { condition: f64::INFINITY })?;
    Ok(p * x.adjoint() * inv)
}

/// Step-size diagonal `P [X P Xᴴ + M diag(Φss)]⁻¹`.
pub fn dense_step_size(
    covariance: &[f64],
    x_spec: &[Complex64],
    phi_ss: &[f64],
    floor: f64,
) -> Result<Vec<f64>> {
    let m = x_spec.len();
    let p = real_diag(covariance);
    let x = diag_complex(x_spec.iter().copied());
    let noise = real_diag(&phi_ss.iter().map(|v| m as f64 * v + floor).collect::<Vec<_>>());
    let inner = &x * &p * x.adjoint() + noise;
    let inv = inner
        .try_inverse()
        .ok_or(Error::IllConditioned { condition: f64::INFINITY })?;
    let mu = p * inv;
    Ok((0..m).map(|i| mu[(i, i)].re).collect())
}

/// `P' = A² [I − (N/M) K X] P + M diag(ΦΔΔ)` with `K` from [`dense_kalman_gain`].
#[allow(clippy::too_many_arguments)]
pub fn dense_covariance_update(
    covariance: &[f64],
    x_spec: &[Complex64],
    phi_ss: &[f64],
    phi_dd: &[f64],
    a: f64,
    n: usize,
    floor: f64,
) -> Result<Vec<f64>> {
    let m = x_spec.len();
    let k = dense_kalman_gain(covariance, x_spec, phi_ss, floor)?;
    let x = diag_complex(x_spec.iter().copied());
    let p = real_diag(covariance);
    let eye = DMatrix::<Complex64>::identity(m, m);
    let ratio = Complex64::new(n as f64 / m as f64, 0.0);
    let next = (eye - k * x * ratio) * p * Complex64::new(a * a, 0.0)
        + real_diag(&phi_dd.iter().map(|v| m as f64 * v).collect::<Vec<_>>());
    Ok((0..m).map(|i| next[(i, i)].re).collect())
}

/// Circulant matrix whose row `i` is `first_row` cyclically shifted right by `i`.
pub fn circulant_of(first_row: &[f64]) -> DMatrix<f64> {
    let m = first_row.len();
    DMatrix::from_fn(m, m, |i, j| first_row[(j + m - i) % m])
}

/// The two `N × N` blocks of an `M × M` circulant laid out as `[[B1, B2], [B2, B1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantPair {
    /// Top-left block.
    pub b1: DMatrix<f64>,
    /// Top-right block.
    pub b2: DMatrix<f64>,
}

impl CirculantPair {
    pub fn reassemble(&self) -> DMatrix<f64> {
        let n = self.b1.nrows();
        let mut out = DMatrix::zeros(2 * n, 2 * n);
        out.view_mut((0, 0), (n, n)).copy_from(&self.b1);
        out.view_mut((0, n), (n, n)).copy_from(&self.b2);
        out.view_mut((n, 0), (n, n)).copy_from(&self.b2);
        out.view_mut((n, n), (n, n)).copy_from(&self.b1);
        out
    }
}

/// Split a circulant `M × M` matrix (`M = 2N`) into its blocks.
pub fn decompose_blocks(c: &DMatrix<f64>) -> Result<CirculantPair> {
    let m = c.nrows();
    if c.ncols() != m || !m.is_multiple_of(2) || m == 0 {
        return Err(Error::InvalidConfig(format!(
            "circulant decomposition needs an even square matrix, got {}x{}",
            c.nrows(),
            c.ncols()
        )));
    }
    let scale = c.amax().max(1.0);
    for i in 0..m {
        for j in 0..m {
            let deviation = (c[(i, j)] - c[(0, (j + m - i) % m)]).abs();
            if deviation > 1e-12 * scale {
                return Err(Error::NotCirculant {
                    row: i,
                    col: j,
                    deviation,
                });
            }
        }
    }
    let n = m / 2;
    Ok(CirculantPair {
        b1: c.view((0, 0), (n, n)).into_owned(),
        b2: c.view((0, n), (n, n)).into_owned(),
    })
}

/// Blocks of the reference circulant `X_C` built from the `M`-sample window.
pub fn reference_blocks(x_window: &[f64]) -> Result<CirculantPair> {
    decompose_blocks(&circulant_of(x_window))
}

/// Blocks of the step circulant `M(k) = F⁻¹ diag(μ) F`, whose first row is `F⁻¹ μ`.
pub fn step_blocks(mu: &[f64]) -> Result<CirculantPair> {
    let spec: Vec<Complex64> = mu.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let row = naive_idft_real(&spec);
    decompose_blocks(&circulant_of(&row))
}
