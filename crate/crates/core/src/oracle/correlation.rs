//! Second-order statistics: Monte-Carlo estimates of the block correlations
//! that drive the mean-weight recursion, closed-form autocorrelations of
//! FIR-coloured white noise, and least-squares normal equations.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::oracle::dense::{circulant_of, decompose_blocks, step_blocks};
use crate::oracle::solve::wiener;

/// Sample means of the block correlations (per frame):
///
/// ```text
/// R  = E{C2 C2ᵀ}   R̂ = E{C1 C2ᵀ}   r = E{C2 d}   r̂ = E{C1 d}
/// Λ1 = E{M1}       Λ2 = E{M2}
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSet {
    pub r: DMatrix<f64>,
    pub r_hat: DMatrix<f64>,
    pub r_vec: Vec<f64>,
    pub r_hat_vec: Vec<f64>,
    pub lambda1: Option<DMatrix<f64>>,
    pub lambda2: Option<DMatrix<f64>>,
    pub frames: usize,
}

/// Default number of frames for Monte-Carlo correlation estimates.
pub const DEFAULT_CORRELATION_FRAMES: usize = 100_000;

/// Estimate a [`CorrelationSet`] from `frames` consecutive overlap-save frames.
///
/// Frame `k` uses the reference window `x[kN .. kN + 2N]` and desired samples
/// `d[kN + N .. kN + 2N]`. When `mu_samples` is given, `Λ1`/`Λ2` are the block
/// means of the step circulants built from those step vectors.
pub fn estimate_correlations(
    x: &[f64],
    d: &[f64],
    n: usize,
    frames: usize,
    mu_samples: Option<&[Vec<f64>]>,
) -> Result<CorrelationSet> {
    if n == 0 || frames == 0 {
        return Err(Error::Empty("correlation frames"));
    }
    let needed = frames * n + 2 * n;
    if x.len() < needed || d.len() < needed {
        return Err(Error::LengthMismatch {
            context: "correlation signal length",
            expected: needed,
            got: x.len().min(d.len()),
        });
    }

    let mut r = DMatrix::zeros(n, n);
    let mut r_hat = DMatrix::zeros(n, n);
    let mut r_vec = DVector::zeros(n);
    let mut r_hat_vec = DVector::zeros(n);
    let mut c1 = DMatrix::zeros(n, n);
    let mut c2 = DMatrix::zeros(n, n);
    for k in 0..frames {
        let window = &x[k * n..k * n + 2 * n];
        fill_blocks(window, &mut c1, &mut c2);
        let dk = DVector::from_column_slice(&d[k * n + n..k * n + 2 * n]);
        r.gemm(1.0, &c2, &c2.transpose(), 1.0);
        r_hat.gemm(1.0, &c1, &c2.transpose(), 1.0);
        r_vec.gemv(1.0, &c2, &dk, 1.0);
        r_hat_vec.gemv(1.0, &c1, &dk, 1.0);
    }
    let scale = 1.0 / frames as f64;

    let (lambda1, lambda2) = match mu_samples {
        Some(samples) if !samples.is_empty() => {
            let m = samples[0].len();
            if m != 2 * n {
                return Err(Error::LengthMismatch {
                    context: "step-size sample",
                    expected: 2 * n,
                    got: m,
                });
            }
            let mut mean = vec![0.0; m];
            for s in samples {
                if s.len() != m {
                    return Err(Error::LengthMismatch {
                        context: "step-size sample",
                        expected: m,
                        got: s.len(),
                    });
                }
                for (acc, v) in mean.iter_mut().zip(s) {
                    *acc += v;
                }
            }
            for v in &mut mean {
                *v /= samples.len() as f64;
            }
            let blocks = step_blocks(&mean)?;
            (Some(blocks.b1), Some(blocks.b2))
        }
        _ => (None, None),
    };

    Ok(CorrelationSet {
        r: r * scale,
        r_hat: r_hat * scale,
        r_vec: (r_vec * scale).as_slice().to_vec(),
        r_hat_vec: (r_hat_vec * scale).as_slice().to_vec(),
        lambda1,
        lambda2,
        frames,
    })
}

// Index form of the blocks of circulant_of(window); avoids building the M×M matrix.
fn fill_blocks(window: &[f64], c1: &mut DMatrix<f64>, c2: &mut DMatrix<f64>) {
    let n = c1.nrows();
    let m = 2 * n;
    for i in 0..n {
        for j in 0..n {
            c1[(i, j)] = window[(j + m - i) % m];
            c2[(i, j)] = window[n + j - i];
        }
    }
}

/// Reference blocks via the full circulant, for checking [`fill_blocks`].
pub fn blocks_via_circulant(window: &[f64]) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let pair = decompose_blocks(&circulant_of(window))?;
    Ok((pair.b1, pair.b2))
}

/// Autocorrelation `r(τ) = σ² Σ_l h_l h_{l+τ}` of white noise of variance `σ²`
/// passed through the FIR filter `h`, for lags `0..lags`.
pub fn fir_autocorrelation(taps: &[f64], variance: f64, lags: usize) -> Vec<f64> {
    (0..lags)
        .map(|tau| {
            variance
                * taps
                    .iter()
                    .zip(taps.iter().skip(tau))
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
        })
        .collect()
}

/// Symmetric Toeplitz matrix from an autocorrelation sequence.
pub fn toeplitz(acf: &[f64], n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| acf.get(i.abs_diff(j)).copied().unwrap_or(0.0))
}

/// Exact length-`n` Wiener filter for identifying `system` from a reference
/// that is white noise of variance `variance` coloured by `coloring`.
pub fn analytic_wiener(coloring: &[f64], variance: f64, system: &[f64], n: usize) -> Result<Vec<f64>> {
    let lags = n.max(system.len()) + coloring.len();
    let acf = fir_autocorrelation(coloring, variance, lags);
    let at = |tau: isize| acf.get(tau.unsigned_abs()).copied().unwrap_or(0.0);
    let r_xd: Vec<f64> = (0..n)
        .map(|j| {
            system
                .iter()
                .enumerate()
                .map(|(l, h)| h * at(j as isize - l as isize))
                .sum()
        })
        .collect();
    wiener(&toeplitz(&acf, n), &r_xd)
}

/// Least-squares FIR fit of length `n` mapping `x` to `d`, with `x` taken as
/// zero before its first sample. Solves the covariance-method normal equations.
pub fn least_squares_fir(x: &[f64], d: &[f64], n: usize) -> Result<Vec<f64>> {
    let len = x.len().min(d.len());
    if len == 0 || n == 0 {
        return Err(Error::Empty("least-squares signal"));
    }
    let (r, r_xd) = normal_equations(&x[..len], &d[..len], n);
    wiener(&r, &r_xd)
}

/// Normal-equation matrices `Σ_t x_t x_tᵀ / T` and `Σ_t x_t d_t / T` with
/// `x_t = [x(t), …, x(t−n+1)]`.
pub fn normal_equations(x: &[f64], d: &[f64], n: usize) -> (DMatrix<f64>, Vec<f64>) {
    let len = x.len();
    let mut r = DMatrix::zeros(n, n);
    for j in 0..n {
        r[(0, j)] = (j..len).map(|t| x[t] * x[t - j]).sum::<f64>();
    }
    // Shifting both lags by one drops the product at the end of the signal.
    let tail = |k: usize| if k <= len { x[len - k] } else { 0.0 };
    for i in 1..n {
        for j in i..n {
            r[(i, j)] = r[(i - 1, j - 1)] - tail(i) * tail(j);
        }
    }
    for i in 0..n {
        for j in 0..i {
            r[(i, j)] = r[(j, i)];
        }
    }
    let r_xd: Vec<f64> = (0..n)
        .map(|i| (i..len).map(|t| x[t - i] * d[t]).sum::<f64>() / len as f64)
        .collect();
    (r / len as f64, r_xd)
}
