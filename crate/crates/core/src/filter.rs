//! Diagonalized frequency-domain Kalman filter and its two modified variants.
//!
//! All three variants share the same overlap-save frame pipeline with frame
//! size `M = 2N` and frame shift `N`:
//!
//! ```text
//! X   = diag(F x(k))                       reference spectrum, last M samples
//! y   = last N of F⁻¹ (X · W)              echo estimate
//! E   = F [0_N, d − y]                     error spectrum
//! μ_i = P_i / (|X_i|² P_i + M Φss_i + δ)   per-bin step size
//! P_i ← A² (1 − (N/M) μ_i |X_i|²) P_i + M ΦΔΔ_i
//! ```
//!
//! and differ only in where the gradient constraint sits:
//!
//! | variant | weight update                               | output             |
//! |---------|---------------------------------------------|--------------------|
//! | FKF     | `W ← A [W + causal(μ · Xᴴ E)]`              | `X · W`            |
//! | MFKF1   | `W ← A [W + μ · causal(Xᴴ E)]`              | `X · causal(W)`    |
//! | MFKF2   | `W ← A [W + min(μ) · causal(Xᴴ E)]`         | `X · W`            |
//!
//! The FKF puts a frequency-dependent step *inside* the constraint, which makes
//! its time-domain step operator non-block-diagonal and biases the steady state
//! when the filter is shorter than the unknown system. MFKF1 lets the weights
//! carry a wraparound half that is removed on output; MFKF2 uses a scalar step.

use std::fmt;
use std::str::FromStr;

use crate::error::{ensure_finite, ensure_len, Error, Result};
use crate::spectral::{SpectralVector, Transform};

pub const DEFAULT_P_INIT: f64 = 10.0;
pub const DEFAULT_DENOM_FLOOR: f64 = 1e-10;
pub const DEFAULT_LAMBDA_S: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Fkf,
    Mfkf1,
    Mfkf2,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Fkf, Variant::Mfkf1, Variant::Mfkf2];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Fkf => "FKF",
            Variant::Mfkf1 => "MFKF1",
            Variant::Mfkf2 => "MFKF2",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fkf" => Ok(Variant::Fkf),
            "mfkf1" => Ok(Variant::Mfkf1),
            "mfkf2" => Ok(Variant::Mfkf2),
            other => Err(Error::InvalidConfig(format!(
                "unknown algorithm '{other}' (expected fkf, mfkf1 or mfkf2)"
            ))),
        }
    }
}

/// How the observation- and process-noise PSDs are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsdMode {
    /// Constant per-bin levels supplied by the caller.
    Fixed { phi_ss: f64, phi_dd: f64 },
    /// Recursive periodogram of the error for Φss; `(1 − A²)|W|²/M` for ΦΔΔ.
    Estimated { lambda_s: f64 },
}

impl Default for PsdMode {
    fn default() -> Self {
        PsdMode::Estimated {
            lambda_s: DEFAULT_LAMBDA_S,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgorithmConfig {
    pub variant: Variant,
    /// Markov transition parameter, `0 < A ≤ 1`.
    pub a: f64,
    pub p_init: f64,
    pub psd_mode: PsdMode,
    pub denom_floor: f64,
}

impl AlgorithmConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            a: 1.0,
            p_init: DEFAULT_P_INIT,
            psd_mode: PsdMode::default(),
            denom_floor: DEFAULT_DENOM_FLOOR,
        }
    }

    pub fn with_a(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    pub fn with_p_init(mut self, p_init: f64) -> Self {
        self.p_init = p_init;
        self
    }

    pub fn with_psd_mode(mut self, mode: PsdMode) -> Self {
        self.psd_mode = mode;
        self
    }

    pub fn with_denom_floor(mut self, floor: f64) -> Self {
        self.denom_floor = floor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.a > 0.0 && self.a <= 1.0) {
            return bad(format!("transition parameter A must lie in (0, 1], got {}", self.a));
        }
        if !(self.p_init > 0.0 && self.p_init.is_finite()) {
            return bad(format!("p_init must be positive, got {}", self.p_init));
        }
        if !(self.denom_floor > 0.0 && self.denom_floor.is_finite()) {
            return bad(format!("denom_floor must be positive, got {}", self.denom_floor));
        }
        match self.psd_mode {
            PsdMode::Fixed { phi_ss, phi_dd } => {
                if !(phi_ss >= 0.0 && phi_ss.is_finite() && phi_dd >= 0.0 && phi_dd.is_finite()) {
                    return bad(format!(
                        "fixed PSD levels must be nonnegative, got phi_ss={phi_ss}, phi_dd={phi_dd}"
                    ));
                }
            }
            PsdMode::Estimated { lambda_s } => {
                if !(0.0..1.0).contains(&lambda_s) {
                    return bad(format!("lambda_s must lie in [0, 1), got {lambda_s}"));
                }
            }
        }
        Ok(())
    }
}

/// Mutable per-instance filter state.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterState {
    /// Frequency-domain weights `W`, length `M`.
    pub weights: SpectralVector,
    /// Diagonal of the state-error covariance `P`.
    pub covariance: Vec<f64>,
    pub phi_ss: Vec<f64>,
    pub phi_dd: Vec<f64>,
    /// Last `M` reference samples, oldest first.
    pub x_history: Vec<f64>,
    pub frame_index: u64,
    /// Number of covariance entries that had to be clamped at zero.
    pub clamp_count: u64,
}

impl FilterState {
    pub fn new(config: &AlgorithmConfig, n: usize) -> Result<Self> {
        config.validate()?;
        if n == 0 {
            return Err(Error::InvalidConfig("filter length N must be positive".into()));
        }
        let m = 2 * n;
        let (phi_ss, phi_dd) = match config.psd_mode {
            PsdMode::Fixed { phi_ss, phi_dd } => (phi_ss, phi_dd),
            PsdMode::Estimated { .. } => (0.0, 0.0),
        };
        Ok(Self {
            weights: SpectralVector::zeros(m),
            covariance: vec![config.p_init; m],
            phi_ss: vec![phi_ss; m],
            phi_dd: vec![phi_dd; m],
            x_history: vec![0.0; m],
            frame_index: 0,
            clamp_count: 0,
        })
    }
}

/// Output stage of one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterOutput {
    pub y_frame: Vec<f64>,
    pub e_frame: Vec<f64>,
    /// `F [0_N, e]`.
    pub error_spectrum: SpectralVector,
}

/// What one call to [`AdaptiveFilter::process_frame`] reports.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameResult {
    /// A-priori error `d − y`; the echo-cancelled output.
    pub e_frame: Vec<f64>,
    pub y_frame: Vec<f64>,
    /// Per-bin steps actually applied (all equal to `ξ` for MFKF2).
    pub mu: Vec<f64>,
}

/// `μ_i = P_i / (|X_i|² P_i + M Φss_i + floor)`.
pub fn step_size(
    covariance: &[f64],
    x_spec: &SpectralVector,
    phi_ss: &[f64],
    m: usize,
    floor: f64,
) -> Vec<f64> {
    debug_assert_eq!(covariance.len(), x_spec.len());
    debug_assert_eq!(phi_ss.len(), x_spec.len());
    covariance
        .iter()
        .zip(x_spec.iter())
        .zip(phi_ss)
        .map(|((&p, x), &phi)| p / (x.norm_sqr() * p + m as f64 * phi + floor))
        .collect()
}

/// The scalar step `ξ = min_i μ_i` used by MFKF2.
pub fn min_step(mu: &[f64]) -> Result<f64> {
    if mu.is_empty() {
        return Err(Error::Empty("step-size vector"));
    }
    Ok(mu.iter().copied().fold(f64::INFINITY, f64::min))
}

/// `P'_i = A² (1 − (N/M) μ_i |X_i|²) P_i + M ΦΔΔ_i`.
///
/// Returns the updated diagonal and the number of entries clamped at zero.
pub fn update_covariance(
    covariance: &[f64],
    mu: &[f64],
    x_spec: &SpectralVector,
    a: f64,
    phi_dd: &[f64],
    n: usize,
    m: usize,
) -> (Vec<f64>, usize) {
    let ratio = n as f64 / m as f64;
    let mut clamped = 0;
    let updated = covariance
        .iter()
        .zip(mu)
        .zip(x_spec.iter())
        .zip(phi_dd)
        .map(|(((&p, &mu), x), &dd)| {
            let next = a * a * (1.0 - ratio * mu * x.norm_sqr()) * p + m as f64 * dd;
            if next < 0.0 {
                clamped += 1;
                0.0
            } else {
                next
            }
        })
        .collect();
    (updated, clamped)
}

/// `Φss'_i = λ Φss_i + (1 − λ) |E_i|² / M`.
pub fn estimate_observation_psd(
    error_spectrum: &SpectralVector,
    prev: &[f64],
    lambda_s: f64,
    m: usize,
) -> Vec<f64> {
    error_spectrum
        .iter()
        .zip(prev)
        .map(|(e, &p)| lambda_s * p + (1.0 - lambda_s) * e.norm_sqr() / m as f64)
        .collect()
}

/// `ΦΔΔ_i = (1 − A²) |W_i|² / M`, the process-noise level that keeps the
/// first-order Markov model stationary.
pub fn estimate_process_psd(weights: &SpectralVector, a: f64, m: usize) -> Vec<f64> {
    let k = (1.0 - a * a) / m as f64;
    weights.iter().map(|w| k * w.norm_sqr()).collect()
}

/// One running filter instance.
#[derive(Debug, Clone)]
pub struct AdaptiveFilter {
    config: AlgorithmConfig,
    n: usize,
    transform: Transform,
    state: FilterState,
}

impl AdaptiveFilter {
    pub fn new(config: AlgorithmConfig, n: usize) -> Result<Self> {
        let state = FilterState::new(&config, n)?;
        Ok(Self {
            config,
            n,
            transform: Transform::new(2 * n)?,
            state,
        })
    }

    pub fn config(&self) -> &AlgorithmConfig {
        &self.config
    }

    pub fn variant(&self) -> Variant {
        self.config.variant
    }

    /// Filter length `N`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn frame_size(&self) -> usize {
        2 * self.n
    }

    pub fn transform(&self) -> &Transform {
        &self.transform
    }

    pub fn state(&self) -> &FilterState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut FilterState {
        &mut self.state
    }

    /// Spectrum of the current reference window.
    pub fn reference_spectrum(&self) -> Result<SpectralVector> {
        self.transform.dft(&self.state.x_history)
    }

    /// Compute the echo estimate and error for the current frame.
    pub fn filter_output(&self, x_spec: &SpectralVector, d_frame: &[f64]) -> Result<FilterOutput> {
        let n = self.n;
        ensure_len("desired frame", n, d_frame.len())?;
        let echo_spec = match self.config.variant {
            Variant::Mfkf1 => {
                let causal = self.transform.project_causal(&self.state.weights, n)?;
                x_spec.hadamard(&causal)
            }
            Variant::Fkf | Variant::Mfkf2 => x_spec.hadamard(&self.state.weights),
        };
        let echo = self.transform.idft(&echo_spec)?;
        let y_frame = echo[n..].to_vec();
        let e_frame: Vec<f64> = d_frame.iter().zip(&y_frame).map(|(d, y)| d - y).collect();
        let mut padded = vec![0.0; 2 * n];
        padded[n..].copy_from_slice(&e_frame);
        let error_spectrum = self.transform.dft(&padded)?;
        Ok(FilterOutput {
            y_frame,
            e_frame,
            error_spectrum,
        })
    }

    /// Steps the weight update applies per bin: `μ` itself, or `ξ` broadcast
    /// to every bin for MFKF2.
    pub fn applied_steps(&self, mu: &[f64]) -> Result<Vec<f64>> {
        match self.config.variant {
            Variant::Mfkf2 => Ok(vec![min_step(mu)?; mu.len()]),
            Variant::Fkf | Variant::Mfkf1 => Ok(mu.to_vec()),
        }
    }

    /// New frequency-domain weights for the given gradient inputs.
    ///
    /// `mu` is the per-bin Kalman step; MFKF2 reduces it to its minimum.
    pub fn update_weights(
        &self,
        x_spec: &SpectralVector,
        error_spectrum: &SpectralVector,
        mu: &[f64],
    ) -> Result<SpectralVector> {
        let n = self.n;
        let a = self.config.a;
        let gradient = x_spec.conj_hadamard(error_spectrum);
        let correction = match self.config.variant {
            Variant::Fkf => self.transform.project_causal(&gradient.scale_bins(mu), n)?,
            Variant::Mfkf1 => self.transform.project_causal(&gradient, n)?.scale_bins(mu),
            Variant::Mfkf2 => self.transform.project_causal(&gradient, n)?.scale(min_step(mu)?),
        };
        Ok(self.state.weights.add(&correction).scale(a).hermitian_part())
    }

    /// Run one frame: shift in `x_new`, filter `d_frame`, adapt.
    pub fn process_frame(&mut self, x_new: &[f64], d_frame: &[f64]) -> Result<FrameResult> {
        let n = self.n;
        let m = 2 * n;
        ensure_len("reference frame", n, x_new.len())?;
        ensure_finite("reference frame", x_new)?;
        ensure_finite("desired frame", d_frame)?;

        self.state.x_history.copy_within(n.., 0);
        self.state.x_history[n..].copy_from_slice(x_new);
        let x_spec = self.reference_spectrum()?;

        let out = self.filter_output(&x_spec, d_frame)?;
        let mu = step_size(
            &self.state.covariance,
            &x_spec,
            &self.state.phi_ss,
            m,
            self.config.denom_floor,
        );
        let weights = self.update_weights(&x_spec, &out.error_spectrum, &mu)?;
        let applied = self.applied_steps(&mu)?;
        let (covariance, clamped) = update_covariance(
            &self.state.covariance,
            &applied,
            &x_spec,
            self.config.a,
            &self.state.phi_dd,
            n,
            m,
        );

        self.state.weights = weights;
        self.state.covariance = covariance;
        self.state.clamp_count += clamped as u64;
        if let PsdMode::Estimated { lambda_s } = self.config.psd_mode {
            self.state.phi_ss =
                estimate_observation_psd(&out.error_spectrum, &self.state.phi_ss, lambda_s, m);
            self.state.phi_dd = estimate_process_psd(&self.state.weights, self.config.a, m);
        }
        self.state.frame_index += 1;

        Ok(FrameResult {
            e_frame: out.e_frame,
            y_frame: out.y_frame,
            mu: applied,
        })
    }

    /// Full length-`M` time-domain image of `W` (causal taps, then wraparound).
    pub fn time_domain_image(&self) -> Result<Vec<f64>> {
        Ok(self.transform.idft(&self.state.weights)?.into_inner())
    }

    /// The `N` causal time-domain taps that produce the output.
    pub fn time_domain_weights(&self) -> Result<Vec<f64>> {
        let mut taps = self.time_domain_image()?;
        taps.truncate(self.n);
        Ok(taps)
    }

    /// Load causal time-domain taps into `W = F [w, 0_N]`.
    pub fn set_time_domain_weights(&mut self, taps: &[f64]) -> Result<()> {
        ensure_len("time-domain weights", self.n, taps.len())?;
        let mut padded = vec![0.0; 2 * self.n];
        padded[..self.n].copy_from_slice(taps);
        self.state.weights = self.transform.dft(&padded)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rustfft::num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fixed(phi_ss: f64, phi_dd: f64) -> PsdMode {
        PsdMode::Fixed { phi_ss, phi_dd }
    }

    fn random_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
        (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn init_state_contract() {
        let cfg = AlgorithmConfig::new(Variant::Fkf).with_p_init(10.0);
        let st = FilterState::new(&cfg, 8).unwrap();
        assert_eq!(st.weights.len(), 16);
        assert!(st.weights.iter().all(|w| w.norm() == 0.0));
        assert_eq!(st.covariance, vec![10.0; 16]);
        assert_eq!(st.x_history, vec![0.0; 16]);

        let st = FilterState::new(&AlgorithmConfig::new(Variant::Mfkf2), 512).unwrap();
        assert_eq!(st.weights.len(), 1024);
        assert_eq!(st.covariance.len(), 1024);
    }

    #[test]
    fn init_rejects_bad_configs() {
        let base = AlgorithmConfig::new(Variant::Fkf);
        for cfg in [
            base.with_a(0.0),
            base.with_a(1.5),
            base.with_p_init(0.0),
            base.with_denom_floor(0.0),
            base.with_psd_mode(PsdMode::Estimated { lambda_s: 1.0 }),
            base.with_psd_mode(fixed(-1.0, 0.0)),
        ] {
            assert!(matches!(FilterState::new(&cfg, 8), Err(Error::InvalidConfig(_))), "{cfg:?}");
        }
        assert!(FilterState::new(&base, 0).is_err());
    }

    #[test]
    fn step_size_edge_cases() {
        let x = SpectralVector::new(vec![Complex64::new(1.0, 2.0); 4]).unwrap();
        let mu = step_size(&[0.0; 4], &x, &[0.3; 4], 4, 1e-10);
        assert!(mu.iter().all(|&m| m == 0.0));

        let mu = step_size(&[7.0; 4], &x, &[0.0; 4], 4, 1e-300);
        for m in mu {
            assert!((m - 0.2).abs() < 1e-15);
        }
    }

    #[test]
    fn min_step_examples() {
        assert_eq!(min_step(&[0.3, 0.1, 0.2, 0.1]).unwrap(), 0.1);
        assert_eq!(min_step(&[0.42; 5]).unwrap(), 0.42);
        assert!(matches!(min_step(&[]), Err(Error::Empty(_))));
    }

    #[test]
    fn covariance_examples() {
        let x = SpectralVector::new(vec![Complex64::new(2.0, 0.0); 4]).unwrap();
        let (p, clamped) = update_covariance(&[0.0; 4], &[0.1; 4], &x, 1.0, &[0.25; 4], 2, 4);
        assert_eq!(p, vec![1.0; 4]);
        assert_eq!(clamped, 0);

        // Full step μ|X|² = 1 halves P when M = 2N.
        let (p, _) = update_covariance(&[6.0; 4], &[0.25; 4], &x, 1.0, &[0.0; 4], 2, 4);
        for v in p {
            assert!((v - 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn covariance_clamp_is_counted() {
        let x = SpectralVector::new(vec![Complex64::new(10.0, 0.0); 2]).unwrap();
        let (p, clamped) = update_covariance(&[1.0, 1.0], &[1.0, 0.0], &x, 1.0, &[0.0; 2], 1, 2);
        assert_eq!(p, vec![0.0, 1.0]);
        assert_eq!(clamped, 1);
    }

    #[test]
    fn observation_psd_recursion() {
        let e = SpectralVector::new(vec![Complex64::new(3.0, 4.0); 8]).unwrap();
        let inst = estimate_observation_psd(&e, &[5.0; 8], 0.0, 8);
        assert_eq!(inst, vec![25.0 / 8.0; 8]);

        let mut phi = vec![0.0; 8];
        for _ in 0..500 {
            phi = estimate_observation_psd(&e, &phi, 0.9, 8);
        }
        for v in phi {
            assert!((v - 25.0 / 8.0).abs() < 1e-12);
        }
    }

    #[test]
    fn observation_psd_tracks_stationary_noise() {
        use rand_distr::{Distribution, StandardNormal};
        let n = 512;
        let sigma2: f64 = 0.3;
        let t = Transform::new(2 * n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut phi = vec![0.0; 2 * n];
        for _ in 0..200 {
            let mut block = vec![0.0; 2 * n];
            for v in &mut block[n..] {
                let g: f64 = StandardNormal.sample(&mut rng);
                *v = g * sigma2.sqrt();
            }
            let e = t.dft(&block).unwrap();
            phi = estimate_observation_psd(&e, &phi, 0.9, 2 * n);
        }
        // E|E_i|²/M for N white samples of variance σ² in an M-point frame.
        let truth = n as f64 * sigma2 / (2 * n) as f64;
        let mean = phi.iter().sum::<f64>() / phi.len() as f64;
        assert!((mean - truth).abs() < 0.1 * truth, "{mean} vs {truth}");
    }

    #[test]
    fn process_psd_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = SpectralVector::new(
            (0..8)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap();
        assert!(estimate_process_psd(&w, 1.0, 8).iter().all(|&v| v == 0.0));
        assert!(estimate_process_psd(&SpectralVector::zeros(8), 0.9, 8)
            .iter()
            .all(|&v| v == 0.0));
        let a: f64 = 0.999;
        for (v, wi) in estimate_process_psd(&w, a, 8).iter().zip(w.iter()) {
            let ratio = v / (wi.norm_sqr() / 8.0);
            assert!((ratio - (1.0 - a * a)).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_weights_pass_desired_through() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for variant in Variant::ALL {
            let mut f = AdaptiveFilter::new(AlgorithmConfig::new(variant), 8).unwrap();
            let x = random_vec(&mut rng, 8);
            f.state_mut().x_history[8..].copy_from_slice(&x);
            let xs = f.reference_spectrum().unwrap();
            let d = random_vec(&mut rng, 8);
            let out = f.filter_output(&xs, &d).unwrap();
            assert!(out.y_frame.iter().all(|y| y.abs() < 1e-15));
            for (e, d) in out.e_frame.iter().zip(&d) {
                assert!((e - d).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn output_matches_direct_convolution() {
        let n = 8;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for variant in Variant::ALL {
            let mut f = AdaptiveFilter::new(AlgorithmConfig::new(variant), n).unwrap();
            // Arbitrary real image including a nonzero wraparound half.
            let image = random_vec(&mut rng, 2 * n);
            f.state_mut().weights = f.transform().dft(&image).unwrap();
            f.state_mut().x_history = random_vec(&mut rng, 2 * n);
            let xs = f.reference_spectrum().unwrap();
            let d = random_vec(&mut rng, n);
            let out = f.filter_output(&xs, &d).unwrap();

            let hist = &f.state().x_history;
            for (j, y) in out.y_frame.iter().enumerate() {
                let t = n + j;
                let mut expected = 0.0;
                for (l, w) in image.iter().enumerate().take(n) {
                    expected += w * hist[t - l];
                }
                if variant != Variant::Mfkf1 {
                    // Unconstrained weights also pick up the circular wraparound.
                    for (l, w) in image.iter().enumerate().skip(n) {
                        expected += w * hist[(t + 2 * n - l) % (2 * n)];
                    }
                }
                assert!((y - expected).abs() < 1e-10, "{variant}: {y} vs {expected}");
                assert!((out.e_frame[j] - (d[j] - y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_model_gives_zero_error() {
        let n = 8;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let w_true = random_vec(&mut rng, n);
        let x = random_vec(&mut rng, 4 * n);
        for variant in Variant::ALL {
            let cfg = AlgorithmConfig::new(variant).with_psd_mode(fixed(0.0, 0.0));
            let mut f = AdaptiveFilter::new(cfg, n).unwrap();
            f.set_time_domain_weights(&w_true).unwrap();
            for k in 0..4 {
                let frame = &x[k * n..(k + 1) * n];
                let d: Vec<f64> = (0..n)
                    .map(|j| {
                        let t = k * n + j;
                        (0..n).filter(|&l| l <= t).map(|l| w_true[l] * x[t - l]).sum()
                    })
                    .collect();
                let r = f.process_frame(frame, &d).unwrap();
                assert!(r.e_frame.iter().all(|e| e.abs() < 1e-10), "{variant}");
            }
        }
    }

    #[test]
    fn zero_error_scales_weights_by_a() {
        let n = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for variant in Variant::ALL {
            let mut f = AdaptiveFilter::new(AlgorithmConfig::new(variant).with_a(0.9), n).unwrap();
            f.set_time_domain_weights(&random_vec(&mut rng, n)).unwrap();
            f.state_mut().x_history = random_vec(&mut rng, 2 * n);
            let xs = f.reference_spectrum().unwrap();
            let mu = vec![0.3; 2 * n];
            let w = f
                .update_weights(&xs, &SpectralVector::zeros(2 * n), &mu)
                .unwrap();
            assert!(w.max_abs_diff(&f.state().weights.scale(0.9)) < 1e-14);
        }
    }

    #[test]
    fn zero_step_keeps_weights() {
        let n = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for variant in Variant::ALL {
            let mut f = AdaptiveFilter::new(AlgorithmConfig::new(variant), n).unwrap();
            f.set_time_domain_weights(&random_vec(&mut rng, n)).unwrap();
            f.state_mut().x_history = random_vec(&mut rng, 2 * n);
            let xs = f.reference_spectrum().unwrap();
            let e = f.transform().dft(&random_vec(&mut rng, 2 * n)).unwrap();
            let w = f.update_weights(&xs, &e, &[0.0; 8]).unwrap();
            assert!(w.max_abs_diff(&f.state().weights) < 1e-14);
        }
    }

    #[test]
    fn silent_frame_is_a_fixed_point() {
        for variant in Variant::ALL {
            for mode in [PsdMode::default(), fixed(0.1, 0.0)] {
                let cfg = AlgorithmConfig::new(variant).with_psd_mode(mode);
                let mut f = AdaptiveFilter::new(cfg, 8).unwrap();
                let before = f.state().clone();
                f.process_frame(&[0.0; 8], &[0.0; 8]).unwrap();
                let after = f.state();
                assert_eq!(after.frame_index, 1);
                assert_eq!(after.weights, before.weights);
                assert_eq!(after.covariance, before.covariance);
                assert_eq!(after.phi_ss, before.phi_ss);
                assert_eq!(after.phi_dd, before.phi_dd);
            }
        }
    }

    #[test]
    fn process_frame_validates_lengths() {
        let mut f = AdaptiveFilter::new(AlgorithmConfig::new(Variant::Fkf), 4).unwrap();
        assert!(f.process_frame(&[0.0; 3], &[0.0; 4]).is_err());
        assert!(f.process_frame(&[0.0; 4], &[0.0; 5]).is_err());
        assert!(f.process_frame(&[f64::NAN, 0.0, 0.0, 0.0], &[0.0; 4]).is_err());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("MFKF1".parse::<Variant>().unwrap(), Variant::Mfkf1);
        assert_eq!("fkf".parse::<Variant>().unwrap(), Variant::Fkf);
        assert!("nlms".parse::<Variant>().is_err());
    }
}
