//! Scenario construction and execution across algorithms and ensemble seeds.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filter::{AdaptiveFilter, AlgorithmConfig, FrameResult, Variant};
use crate::oracle::{analytic_wiener, least_squares_fir};
use crate::sim::metrics::{ensemble_average, misalignment, ErleMeter, MetricsTrace};
use crate::sim::rir::synthetic_rir;
use crate::sim::source::{fir_filter, gaussian_noise, generate_source, seeded_rng, SourceSpec};

/// Base seed of the observation-noise process; the ensemble seed selects the stream.
pub const NOISE_BASE_SEED: u64 = 0x6e6f_6973_6521;

#[derive(Debug, Clone, PartialEq)]
pub enum SystemSpec {
    Taps(Vec<f64>),
    SyntheticRir {
        fs: f64,
        t60: f64,
        length: usize,
        seed: u64,
    },
}

impl SystemSpec {
    pub fn impulse_response(&self) -> Result<Vec<f64>> {
        match self {
            SystemSpec::Taps(taps) if taps.is_empty() => Err(Error::Empty("system taps")),
            SystemSpec::Taps(taps) => Ok(taps.clone()),
            SystemSpec::SyntheticRir {
                fs,
                t60,
                length,
                seed,
            } => synthetic_rir(*fs, *t60, *length, *seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub source: SourceSpec,
    pub system: SystemSpec,
    /// Adaptive filter length `N`; frames are `M = 2N` samples with shift `N`.
    pub n: usize,
    pub frames: usize,
    /// Sample rate used for the time axis (wav sources override it).
    pub fs: f64,
    /// Echo-to-noise ratio of the additive observation noise; `None` for none.
    pub snr_db: Option<f64>,
    pub algorithms: Vec<AlgorithmConfig>,
    pub seeds: Vec<u64>,
    pub erle_smoothing: f64,
}

pub const DEFAULT_FS: f64 = 16_000.0;
pub const DEFAULT_ERLE_SMOOTHING: f64 = 0.9;

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("filter length n must be positive".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Empty("algorithm list"));
        }
        if self.seeds.is_empty() {
            return Err(Error::Empty("seed list"));
        }
        if !(self.fs > 0.0 && self.fs.is_finite()) {
            return Err(Error::InvalidConfig(format!("fs must be positive, got {}", self.fs)));
        }
        if !(0.0..1.0).contains(&self.erle_smoothing) {
            return Err(Error::InvalidConfig(format!(
                "erle_smoothing must lie in [0, 1), got {}",
                self.erle_smoothing
            )));
        }
        if let Some(snr) = self.snr_db {
            if !snr.is_finite() {
                return Err(Error::InvalidConfig(format!("snr_db must be finite, got {snr}")));
            }
        }
        for alg in &self.algorithms {
            alg.validate()?;
        }
        Ok(())
    }

    /// Display label of each configured algorithm. The transition parameter is
    /// appended when the same variant appears with several values of `A`.
    pub fn labels(&self) -> Vec<String> {
        self.algorithms
            .iter()
            .map(|alg| {
                let ambiguous = self
                    .algorithms
                    .iter()
                    .any(|o| o.variant == alg.variant && o.a != alg.a);
                if ambiguous {
                    format!("{}[A={}]", alg.variant, alg.a)
                } else {
                    alg.variant.to_string()
                }
            })
            .collect()
    }
}

/// Reference, echo and microphone signals of one ensemble member.
#[derive(Debug, Clone, PartialEq)]
pub struct Streams {
    pub x: Vec<f64>,
    pub echo: Vec<f64>,
    pub d: Vec<f64>,
    pub fs: f64,
    /// Number of complete frames available.
    pub frames: usize,
}

pub fn prepare_streams(cfg: &ScenarioConfig, seed: u64) -> Result<Streams> {
    let n = cfg.n;
    let wanted = cfg.frames.saturating_mul(n);
    let (mut x, fs) = match &cfg.source {
        SourceSpec::Wav(path) => {
            let audio = crate::sim::source::read_wav(path)?;
            (audio.samples, f64::from(audio.sample_rate))
        }
        spec => (generate_source(spec, wanted, seed)?, cfg.fs),
    };
    // The trailing partial frame is dropped.
    let frames = cfg.frames.min(x.len() / n);
    x.truncate(frames * n);

    let h = cfg.system.impulse_response()?;
    let echo = fir_filter(&x, &h);
    let d = match cfg.snr_db {
        Some(snr) => {
            let power = echo.iter().map(|v| v * v).sum::<f64>() / echo.len().max(1) as f64;
            let variance = power / 10f64.powf(snr / 10.0);
            let noise = gaussian_noise(&mut seeded_rng(NOISE_BASE_SEED, seed), echo.len(), variance);
            echo.iter().zip(&noise).map(|(e, s)| e + s).collect()
        }
        None => echo.clone(),
    };
    Ok(Streams {
        x,
        echo,
        d,
        fs,
        frames,
    })
}

/// The length-`N` optimum the misalignment is measured against.
///
/// Synthetic Gaussian sources use the closed-form Wiener filter (a plain
/// truncation for white input); recorded sources use the least-squares
/// normal equations over the echo of the whole signal.
pub fn optimal_weights(cfg: &ScenarioConfig, streams: &Streams) -> Result<Vec<f64>> {
    let h = cfg.system.impulse_response()?;
    match &cfg.source {
        SourceSpec::White { variance, .. } => {
            let mut w: Vec<f64> = h.iter().copied().take(cfg.n).collect();
            w.resize(cfg.n, 0.0);
            if *variance == 0.0 {
                return Err(Error::InvalidConfig("white source with zero variance".into()));
            }
            Ok(w)
        }
        SourceSpec::FirColored { taps, .. } => analytic_wiener(taps, 1.0, &h, cfg.n),
        SourceSpec::Wav(_) => least_squares_fir(&streams.x, &streams.echo, cfg.n),
    }
}

/// One frame as seen by a [`run_filter`] observer.
pub struct FrameEvent<'a> {
    pub frame: usize,
    pub filter: &'a AdaptiveFilter,
    pub result: &'a FrameResult,
    /// Causal time-domain taps after the update.
    pub weights: &'a [f64],
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub variant: Variant,
    pub a: f64,
    pub trace: MetricsTrace,
    pub final_weights: Vec<f64>,
}

/// Run a single filter over `streams`, reporting every frame to `observer`.
pub fn run_filter<F>(
    cfg: &ScenarioConfig,
    alg: &AlgorithmConfig,
    label: &str,
    seed: u64,
    streams: &Streams,
    w_o: &[f64],
    mut observer: F,
) -> Result<RunOutcome>
where
    F: FnMut(&FrameEvent<'_>),
{
    let n = cfg.n;
    let mut filter = AdaptiveFilter::new(*alg, n)?;
    let mut erle = ErleMeter::new(cfg.erle_smoothing);
    let mut trace = MetricsTrace::new(label, Some(seed));
    let mut weights = vec![0.0; n];
    for k in 0..streams.frames {
        let span = k * n..(k + 1) * n;
        let d = &streams.d[span.clone()];
        let result = filter.process_frame(&streams.x[span], d)?;
        weights = filter.time_domain_weights()?;
        let m = misalignment(&weights, w_o)?;
        let e = erle.push(d, &result.e_frame);
        if !(m.is_finite() && e.is_finite()) {
            return Err(Error::DivergedRun {
                algorithm: label.to_string(),
                seed,
                frame: k,
            });
        }
        trace.push(k, m, e);
        observer(&FrameEvent {
            frame: k,
            filter: &filter,
            result: &result,
            weights: &weights,
        });
    }
    Ok(RunOutcome {
        variant: alg.variant,
        a: alg.a,
        trace,
        final_weights: weights,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub labels: Vec<String>,
    /// Misalignment reference `w_o`.
    pub optimal: Vec<f64>,
    pub fs: f64,
    pub n: usize,
    /// Ordered by algorithm, then by seed.
    pub runs: Vec<RunOutcome>,
}

impl ScenarioResult {
    pub fn runs_for<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a RunOutcome> + 'a {
        self.runs.iter().filter(move |r| r.trace.algorithm == label)
    }

    /// Linear-domain ensemble mean trace for one algorithm label.
    pub fn ensemble(&self, label: &str) -> Result<MetricsTrace> {
        let traces: Vec<MetricsTrace> = self.runs_for(label).map(|r| r.trace.clone()).collect();
        ensemble_average(&traces)
    }

    /// Seed-averaged final taps for one algorithm label.
    pub fn mean_final_weights(&self, label: &str) -> Vec<f64> {
        let mut acc = vec![0.0; self.n];
        let mut count = 0usize;
        for r in self.runs_for(label) {
            for (a, w) in acc.iter_mut().zip(&r.final_weights) {
                *a += w;
            }
            count += 1;
        }
        for a in &mut acc {
            *a /= count.max(1) as f64;
        }
        acc
    }
}

/// Run every (algorithm, seed) pair. Runs are independent and execute on
/// the current rayon pool; the result order is fixed.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    cfg.validate()?;
    let labels = cfg.labels();
    let first = prepare_streams(cfg, cfg.seeds[0])?;
    let optimal = optimal_weights(cfg, &first)?;
    let fs = first.fs;

    let per_seed: Vec<Vec<RunOutcome>> = cfg
        .seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| {
            let owned;
            let streams = if i == 0 {
                &first
            } else {
                owned = prepare_streams(cfg, seed)?;
                &owned
            };
            cfg.algorithms
                .iter()
                .zip(&labels)
                .map(|(alg, label)| run_filter(cfg, alg, label, seed, streams, &optimal, |_| {}))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut runs = Vec::with_capacity(cfg.algorithms.len() * cfg.seeds.len());
    for a in 0..cfg.algorithms.len() {
        for seed_runs in &per_seed {
            runs.push(seed_runs[a].clone());
        }
    }
    Ok(ScenarioResult {
        labels,
        optimal,
        fs,
        n: cfg.n,
        runs,
    })
}
