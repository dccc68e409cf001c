//! The three named experiment setups.

use std::path::PathBuf;

use crate::filter::{AlgorithmConfig, PsdMode, Variant, DEFAULT_LAMBDA_S};
use crate::sim::scenario::{ScenarioConfig, SystemSpec, DEFAULT_ERLE_SMOOTHING, DEFAULT_FS};
use crate::sim::source::{gaussian_noise, seeded_rng, SourceSpec};

/// Seed that produced [`COLORING_TAPS`].
pub const COLORING_SEED: u64 = 7;
/// Seed that produced [`SYSTEM_TAPS`].
pub const SYSTEM_SEED: u64 = 22;
/// Base seed of the white noise driving the colouring filter.
pub const SOURCE_SEED: u64 = 2024;

/// Unit-energy 4-tap colouring filter of the under-modeled setup.
pub const COLORING_TAPS: [f64; 4] = [
    -0.4182904680750627,
    -0.7463155345409962,
    0.47997413772515946,
    0.1940902736752202,
];
/// Unit-energy 16-tap unknown system of the under-modeled setup.
pub const SYSTEM_TAPS: [f64; 16] = [
    0.1404595414680558,
    -0.16354624953852703,
    0.17087464194668198,
    -0.3684309909517642,
    -0.4379763301077489,
    0.3481448415061772,
    -0.014796303800082452,
    -0.22128277320346454,
    -0.13880049776576897,
    0.07281935362828426,
    -0.4770027261883834,
    -0.2330956243835332,
    -0.11035068083838637,
    -0.17284552842913226,
    -0.17273007977004057,
    0.21920121609155085,
];

/// Observation-noise PSD assumed by the under-modeled presets. The echo is
/// noiseless, but a zero value lets single MFKF1 runs blow up during the
/// first frames, when the steps approach `1/|X_i|²`.
pub const UNDERMODELED_PHI_SS: f64 = 2.0;

pub const UNDERMODELED_N: usize = 10;
pub const UNDERMODELED_FRAMES: usize = 5000;
pub const ENSEMBLE_SEEDS: u64 = 20;
pub const TRANSITION_SWEEP: [f64; 3] = [0.99, 0.999, 1.0];

pub const SUFFICIENT_N: usize = 8;
pub const SUFFICIENT_FRAMES: usize = 2000;
/// Seed of the 8-tap system in the sufficient-length setup.
pub const SUFFICIENT_SYSTEM_SEED: u64 = 8;
/// PSD levels of the sufficient-length setup. `M Φss` stays small against
/// `|X_i|² P` so the early steps sit close to `1/|X_i|²`.
pub const SUFFICIENT_PHI_SS: f64 = 0.1;
pub const SUFFICIENT_PHI_DD: f64 = 1e-6;

pub const AEC_N: usize = 512;
pub const AEC_T60: f64 = 0.6;
pub const AEC_RIR_LENGTH: usize = 8192;
pub const AEC_RIR_SEED: u64 = 7;

/// Bundled speech-like recording used by the AEC preset.
pub const BUNDLED_SPEECH_WAV: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/speech16k.wav");

/// Unit-energy Gaussian taps from a fixed seed; source of the golden fixtures.
pub fn seeded_unit_taps(seed: u64, len: usize) -> Vec<f64> {
    let mut taps = gaussian_noise(&mut seeded_rng(seed, 0), len, 1.0);
    let norm = taps.iter().map(|v| v * v).sum::<f64>().sqrt();
    for t in &mut taps {
        *t /= norm;
    }
    taps
}

fn estimated(variant: Variant, a: f64) -> AlgorithmConfig {
    AlgorithmConfig::new(variant)
        .with_a(a)
        .with_psd_mode(PsdMode::Estimated {
            lambda_s: DEFAULT_LAMBDA_S,
        })
}

// The process-noise PSD keeps a unit-energy system stationary under the
// state model: E|W_i|² stays at ‖w‖² = 1 when A < 1.
fn fixed(variant: Variant, a: f64) -> AlgorithmConfig {
    AlgorithmConfig::new(variant)
        .with_a(a)
        .with_psd_mode(PsdMode::Fixed {
            phi_ss: UNDERMODELED_PHI_SS,
            phi_dd: (1.0 - a * a) / (2 * UNDERMODELED_N) as f64,
        })
}

fn undermodeled(algorithms: Vec<AlgorithmConfig>) -> ScenarioConfig {
    ScenarioConfig {
        source: SourceSpec::FirColored {
            seed: SOURCE_SEED,
            taps: COLORING_TAPS.to_vec(),
        },
        system: SystemSpec::Taps(SYSTEM_TAPS.to_vec()),
        n: UNDERMODELED_N,
        frames: UNDERMODELED_FRAMES,
        fs: DEFAULT_FS,
        snr_db: None,
        algorithms,
        seeds: (1..=ENSEMBLE_SEEDS).collect(),
        erle_smoothing: DEFAULT_ERLE_SMOOTHING,
    }
}

/// FKF, MFKF1 and MFKF2 on coloured noise with a 16-tap system and `N = 10`.
pub fn fig1() -> ScenarioConfig {
    undermodeled(Variant::ALL.iter().map(|&v| fixed(v, 1.0)).collect())
}

/// The standard FKF at `A = 1` against MFKF1 over the transition sweep.
pub fn fig2() -> ScenarioConfig {
    let mut algorithms = vec![fixed(Variant::Fkf, 1.0)];
    algorithms.extend(TRANSITION_SWEEP.iter().map(|&a| fixed(Variant::Mfkf1, a)));
    undermodeled(algorithms)
}

/// White unit-variance input, an 8-tap system and `N = 8`: the filter can
/// match the system exactly.
pub fn sufficient_length(seeds: Vec<u64>) -> ScenarioConfig {
    let config = |v| {
        AlgorithmConfig::new(v).with_psd_mode(PsdMode::Fixed {
            phi_ss: SUFFICIENT_PHI_SS,
            phi_dd: SUFFICIENT_PHI_DD,
        })
    };
    ScenarioConfig {
        source: SourceSpec::White {
            seed: SOURCE_SEED,
            variance: 1.0,
        },
        system: SystemSpec::Taps(seeded_unit_taps(SUFFICIENT_SYSTEM_SEED, SUFFICIENT_N)),
        n: SUFFICIENT_N,
        frames: SUFFICIENT_FRAMES,
        fs: DEFAULT_FS,
        snr_db: None,
        algorithms: Variant::ALL.iter().map(|&v| config(v)).collect(),
        seeds,
        erle_smoothing: DEFAULT_ERLE_SMOOTHING,
    }
}

/// Echo cancellation of the bundled speech through a synthetic room.
pub fn fig3() -> ScenarioConfig {
    ScenarioConfig {
        source: SourceSpec::Wav(PathBuf::from(BUNDLED_SPEECH_WAV)),
        system: SystemSpec::SyntheticRir {
            fs: DEFAULT_FS,
            t60: AEC_T60,
            length: AEC_RIR_LENGTH,
            seed: AEC_RIR_SEED,
        },
        n: AEC_N,
        frames: usize::MAX,
        fs: DEFAULT_FS,
        snr_db: None,
        algorithms: Variant::ALL.iter().map(|&v| estimated(v, 1.0)).collect(),
        seeds: vec![1],
        erle_smoothing: DEFAULT_ERLE_SMOOTHING,
    }
}

pub fn by_name(name: &str) -> Option<ScenarioConfig> {
    match name {
        "fig1" => Some(fig1()),
        "fig2" => Some(fig2()),
        "fig3" => Some(fig3()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_taps_regenerate_from_seeds() {
        assert_eq!(seeded_unit_taps(COLORING_SEED, 4), COLORING_TAPS);
        assert_eq!(seeded_unit_taps(SYSTEM_SEED, 16), SYSTEM_TAPS);
    }

    #[test]
    fn presets_validate() {
        for name in ["fig1", "fig2", "fig3"] {
            by_name(name).unwrap().validate().unwrap();
        }
        assert!(by_name("fig4").is_none());
        assert_eq!(fig1().labels(), ["FKF", "MFKF1", "MFKF2"]);
        assert_eq!(fig2().labels(), ["FKF", "MFKF1[A=0.99]", "MFKF1[A=0.999]", "MFKF1[A=1]"]);
    }
}
