//! Reference signal sources.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpec {
    /// I.i.d. Gaussian noise.
    White { seed: u64, variance: f64 },
    /// Unit-variance white noise through an FIR colouring filter.
    FirColored { seed: u64, taps: Vec<f64> },
    /// 16-bit PCM mono file.
    Wav(PathBuf),
}

impl SourceSpec {
    /// Whether the signal depends on the ensemble seed.
    pub fn is_random(&self) -> bool {
        !matches!(self, SourceSpec::Wav(_))
    }
}

/// Decoded wav samples normalized to `[−1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavAudio {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

pub fn read_wav(path: &Path) -> Result<WavAudio> {
    let wav_err = |reason: String| Error::Wav {
        path: path.to_path_buf(),
        reason,
    };
    let mut reader = hound::WavReader::open(path).map_err(|e| wav_err(e.to_string()))?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(wav_err(format!("expected mono, found {} channels", spec.channels)));
    }
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(wav_err(format!(
            "expected 16-bit signed PCM, found {:?} with {} bits",
            spec.sample_format, spec.bits_per_sample
        )));
    }
    let samples = reader
        .samples::<i16>()
        .map(|s| s.map(|v| f64::from(v) / 32768.0))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| wav_err(e.to_string()))?;
    Ok(WavAudio {
        samples,
        sample_rate: spec.sample_rate,
    })
}

/// Write 16-bit mono PCM, clipping to the representable range.
pub fn write_wav(path: &Path, samples: &[f64], sample_rate: u32) -> Result<()> {
    let wav_err = |e: hound::Error| Error::Wav {
        path: path.to_path_buf(),
        reason: e.to_string(),
    };
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(wav_err)?;
    for &s in samples {
        let v = (s * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
        writer.write_sample(v).map_err(wav_err)?;
    }
    writer.finalize().map_err(wav_err)
}

/// Seeded generator for one ensemble member: `base` picks the process,
/// `stream` the independent realization.
pub fn seeded_rng(base: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(stream);
    rng
}

pub fn gaussian_noise(rng: &mut ChaCha8Rng, len: usize, variance: f64) -> Vec<f64> {
    let sd = variance.sqrt();
    (0..len)
        .map(|_| {
            let g: f64 = StandardNormal.sample(rng);
            g * sd
        })
        .collect()
}

/// Generate `len` samples of `spec` for ensemble member `stream`.
///
/// Wav sources ignore `stream` and return at most `len` samples.
pub fn generate_source(spec: &SourceSpec, len: usize, stream: u64) -> Result<Vec<f64>> {
    match spec {
        SourceSpec::White { seed, variance } => {
            if !(*variance >= 0.0 && variance.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "white source variance must be nonnegative, got {variance}"
                )));
            }
            Ok(gaussian_noise(&mut seeded_rng(*seed, stream), len, *variance))
        }
        SourceSpec::FirColored { seed, taps } => {
            if taps.is_empty() {
                return Err(Error::Empty("colouring filter"));
            }
            let white = gaussian_noise(&mut seeded_rng(*seed, stream), len, 1.0);
            Ok(fir_filter(&white, taps))
        }
        SourceSpec::Wav(path) => {
            let mut audio = read_wav(path)?.samples;
            audio.truncate(len);
            Ok(audio)
        }
    }
}

/// Causal FIR filtering with zero initial state; output has `x.len()` samples.
pub fn fir_filter(x: &[f64], taps: &[f64]) -> Vec<f64> {
    if taps.len() <= 64 || x.len() <= 64 {
        return (0..x.len())
            .map(|t| {
                taps.iter()
                    .take(t + 1)
                    .enumerate()
                    .map(|(l, h)| h * x[t - l])
                    .sum()
            })
            .collect();
    }
    let size = (x.len() + taps.len() - 1).next_power_of_two();
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);
    let pad = |v: &[f64]| {
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for (b, &s) in buf.iter_mut().zip(v) {
            b.re = s;
        }
        buf
    };
    let mut a = pad(x);
    let mut b = pad(taps);
    forward.process(&mut a);
    forward.process(&mut b);
    for (p, q) in a.iter_mut().zip(&b) {
        *p *= q;
    }
    inverse.process(&mut a);
    let scale = 1.0 / size as f64;
    a[..x.len()].iter().map(|z| z.re * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_variance() {
        let x = generate_source(&SourceSpec::White { seed: 1, variance: 1.0 }, 100_000, 0).unwrap();
        let var = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        assert!((var - 1.0).abs() < 0.02, "{var}");
    }

    #[test]
    fn identity_colouring_equals_white() {
        let white = generate_source(&SourceSpec::White { seed: 9, variance: 1.0 }, 1000, 3).unwrap();
        let coloured = generate_source(
            &SourceSpec::FirColored {
                seed: 9,
                taps: vec![1.0, 0.0, 0.0, 0.0],
            },
            1000,
            3,
        )
        .unwrap();
        assert_eq!(white, coloured);
    }

    #[test]
    fn streams_are_independent_and_reproducible() {
        let spec = SourceSpec::White { seed: 5, variance: 1.0 };
        let a = generate_source(&spec, 64, 0).unwrap();
        let b = generate_source(&spec, 64, 1).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, generate_source(&spec, 64, 0).unwrap());
    }

    #[test]
    fn fft_filter_matches_direct() {
        let x = generate_source(&SourceSpec::White { seed: 2, variance: 1.0 }, 3000, 0).unwrap();
        let h = generate_source(&SourceSpec::White { seed: 3, variance: 0.1 }, 300, 0).unwrap();
        let fast = fir_filter(&x, &h);
        for t in [0usize, 1, 299, 300, 1500, 2999] {
            let direct: f64 = (0..=t.min(299)).map(|l| h[l] * x[t - l]).sum();
            assert!((fast[t] - direct).abs() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn wav_roundtrip_and_rejections() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.wav");
        let samples = [0.0, 0.5, -0.5, -1.0, 0.25];
        write_wav(&path, &samples, 16_000).unwrap();
        let audio = read_wav(&path).unwrap();
        assert_eq!(audio.sample_rate, 16_000);
        assert_eq!(audio.samples, samples);
        let spec = SourceSpec::Wav(path.clone());
        assert_eq!(generate_source(&spec, 3, 7).unwrap(), &samples[..3]);

        let stereo = dir.path().join("s.wav");
        let mut w = hound::WavWriter::create(
            &stereo,
            hound::WavSpec {
                channels: 2,
                sample_rate: 8000,
                bits_per_sample: 16,
                sample_format: hound::SampleFormat::Int,
            },
        )
        .unwrap();
        w.write_sample(0i16).unwrap();
        w.write_sample(0i16).unwrap();
        w.finalize().unwrap();
        assert!(matches!(read_wav(&stereo), Err(Error::Wav { .. })));

        let float = dir.path().join("f.wav");
        let mut w = hound::WavWriter::create(
            &float,
            hound::WavSpec {
                channels: 1,
                sample_rate: 8000,
                bits_per_sample: 32,
                sample_format: hound::SampleFormat::Float,
            },
        )
        .unwrap();
        w.write_sample(0.5f32).unwrap();
        w.finalize().unwrap();
        assert!(matches!(read_wav(&float), Err(Error::Wav { .. })));

        assert!(read_wav(&dir.path().join("missing.wav")).is_err());
    }
}
