//! Deterministic speech-like test signal: voiced syllables built from a
//! glottal pulse train through formant resonators, short fricative bursts,
//! pauses, and a low background noise floor.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::sim::source::seeded_rng;

// (F1, F2, F3) in Hz for a handful of vowels.
const VOWELS: [(f64, f64, f64); 6] = [
    (730.0, 1090.0, 2440.0),
    (270.0, 2290.0, 3010.0),
    (530.0, 1840.0, 2480.0),
    (570.0, 840.0, 2410.0),
    (300.0, 870.0, 2240.0),
    (660.0, 1720.0, 2410.0),
];

/// Two-pole resonator with unit peak gain.
struct Resonator {
    a1: f64,
    a2: f64,
    gain: f64,
    y1: f64,
    y2: f64,
}

impl Resonator {
    fn new(freq: f64, bandwidth: f64, fs: f64) -> Self {
        let r = (-PI * bandwidth / fs).exp();
        let theta = 2.0 * PI * freq / fs;
        Self {
            a1: 2.0 * r * theta.cos(),
            a2: -r * r,
            gain: 1.0 - r,
            y1: 0.0,
            y2: 0.0,
        }
    }

    fn tick(&mut self, x: f64) -> f64 {
        let y = self.gain * x + self.a1 * self.y1 + self.a2 * self.y2;
        self.y2 = self.y1;
        self.y1 = y;
        y
    }
}

fn raised_cosine(pos: usize, len: usize, ramp: usize) -> f64 {
    let ramp = ramp.min(len / 2).max(1);
    if pos < ramp {
        0.5 - 0.5 * (PI * pos as f64 / ramp as f64).cos()
    } else if pos + ramp >= len {
        0.5 - 0.5 * (PI * (len - pos) as f64 / ramp as f64).cos()
    } else {
        1.0
    }
}

/// `seconds` of speech-like audio at `fs`, peak-normalized to 0.7.
pub fn speech_like(fs: f64, seconds: f64, seed: u64) -> Vec<f64> {
    let len = (fs * seconds) as usize;
    let mut rng = seeded_rng(seed, 0);
    let mut out = vec![0.0; len];
    let mut t = (0.2 * fs) as usize;

    while t < len {
        let voiced = rng.random_bool(0.8);
        let dur = if voiced {
            rng.random_range(0.12..0.30)
        } else {
            rng.random_range(0.05..0.12)
        };
        let seg = ((dur * fs) as usize).min(len - t);
        let level = rng.random_range(0.4..1.0);
        if voiced {
            let (f1, f2, f3) = VOWELS[rng.random_range(0..VOWELS.len())];
            let mut formants = [
                Resonator::new(f1, 80.0, fs),
                Resonator::new(f2, 100.0, fs),
                Resonator::new(f3, 140.0, fs),
            ];
            let f0_start = rng.random_range(95.0..210.0);
            let f0_end = f0_start * rng.random_range(0.8..1.1);
            let mut phase = 0.0;
            let mut glottal = 0.0;
            for i in 0..seg {
                let f0 = f0_start + (f0_end - f0_start) * i as f64 / seg as f64;
                phase += f0 / fs;
                let pulse = if phase >= 1.0 {
                    phase -= 1.0;
                    1.0
                } else {
                    0.0
                };
                // One-pole low-pass gives the glottal spectral tilt.
                glottal = 0.96 * glottal + pulse;
                let aspiration: f64 = StandardNormal.sample(&mut rng);
                let src = glottal + 0.02 * aspiration;
                let y = 1.0 * formants[0].tick(src)
                    + 0.5 * formants[1].tick(src)
                    + 0.25 * formants[2].tick(src);
                out[t + i] += level * raised_cosine(i, seg, (0.02 * fs) as usize) * y;
            }
        } else {
            let mut hiss = Resonator::new(rng.random_range(3500.0..6000.0), 1500.0, fs);
            for i in 0..seg {
                let g: f64 = StandardNormal.sample(&mut rng);
                out[t + i] += 0.3 * level * raised_cosine(i, seg, (0.01 * fs) as usize) * hiss.tick(g);
            }
        }
        t += seg;
        let gap = if rng.random_bool(0.15) {
            rng.random_range(0.25..0.6)
        } else {
            rng.random_range(0.02..0.08)
        };
        t += (gap * fs) as usize;
    }

    let peak = out.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = if peak > 0.0 { 0.7 / peak } else { 1.0 };
    for v in &mut out {
        let floor: f64 = StandardNormal.sample(&mut rng);
        *v = *v * scale + 3e-4 * floor;
    }
    out
}
