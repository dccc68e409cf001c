//! Synthetic room impulse responses: seeded Gaussian noise under an
//! exponential envelope that falls by 60 dB over the reverberation time.

use crate::error::{Error, Result};
use crate::sim::source::{gaussian_noise, seeded_rng};

/// Amplitude envelope `exp(−n · 3 ln 10 / (t60 · fs))`.
pub fn rir_envelope(n: usize, fs: f64, t60: f64) -> f64 {
    (-(n as f64) * 3.0 * std::f64::consts::LN_10 / (t60 * fs)).exp()
}

/// Unit-energy exponentially decaying noise response of `length` taps.
pub fn synthetic_rir(fs: f64, t60: f64, length: usize, seed: u64) -> Result<Vec<f64>> {
    if !(fs > 0.0 && fs.is_finite() && t60 > 0.0 && t60.is_finite()) || length == 0 {
        return Err(Error::InvalidConfig(format!(
            "synthetic RIR needs fs > 0, t60 > 0 and length >= 1 (got fs={fs}, t60={t60}, length={length})"
        )));
    }
    let mut h = gaussian_noise(&mut seeded_rng(seed, 0), length, 1.0);
    for (n, v) in h.iter_mut().enumerate() {
        *v *= rir_envelope(n, fs, t60);
    }
    let energy = h.iter().map(|v| v * v).sum::<f64>().sqrt();
    if energy == 0.0 {
        return Err(Error::ZeroReference);
    }
    for v in &mut h {
        *v /= energy;
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_drops_sixty_db_over_t60() {
        let ratio = rir_envelope(9600, 16_000.0, 0.6) / rir_envelope(0, 16_000.0, 0.6);
        assert!((ratio - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn unit_energy() {
        let h = synthetic_rir(16_000.0, 0.3, 2048, 4).unwrap();
        let e: f64 = h.iter().map(|v| v * v).sum();
        assert!((e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(synthetic_rir(0.0, 0.6, 10, 1).is_err());
        assert!(synthetic_rir(16_000.0, -1.0, 10, 1).is_err());
        assert!(synthetic_rir(16_000.0, 0.6, 0, 1).is_err());
    }

    // Schroeder backward integration, fitted between −5 and −35 dB.
    #[test]
    fn schroeder_decay_slope() {
        let fs = 16_000.0;
        let h = synthetic_rir(fs, 0.6, 8192, 3).unwrap();
        let mut edc = vec![0.0; h.len()];
        let mut acc = 0.0;
        for (i, v) in h.iter().enumerate().rev() {
            acc += v * v;
            edc[i] = acc;
        }
        let db: Vec<f64> = edc.iter().map(|e| 10.0 * (e / edc[0]).log10()).collect();
        let pts: Vec<(f64, f64)> = db
            .iter()
            .enumerate()
            .filter(|(_, &v)| (-35.0..=-5.0).contains(&v))
            .map(|(i, &v)| (i as f64 / fs, v))
            .collect();
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        assert!((slope + 100.0).abs() < 10.0, "slope {slope} dB/s");
    }
}
