//! Early-stage mean contraction factors of the two modified filters.

use crate::error::{Error, Result};

/// Per-frame contraction `1 − (N/M)²` of the mean coefficient error of MFKF1.
pub fn contraction_mfkf1(n: usize, m: usize) -> f64 {
    let ratio = n as f64 / m as f64;
    1.0 - ratio * ratio
}

/// Per-bin contraction `1 − (N/M)² Φ_i / max_j Φ_j` of MFKF2, given the
/// reference PSD on the DFT grid.
pub fn contraction_mfkf2(psd: &[f64], n: usize, m: usize) -> Result<Vec<f64>> {
    if psd.is_empty() {
        return Err(Error::Empty("reference PSD"));
    }
    if let Some(index) = psd.iter().position(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::NonFinite {
            context: "reference PSD",
            index,
        });
    }
    let peak = psd.iter().copied().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Err(Error::ZeroSpectrum);
    }
    let ratio = n as f64 / m as f64;
    Ok(psd.iter().map(|p| 1.0 - ratio * ratio * p / peak).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mfkf1_factor() {
        assert_eq!(contraction_mfkf1(10, 20), 0.75);
        assert_eq!(contraction_mfkf1(512, 1024), 0.75);
    }

    #[test]
    fn mfkf2_factors() {
        assert_eq!(contraction_mfkf2(&[2.5; 8], 4, 8).unwrap(), vec![0.75; 8]);
        let f = contraction_mfkf2(&[4.0, 1.0, 4.0, 1.0], 2, 4).unwrap();
        assert_eq!(f, vec![0.75, 0.9375, 0.75, 0.9375]);
        assert!(matches!(contraction_mfkf2(&[0.0; 4], 2, 4), Err(Error::ZeroSpectrum)));
        assert!(contraction_mfkf2(&[], 2, 4).is_err());
    }
}
