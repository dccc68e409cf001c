//! Time-domain equivalents of the three frequency-domain weight updates.
//!
//! With `X_C = [[C1, C2], [C2, C1]]` the reference circulant and
//! `M(k) = [[M1, M2], [M2, M1]]` the step circulant, one frame reads
//!
//! ```text
//! e  = d − C2ᵀ w
//! FKF:   w' = A w + A (M1 C2 + M2 C1) e
//! MFKF1: w' = A w + A M1 C2 e
//! MFKF2: w' = A (w + ξ C2 e)
//! ```

use nalgebra::{DMatrix, DVector};

use crate::error::{ensure_len, Result};
use crate::filter::Variant;
use crate::oracle::dense::CirculantPair;

#[derive(Debug, Clone, PartialEq)]
pub struct TimeDomainStep {
    pub weights: Vec<f64>,
    pub error: Vec<f64>,
}

/// One dense time-domain frame update.
pub fn td_step(
    variant: Variant,
    w: &[f64],
    d_frame: &[f64],
    x_blocks: &CirculantPair,
    m_blocks: &CirculantPair,
    a: f64,
    xi: f64,
) -> Result<TimeDomainStep> {
    let n = x_blocks.b1.nrows();
    ensure_len("time-domain weights", n, w.len())?;
    ensure_len("time-domain desired frame", n, d_frame.len())?;
    ensure_len("step circulant block", n, m_blocks.b1.nrows())?;

    let w = DVector::from_column_slice(w);
    let d = DVector::from_column_slice(d_frame);
    let c1 = &x_blocks.b1;
    let c2 = &x_blocks.b2;
    let e = d - c2.transpose() * &w;

    let next = match variant {
        Variant::Fkf => {
            let op: DMatrix<f64> = &m_blocks.b1 * c2 + &m_blocks.b2 * c1;
            (&w + op * &e) * a
        }
        Variant::Mfkf1 => (&w + &m_blocks.b1 * c2 * &e) * a,
        Variant::Mfkf2 => (&w + c2 * &e * xi) * a,
    };
    Ok(TimeDomainStep {
        weights: next.as_slice().to_vec(),
        error: e.as_slice().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dense::{reference_blocks, step_blocks};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
        (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    #[test]
    fn zero_error_and_zero_input_scale_by_a() {
        let n = 5;
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let w = rand_vec(&mut rng, n);
        let x = rand_vec(&mut rng, 2 * n);
        let xb = reference_blocks(&x).unwrap();
        let mb = step_blocks(&rand_vec(&mut rng, 2 * n).iter().map(|v| v.abs()).collect::<Vec<_>>())
            .unwrap();
        // d equal to the current prediction forces e = 0.
        let d: Vec<f64> = (xb.b2.transpose() * DVector::from_column_slice(&w))
            .as_slice()
            .to_vec();
        let zero_x = reference_blocks(&vec![0.0; 2 * n]).unwrap();
        for variant in Variant::ALL {
            let step = td_step(variant, &w, &d, &xb, &mb, 0.97, 0.2).unwrap();
            for (a, b) in step.weights.iter().zip(&w) {
                assert!((a - 0.97 * b).abs() < 1e-12);
            }
            let step = td_step(variant, &w, &rand_vec(&mut rng, n), &zero_x, &mb, 0.97, 0.2).unwrap();
            for (a, b) in step.weights.iter().zip(&w) {
                assert!((a - 0.97 * b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let xb = reference_blocks(&[0.0; 8]).unwrap();
        let mb = step_blocks(&[0.1; 8]).unwrap();
        assert!(td_step(Variant::Fkf, &[0.0; 3], &[0.0; 4], &xb, &mb, 1.0, 0.1).is_err());
        assert!(td_step(Variant::Fkf, &[0.0; 4], &[0.0; 5], &xb, &mb, 1.0, 0.1).is_err());
    }
}
