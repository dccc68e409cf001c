//! Dense linear solves: Wiener solution and the FKF steady-state prediction.

use nalgebra::{DMatrix, DVector};

use crate::error::{ensure_len, Error, Result};
use crate::oracle::correlation::CorrelationSet;

/// Condition-number ceiling above which a solve is refused.
pub const MAX_CONDITION: f64 = 1e12;

/// Solve `A x = b` by partial-pivot LU, rejecting systems whose 1-norm
/// condition number exceeds [`MAX_CONDITION`].
pub fn solve_checked(a: &DMatrix<f64>, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.nrows();
    ensure_len("linear system right-hand side", n, b.len())?;
    if a.ncols() != n {
        return Err(Error::InvalidConfig(format!(
            "linear system matrix must be square, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let lu = a.clone().lu();
    let inv = lu.try_inverse().ok_or(Error::IllConditioned {
        condition: f64::INFINITY,
    })?;
    let condition = one_norm(a) * one_norm(&inv);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::IllConditioned { condition });
    }
    let x = lu
        .solve(&DVector::from_column_slice(b))
        .ok_or(Error::IllConditioned { condition })?;
    Ok(x.as_slice().to_vec())
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Wiener solution `w = R_x⁻¹ r_xd`.
pub fn wiener(r_x: &DMatrix<f64>, r_xd: &[f64]) -> Result<Vec<f64>> {
    solve_checked(r_x, r_xd)
}

/// Mean steady-state FKF weights
/// `A [(1 − A) I + A Λ1 R + A Λ2 R̂]⁻¹ (Λ1 r + Λ2 r̂)`.
pub fn fkf_steady_state(c: &CorrelationSet, a: f64) -> Result<Vec<f64>> {
    let (l1, l2) = match (&c.lambda1, &c.lambda2) {
        (Some(l1), Some(l2)) => (l1, l2),
        _ => {
            return Err(Error::InvalidConfig(
                "steady-state prediction needs step-size block means".into(),
            ))
        }
    };
    let n = c.r.nrows();
    let system = DMatrix::<f64>::identity(n, n) * (1.0 - a) + (l1 * &c.r + l2 * &c.r_hat) * a;
    let rhs = (l1 * DVector::from_column_slice(&c.r_vec)
        + l2 * DVector::from_column_slice(&c.r_hat_vec))
        * a;
    solve_checked(&system, rhs.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let w = wiener(&DMatrix::identity(3, 3), &[0.5, -2.0, 1.25]).unwrap();
        assert_eq!(w, vec![0.5, -2.0, 1.25]);
    }

    #[test]
    fn singular_and_ill_conditioned_rejected() {
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(
            wiener(&singular, &[1.0, 1.0]),
            Err(Error::IllConditioned { .. })
        ));
        let ill = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-14]);
        assert!(matches!(wiener(&ill, &[1.0, 1.0]), Err(Error::IllConditioned { .. })));
        assert!(wiener(&DMatrix::identity(2, 2), &[1.0]).is_err());
    }

    #[test]
    fn steady_state_needs_step_blocks() {
        let c = CorrelationSet {
            r: DMatrix::identity(2, 2),
            r_hat: DMatrix::zeros(2, 2),
            r_vec: vec![1.0, 0.0],
            r_hat_vec: vec![0.0, 0.0],
            lambda1: None,
            lambda2: None,
            frames: 1,
        };
        assert!(fkf_steady_state(&c, 1.0).is_err());
    }

    #[test]
    fn steady_state_without_cross_term_is_wiener() {
        let r = DMatrix::from_row_slice(3, 3, &[3.0, 1.0, 0.2, 1.0, 3.0, 1.0, 0.2, 1.0, 3.0]);
        let r_vec = vec![1.0, -0.5, 2.0];
        let c = CorrelationSet {
            r: r.clone(),
            r_hat: DMatrix::from_element(3, 3, 0.7),
            r_vec: r_vec.clone(),
            r_hat_vec: vec![0.3, 0.3, 0.3],
            lambda1: Some(DMatrix::from_row_slice(3, 3, &[0.3, 0.1, 0.0, 0.1, 0.3, 0.1, 0.0, 0.1, 0.3])),
            lambda2: Some(DMatrix::zeros(3, 3)),
            frames: 1,
        };
        let ss = fkf_steady_state(&c, 1.0).unwrap();
        let w = wiener(&r, &r_vec).unwrap();
        for (a, b) in ss.iter().zip(&w) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
