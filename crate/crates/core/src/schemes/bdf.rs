use crate::error::{Error, Result};

fn check_order(m: usize) -> Result<()> {
    if m == 1 || m == 2 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("time order must be 1 or 2, got {m}")))
    }
}

/// Leading BDF coefficient `c_m` such that `D_m φᵏ⁺¹ = (c_m φᵏ⁺¹ - history)/τ`.
pub fn bdf_leading(m: usize) -> f64 {
    if m == 2 {
        1.5
    } else {
        1.0
    }
}

/// `β = 1 + (m - 1)/2`.
pub fn beta(m: usize) -> f64 {
    1.0 + 0.5 * (m as f64 - 1.0)
}

/// Backward difference `D_m φᵏ⁺¹`.
pub fn bdf_apply(m: usize, next: &[f64], cur: &[f64], prev: Option<&[f64]>, tau: f64) -> Result<Vec<f64>> {
    check_order(m)?;
    if next.len() != cur.len() {
        return Err(Error::DimensionMismatch {
            expected: next.len(),
            found: cur.len(),
        });
    }
    if m == 1 {
        return Ok(next.iter().zip(cur).map(|(a, b)| (a - b) / tau).collect());
    }
    let prev = prev.ok_or_else(|| Error::InvalidArgument("second-order difference needs φᵏ⁻¹".into()))?;
    if prev.len() != cur.len() {
        return Err(Error::DimensionMismatch {
            expected: cur.len(),
            found: prev.len(),
        });
    }
    Ok(next
        .iter()
        .zip(cur)
        .zip(prev)
        .map(|((a, b), c)| (3.0 * a - 4.0 * b + c) / (2.0 * tau))
        .collect())
}

/// The history part of `τ D_m φᵏ⁺¹`, i.e. `φᵏ` (m=1) or `(4φᵏ - φᵏ⁻¹)/2` (m=2).
pub(crate) fn bdf_history(m: usize, cur: &[f64], prev: &[f64]) -> Vec<f64> {
    if m == 1 {
        cur.to_vec()
    } else {
        cur.iter().zip(prev).map(|(a, b)| 0.5 * (4.0 * a - b)).collect()
    }
}

/// Extrapolated increment `φ^{♯,k}`.
pub fn extrapolate_sharp(m: usize, delta_cur: &[f64], delta_prev: Option<&[f64]>) -> Result<Vec<f64>> {
    check_order(m)?;
    if m == 1 {
        return Ok(delta_cur.to_vec());
    }
    let prev = delta_prev.ok_or_else(|| Error::InvalidArgument("second-order extrapolation needs δφᵏ⁻¹".into()))?;
    if prev.len() != delta_cur.len() {
        return Err(Error::DimensionMismatch {
            expected: delta_cur.len(),
            found: prev.len(),
        });
    }
    Ok(delta_cur
        .iter()
        .zip(prev)
        .map(|(a, b)| (4.0 * a - b) / 3.0)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_have_zero_derivative() {
        for m in [1, 2] {
            let d = bdf_apply(m, &[2.0], &[2.0], Some(&[2.0]), 0.1).unwrap();
            assert_eq!(d, vec![0.0]);
        }
    }

    #[test]
    fn linear_is_exact() {
        let tau = 0.25;
        let t = 1.0;
        for m in [1, 2] {
            let d = bdf_apply(m, &[t], &[t - tau], Some(&[t - 2.0 * tau]), tau).unwrap();
            assert!((d[0] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn quadratic() {
        let tau: f64 = 0.1;
        let f = |t: f64| t * t;
        let d2 = bdf_apply(2, &[f(1.0)], &[f(0.9)], Some(&[f(0.8)]), tau).unwrap();
        assert!((d2[0] - 2.0).abs() < 1e-12);
        let d1 = bdf_apply(1, &[f(1.0)], &[f(0.9)], None, tau).unwrap();
        assert!((d1[0] - 1.9).abs() < 1e-12);
    }

    #[test]
    fn missing_history() {
        assert!(bdf_apply(2, &[1.0], &[1.0], None, 0.1).is_err());
        assert!(extrapolate_sharp(2, &[1.0], None).is_err());
        assert!(bdf_apply(3, &[1.0], &[1.0], None, 0.1).is_err());
    }

    #[test]
    fn sharp_values() {
        assert_eq!(extrapolate_sharp(1, &[5.0], None).unwrap(), vec![5.0]);
        assert_eq!(extrapolate_sharp(2, &[0.0], Some(&[0.0])).unwrap(), vec![0.0]);
        let c = extrapolate_sharp(2, &[0.7], Some(&[0.7])).unwrap();
        assert!((c[0] - 0.7).abs() < 1e-15);
        let v = extrapolate_sharp(2, &[3.0], Some(&[0.75])).unwrap();
        assert!((v[0] - 3.75).abs() < 1e-15);
    }

    #[test]
    fn history_matches_definition() {
        let (next, cur, prev, tau) = ([1.3], [0.4], [-0.2], 0.2);
        for m in [1, 2] {
            let h = bdf_history(m, &cur, &prev);
            let d = (bdf_leading(m) * next[0] - h[0]) / tau;
            let direct = bdf_apply(m, &next, &cur, Some(&prev), tau).unwrap()[0];
            assert!((d - direct).abs() < 1e-13);
        }
    }

    // one-step residual of D_m on t³ scales like τ^m
    #[test]
    fn truncation_order() {
        let f = |t: f64| t.powi(3);
        let resid = |m: usize, tau: f64| {
            let d = bdf_apply(m, &[f(1.0)], &[f(1.0 - tau)], Some(&[f(1.0 - 2.0 * tau)]), tau).unwrap()[0];
            (d - 3.0).abs()
        };
        for m in [1usize, 2] {
            let ratio = resid(m, 0.02) / resid(m, 0.01);
            let expected = 2f64.powi(m as i32);
            assert!((ratio / expected - 1.0).abs() < 0.15, "m={m} ratio={ratio}");
        }
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta(1), 1.0);
        assert_eq!(beta(2), 1.5);
    }
}
