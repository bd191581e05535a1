use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::csr::{dot, CsrMatrix};
use super::solve::{LinearSolver, SolverConfig};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    /// B-normalized eigenvector.
    pub vector: Vec<f64>,
    pub iterations: usize,
}

const MAX_ITERATIONS: usize = 20_000;

/// Smallest `λ` with `A x = λ B x` for symmetric positive semidefinite `A`
/// and symmetric positive definite `B`.
pub fn smallest_generalized_eigenvalue(a: &CsrMatrix, b: &CsrMatrix, tolerance: f64) -> Result<f64> {
    smallest_generalized_eigenpair(a, b, tolerance).map(|p| p.value)
}

/// Inverse iteration on `(A + σB)⁻¹ B` with Rayleigh-quotient estimates.
///
/// `σ = 0` is tried first; if `A` cannot be factored (or the solve is not
/// finite) the shift `σ = 1` makes the operator definite. Convergence is declared when the
/// extrapolated remaining change of the Rayleigh quotient (geometric tail of
/// the last two increments) falls below `tolerance · |λ|`.
pub fn smallest_generalized_eigenpair(a: &CsrMatrix, b: &CsrMatrix, tolerance: f64) -> Result<EigenPair> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidArgument("eigen tolerance must be positive".into()));
    }
    let n = a.nrows();
    let cfg = SolverConfig::default();
    let probe: Vec<f64> = b.matvec(&vec![1.0; n])?;
    let solver = match LinearSolver::spd(a, cfg) {
        Ok(s) if s.solve(&probe).is_ok_and(|y| y.iter().all(|v| v.is_finite())) => s,
        _ => {
            let shifted = CsrMatrix::linear_combination(&[(1.0, a), (1.0, b)])?;
            LinearSolver::spd(&shifted, cfg)?
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x: Vec<f64> = (0..n).map(|_| 1.0 + 0.5 * rng.random::<f64>()).collect();
    normalize_b(b, &mut x)?;
    let mut lambda = a.bilinear(&x, &x)?;
    let mut last_step = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        let bx = b.matvec(&x)?;
        let mut y = solver.solve(&bx)?;
        normalize_b(b, &mut y)?;
        x = y;
        let next = a.bilinear(&x, &x)?;
        let step = (next - lambda).abs();
        lambda = next;
        let ratio = if last_step.is_finite() && last_step > 0.0 {
            (step / last_step).min(0.999)
        } else {
            0.999
        };
        last_step = step;
        let remaining = step * ratio / (1.0 - ratio);
        if it > 2 && (step + remaining) <= tolerance * lambda.abs().max(1e-12) {
            return Ok(EigenPair {
                value: lambda,
                vector: x,
                iterations: it,
            });
        }
        if step == 0.0 && it > 2 {
            return Ok(EigenPair {
                value: lambda,
                vector: x,
                iterations: it,
            });
        }
    }
    Err(Error::EigenNonConvergence {
        iterations: MAX_ITERATIONS,
        estimate: lambda,
    })
}

fn normalize_b(b: &CsrMatrix, x: &mut [f64]) -> Result<()> {
    let bx = b.matvec(x)?;
    let norm = dot(x, &bx).sqrt();
    if !(norm > 0.0) {
        return Err(Error::SolverFailure {
            reason: "inverse iteration collapsed to the zero vector".into(),
            iterations: 0,
            residual: f64::NAN,
        });
    }
    x.iter_mut().for_each(|v| *v /= norm);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_pencils_give_one() {
        let a = CsrMatrix::from_dense(&[vec![2.0, -1.0], vec![-1.0, 2.0]]).unwrap();
        let l = smallest_generalized_eigenvalue(&a, &a, 1e-12).unwrap();
        assert!((l - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_pencil() {
        let a = CsrMatrix::from_dense(&[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
        let l = smallest_generalized_eigenvalue(&a, &CsrMatrix::identity(2), 1e-12).unwrap();
        assert!((l - 2.0).abs() < 1e-10, "{l}");
    }

    #[test]
    fn singular_a_uses_shift() {
        let a = CsrMatrix::from_dense(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let l = smallest_generalized_eigenvalue(&a, &CsrMatrix::identity(2), 1e-12).unwrap();
        assert!(l.abs() < 1e-10, "{l}");
    }
}
