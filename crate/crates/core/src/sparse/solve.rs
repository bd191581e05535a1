use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Llt, Lu};
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};

use super::csr::{axpy, dot, norm2, CsrMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverMethod {
    /// Jacobi-preconditioned conjugate gradients (BiCGSTAB for general systems).
    ConjugateGradient,
    /// Sparse Cholesky (SPD) or LU (general) factorization.
    Direct,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub method: SolverMethod,
    pub tolerance: f64,
    /// Defaults to `10 n` when unset.
    pub max_iterations: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: SolverMethod::Direct,
            tolerance: 1e-12,
            max_iterations: None,
        }
    }
}

impl SolverConfig {
    pub fn new(method: SolverMethod, tolerance: f64, max_iterations: Option<usize>) -> Result<Self> {
        let cfg = Self {
            method,
            tolerance,
            max_iterations,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn cg(tolerance: f64) -> Result<Self> {
        Self::new(SolverMethod::ConjugateGradient, tolerance, None)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "solver tolerance must lie in (0, 1), got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == Some(0) {
            return Err(Error::InvalidArgument("max iterations must be at least 1".into()));
        }
        Ok(())
    }

    fn iteration_cap(&self, n: usize) -> usize {
        self.max_iterations.unwrap_or(10 * n.max(1))
    }
}

/// Outcome of a single solve.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// Achieved `‖Ax - b‖ / ‖b‖` (zero for a zero right-hand side).
    pub residual: f64,
}

enum Backend {
    Cholesky(Llt<usize, f64>),
    Lu(Lu<usize, f64>),
    ConjugateGradient { inv_diag: Vec<f64> },
    BiCgStab { inv_diag: Vec<f64> },
}

/// A linear operator prepared for repeated solves: the factorization (or
/// preconditioner) is built once and reused for every right-hand side.
pub struct LinearSolver {
    matrix: CsrMatrix,
    /// `‖A‖_∞`, for the backward-error test of direct solves.
    norm_inf: f64,
    config: SolverConfig,
    backend: Backend,
}

impl std::fmt::Debug for LinearSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.backend {
            Backend::Cholesky(_) => "cholesky",
            Backend::Lu(_) => "lu",
            Backend::ConjugateGradient { .. } => "cg",
            Backend::BiCgStab { .. } => "bicgstab",
        };
        f.debug_struct("LinearSolver")
            .field("n", &self.matrix.nrows())
            .field("backend", &kind)
            .finish()
    }
}

fn check_square(a: &CsrMatrix) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    Ok(())
}

fn to_faer(a: &CsrMatrix, lower_only: bool) -> Result<SparseColMat<usize, f64>> {
    let mut triplets = Vec::with_capacity(a.nnz());
    for i in 0..a.nrows() {
        for (j, v) in a.row(i) {
            if !lower_only || j <= i {
                triplets.push(Triplet::new(i, j, v));
            }
        }
    }
    SparseColMat::try_new_from_triplets(a.nrows(), a.ncols(), &triplets)
        .map_err(|e| Error::InvalidArgument(format!("cannot convert matrix: {e:?}")))
}

fn row_sum_norm(a: &CsrMatrix) -> f64 {
    (0..a.nrows())
        .map(|i| a.row(i).map(|(_, v)| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn inverse_diagonal(a: &CsrMatrix) -> Vec<f64> {
    a.diagonal()
        .into_iter()
        .map(|d| if d != 0.0 { 1.0 / d } else { 1.0 })
        .collect()
}

impl LinearSolver {
    /// Prepares a solver for a symmetric positive definite matrix.
    pub fn spd(matrix: &CsrMatrix, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        check_square(matrix)?;
        let backend = match config.method {
            SolverMethod::Direct => {
                let llt = to_faer(matrix, true)?.sp_cholesky(Side::Lower).map_err(|e| Error::SolverFailure {
                    reason: format!("cholesky factorization failed: {e:?}"),
                    iterations: 0,
                    residual: f64::NAN,
                })?;
                Backend::Cholesky(llt)
            }
            SolverMethod::ConjugateGradient => Backend::ConjugateGradient {
                inv_diag: inverse_diagonal(matrix),
            },
        };
        Ok(Self {
            matrix: matrix.clone(),
            norm_inf: row_sum_norm(matrix),
            config,
            backend,
        })
    }

    /// Prepares a solver for a general nonsingular matrix.
    pub fn general(matrix: &CsrMatrix, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        check_square(matrix)?;
        let backend = match config.method {
            SolverMethod::Direct => {
                let lu = to_faer(matrix, false)?.sp_lu().map_err(|e| Error::SolverFailure {
                    reason: format!("LU factorization failed: {e:?}"),
                    iterations: 0,
                    residual: f64::NAN,
                })?;
                Backend::Lu(lu)
            }
            SolverMethod::ConjugateGradient => Backend::BiCgStab {
                inv_diag: inverse_diagonal(matrix),
            },
        };
        Ok(Self {
            matrix: matrix.clone(),
            norm_inf: row_sum_norm(matrix),
            config,
            backend,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.solve_with_report(b).map(|(x, _)| x)
    }

    pub fn solve_with_report(&self, b: &[f64]) -> Result<(Vec<f64>, SolveReport)> {
        let n = self.dim();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let bnorm = norm2(b);
        if bnorm == 0.0 {
            return Ok((vec![0.0; n], SolveReport::default()));
        }
        match &self.backend {
            Backend::Cholesky(_) | Backend::Lu(_) => self.direct(b, bnorm),
            Backend::ConjugateGradient { inv_diag } => self.cg(b, bnorm, inv_diag),
            Backend::BiCgStab { inv_diag } => self.bicgstab(b, bnorm, inv_diag),
        }
    }

    fn factor_solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let rhs = Mat::from_fn(n, 1, |i, _| rhs[i]);
        let sol = match &self.backend {
            Backend::Cholesky(llt) => llt.solve(&rhs),
            Backend::Lu(lu) => lu.solve(&rhs),
            _ => unreachable!("factor_solve on an iterative backend"),
        };
        (0..n).map(|i| sol[(i, 0)]).collect()
    }

    fn residual(&self, x: &[f64], b: &[f64]) -> Vec<f64> {
        let mut r = self.matrix.matvec(x).expect("dimensions checked");
        r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
        r
    }

    /// Factor solve plus iterative refinement. Accepts when the relative
    /// residual or the normwise backward error `‖r‖/(‖A‖‖x‖ + ‖b‖)` meets
    /// the tolerance; the latter covers right-hand sides that are small
    /// through cancellation, where `‖r‖/‖b‖` has a rounding floor above it.
    fn direct(&self, b: &[f64], bnorm: f64) -> Result<(Vec<f64>, SolveReport)> {
        const REFINEMENT_STEPS: usize = 4;
        let backward = |x: &[f64], r: &[f64]| max_abs(r) / (self.norm_inf * max_abs(x) + max_abs(b));
        let mut x = self.factor_solve(b);
        let mut r = self.residual(&x, b);
        let mut rel = norm2(&r) / bnorm;
        let mut iterations = 1;
        while rel > self.config.tolerance && iterations <= REFINEMENT_STEPS && rel.is_finite() {
            let dx = self.factor_solve(&r);
            let mut trial = x.clone();
            axpy(1.0, &dx, &mut trial);
            let r_trial = self.residual(&trial, b);
            let rel_trial = norm2(&r_trial) / bnorm;
            iterations += 1;
            if !(rel_trial < rel) {
                break;
            }
            (x, r, rel) = (trial, r_trial, rel_trial);
        }
        let tol = self.config.tolerance;
        if rel.is_finite() && (rel <= tol || backward(&x, &r) <= tol) {
            Ok((x, SolveReport { iterations, residual: rel }))
        } else {
            Err(Error::SolverFailure {
                reason: "direct solve missed the residual tolerance".into(),
                iterations,
                residual: rel,
            })
        }
    }

    fn cg(&self, b: &[f64], bnorm: f64, inv_diag: &[f64]) -> Result<(Vec<f64>, SolveReport)> {
        let n = b.len();
        let tol = self.config.tolerance * bnorm;
        let mut x = vec![0.0; n];
        let mut r = b.to_vec();
        let mut z: Vec<f64> = r.iter().zip(inv_diag).map(|(a, d)| a * d).collect();
        let mut p = z.clone();
        let mut ap = vec![0.0; n];
        let mut rz = dot(&r, &z);
        let cap = self.config.iteration_cap(n);
        for it in 1..=cap {
            self.matrix.matvec_into(&p, &mut ap)?;
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                return Err(Error::SolverFailure {
                    reason: "matrix is not positive definite".into(),
                    iterations: it,
                    residual: norm2(&r) / bnorm,
                });
            }
            let alpha = rz / pap;
            axpy(alpha, &p, &mut x);
            axpy(-alpha, &ap, &mut r);
            let rnorm = norm2(&r);
            if rnorm <= tol {
                // recompute the true residual to guard against drift
                let true_rel = norm2(&self.residual(&x, b)) / bnorm;
                if true_rel <= self.config.tolerance {
                    return Ok((x, SolveReport { iterations: it, residual: true_rel }));
                }
                r = self.residual(&x, b);
            }
            z.iter_mut().zip(r.iter().zip(inv_diag)).for_each(|(zi, (ri, di))| *zi = ri * di);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            p.iter_mut().zip(&z).for_each(|(pi, zi)| *pi = zi + beta * *pi);
        }
        Err(Error::SolverFailure {
            reason: "conjugate gradients did not converge".into(),
            iterations: cap,
            residual: norm2(&self.residual(&x, b)) / bnorm,
        })
    }

    fn bicgstab(&self, b: &[f64], bnorm: f64, inv_diag: &[f64]) -> Result<(Vec<f64>, SolveReport)> {
        let n = b.len();
        let precond = |v: &[f64]| -> Vec<f64> { v.iter().zip(inv_diag).map(|(a, d)| a * d).collect() };
        let mut x = vec![0.0; n];
        let mut r = b.to_vec();
        let r_hat = r.clone();
        let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
        let mut v = vec![0.0; n];
        let mut p = vec![0.0; n];
        let cap = self.config.iteration_cap(n);
        for it in 1..=cap {
            let rho_new = dot(&r_hat, &r);
            if rho_new == 0.0 || omega == 0.0 {
                break;
            }
            let beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for i in 0..n {
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
            }
            let p_hat = precond(&p);
            v = self.matrix.matvec(&p_hat)?;
            let denom = dot(&r_hat, &v);
            if denom == 0.0 {
                break;
            }
            alpha = rho / denom;
            axpy(alpha, &p_hat, &mut x);
            let mut s = r.clone();
            axpy(-alpha, &v, &mut s);
            if norm2(&s) <= self.config.tolerance * bnorm {
                let rel = norm2(&self.residual(&x, b)) / bnorm;
                if rel <= self.config.tolerance {
                    return Ok((x, SolveReport { iterations: it, residual: rel }));
                }
            }
            let s_hat = precond(&s);
            let t = self.matrix.matvec(&s_hat)?;
            let tt = dot(&t, &t);
            omega = if tt > 0.0 { dot(&t, &s) / tt } else { 0.0 };
            axpy(omega, &s_hat, &mut x);
            r = s;
            axpy(-omega, &t, &mut r);
            if norm2(&r) <= self.config.tolerance * bnorm {
                let rel = norm2(&self.residual(&x, b)) / bnorm;
                if rel <= self.config.tolerance {
                    return Ok((x, SolveReport { iterations: it, residual: rel }));
                }
            }
        }
        Err(Error::SolverFailure {
            reason: "BiCGSTAB did not converge (breakdown or iteration cap)".into(),
            iterations: cap,
            residual: norm2(&self.residual(&x, b)) / bnorm,
        })
    }
}

/// Solves an SPD system to the configured relative residual.
pub fn solve_spd(a: &CsrMatrix, b: &[f64], config: &SolverConfig) -> Result<Vec<f64>> {
    LinearSolver::spd(a, *config)?.solve(b)
}

/// Solves a general nonsingular system to the configured relative residual.
pub fn solve_general(a: &CsrMatrix, b: &[f64], config: &SolverConfig) -> Result<Vec<f64>> {
    LinearSolver::general(a, *config)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn configs() -> Vec<SolverConfig> {
        vec![SolverConfig::default(), SolverConfig::cg(1e-12).unwrap()]
    }

    #[test]
    fn identity_returns_rhs() {
        let b = vec![1.0, -2.0, 0.5];
        for cfg in configs() {
            let x = solve_spd(&CsrMatrix::identity(3), &b, &cfg).unwrap();
            assert!(x.iter().zip(&b).all(|(a, c)| (a - c).abs() < 1e-14));
            let x = solve_general(&CsrMatrix::identity(3), &b, &cfg).unwrap();
            assert!(x.iter().zip(&b).all(|(a, c)| (a - c).abs() < 1e-14));
        }
    }

    #[test]
    fn diagonal_spd() {
        let a = CsrMatrix::from_dense(&[vec![2.0, 0.0], vec![0.0, 4.0]]).unwrap();
        for cfg in configs() {
            let x = solve_spd(&a, &[2.0, 8.0], &cfg).unwrap();
            assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn permutation_general() {
        let a = CsrMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        for cfg in configs() {
            let x = solve_general(&a, &[3.0, 5.0], &cfg).unwrap();
            assert!((x[0] - 5.0).abs() < 1e-12 && (x[1] - 3.0).abs() < 1e-12, "{x:?}");
        }
    }

    #[test]
    fn zero_rhs_is_zero() {
        let a = CsrMatrix::from_dense(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let (x, rep) = LinearSolver::spd(&a, SolverConfig::default())
            .unwrap()
            .solve_with_report(&[0.0, 0.0])
            .unwrap();
        assert_eq!(x, vec![0.0, 0.0]);
        assert_eq!(rep.residual, 0.0);
    }

    #[test]
    fn cg_reports_failure_with_residual() {
        let n = 50;
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
                t.push((i - 1, i, -1.0));
            }
        }
        let a = CsrMatrix::from_triplets(n, n, &t).unwrap();
        let cfg = SolverConfig::new(SolverMethod::ConjugateGradient, 1e-12, Some(3)).unwrap();
        match solve_spd(&a, &vec![1.0; n], &cfg) {
            Err(Error::SolverFailure { iterations, residual, .. }) => {
                assert_eq!(iterations, 3);
                assert!(residual > 1e-12);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn indefinite_matrix_rejected_by_cholesky() {
        let a = CsrMatrix::from_dense(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(LinearSolver::spd(&a, SolverConfig::default()).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::new(SolverMethod::Direct, 0.0, None).is_err());
        assert!(SolverConfig::new(SolverMethod::Direct, 1.0, None).is_err());
        assert!(SolverConfig::new(SolverMethod::Direct, 1e-8, Some(0)).is_err());
    }
}
