//! Sparse storage, linear solvers and a generalized eigenvalue estimator.

mod csr;
mod eigen;
mod solve;

pub use csr::{axpy, dot, norm2, CsrMatrix};
pub use eigen::{smallest_generalized_eigenpair, smallest_generalized_eigenvalue, EigenPair};
pub use solve::{solve_general, solve_spd, LinearSolver, SolveReport, SolverConfig, SolverMethod};
