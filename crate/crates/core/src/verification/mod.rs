//! Manufactured solutions, error norms, convergence studies, Korn-constant
//! estimation, stability probes and the no-slip equivalence check.

mod convergence;
mod equivalence;
mod exact;
mod kappa;
mod norms;
mod stability;

pub use convergence::{
    convergence_study, eoc_pair, manufactured_run, ConvergenceRow, ConvergenceSetup, ConvergenceTable,
};
pub use equivalence::{equivalence_run, EquivalenceReport, EquivalenceSetup};
pub use exact::{ExactSolution, NoSlipSolution};
pub use kappa::estimate_kappa;
pub use norms::{state_errors, ErrorAccumulator, ErrorNorms, StateErrors};
pub use stability::{random_velocity, stability_probe, StabilityRow, StabilitySetup, StabilityTrace};
