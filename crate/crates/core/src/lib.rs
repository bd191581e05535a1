//! # traction-split
//!
//! Rotational pressure-correction (gauge-Uzawa) time stepping for the
//! incompressible Stokes/Navier-Stokes equations with open and traction
//! boundary conditions, discretized with Taylor-Hood P2/P1 elements on
//! structured triangulations.
//!
//! Two families of schemes are provided, each in first- and second-order
//! (BDF1/BDF2) variants:
//!
//! - a grad-div stabilized scheme, unconditionally stable for
//!   `α > max{1, 2/Re}` ([`schemes::SchemeKind::GradDiv`]);
//! - a boundary-correction scheme whose gauge variable has zero trace and
//!   whose momentum equation carries a surface-divergence correction,
//!   stable under `τ ≤ C·Re·h²` ([`schemes::SchemeKind::BoundaryCorrection`]).
//!
//! A no-slip gauge-Uzawa / rotational pair demonstrates the algebraic
//! equivalence of the two formulations. The [`verification`] module holds
//! the manufactured solution, discrete error norms, convergence studies,
//! Korn-constant estimation and energy-monitored stability probes.
//!
//! Runnable examples live in `crates/core/examples/`; the
//! `traction-split` binary wraps the same functionality behind the
//! `converge`, `stability`, `equivalence` and `run` subcommands.

pub mod cli;
pub mod error;
pub mod fem;
pub mod mesh;
pub mod schemes;
pub mod sparse;
pub mod verification;

pub use error::{Error, Result};
