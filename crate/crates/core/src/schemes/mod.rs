//! Time stepping: the grad-div and boundary-correction rotational schemes
//! and the no-slip gauge-Uzawa / rotational pair.

mod bdf;
mod forcing;
mod params;
mod run;
mod state;
mod stepper;

pub use bdf::{bdf_apply, bdf_leading, beta, extrapolate_sharp};
pub use forcing::{ExactFlow, Forcing, NoForcing};
pub use params::{PressureUpdate, SchemeKind, SchemeParams};
pub use run::{run, write_diagnostics_csv, History, Observer};
pub use state::{EnergyMonitor, SchemeState, SolverResiduals, StepDiagnostics, MONITOR_SLACK};
pub use stepper::{GaugeStartup, Stepper};
