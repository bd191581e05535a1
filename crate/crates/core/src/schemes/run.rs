use std::io::Write;

use super::forcing::Forcing;
use super::params::SchemeKind;
use super::state::{SchemeState, StepDiagnostics};
use super::stepper::Stepper;
use crate::error::{Error, Result};

/// Called once with the initial state (`diag == None`) and after every step.
pub trait Observer {
    fn observe(&mut self, stepper: &Stepper, state: &SchemeState, diag: Option<&StepDiagnostics>) -> Result<()>;
}

impl<F> Observer for F
where
    F: FnMut(&Stepper, &SchemeState, Option<&StepDiagnostics>) -> Result<()>,
{
    fn observe(&mut self, stepper: &Stepper, state: &SchemeState, diag: Option<&StepDiagnostics>) -> Result<()> {
        self(stepper, state, diag)
    }
}

#[derive(Debug)]
pub struct History {
    pub diagnostics: Vec<StepDiagnostics>,
    pub final_state: SchemeState,
    pub warnings: Vec<String>,
    /// Set when a step or an observer failed; the history is then partial.
    pub failure: Option<Error>,
}

impl History {
    pub fn steps(&self) -> usize {
        self.diagnostics.len()
    }

    pub fn monitor_violations(&self) -> usize {
        self.diagnostics.iter().filter(|d| !d.monitors_pass()).count()
    }

    pub fn into_result(self) -> Result<Self> {
        match self.failure {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }
}

/// Runs the time loop from `state` up to the final time.
pub fn run(
    stepper: &Stepper,
    mut state: SchemeState,
    forcing: &dyn Forcing,
    observers: &mut [&mut dyn Observer],
) -> History {
    let mut warnings = Vec::new();
    let p = stepper.params();
    if p.scheme == SchemeKind::BoundaryCorrection && !stepper.mesh_condition() {
        let h = stepper.discretization().mesh().h_min;
        warnings.push(format!(
            "mesh condition violated: tau = {} > c_cfl * Re * h^2 = {}",
            p.tau,
            p.c_cfl * p.re * h * h
        ));
    }
    let mut diagnostics = Vec::new();
    let total = match p.steps() {
        Ok(k) => k,
        Err(e) => {
            return History {
                diagnostics,
                final_state: state,
                warnings,
                failure: Some(e),
            }
        }
    };
    let mut failure = observers
        .iter_mut()
        .try_for_each(|o| o.observe(stepper, &state, None))
        .err();
    while failure.is_none() && state.k < total {
        match stepper.step(&mut state, forcing) {
            Ok(d) => {
                failure = observers
                    .iter_mut()
                    .try_for_each(|o| o.observe(stepper, &state, Some(&d)))
                    .err();
                diagnostics.push(d);
            }
            Err(e) => failure = Some(e),
        }
    }
    History {
        diagnostics,
        final_state: state,
        warnings,
        failure,
    }
}

fn flag(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "1",
        Some(false) => "0",
        None => "",
    }
}

/// Writes one CSV row per step after a `# ...` comment line.
pub fn write_diagnostics_csv<W: Write>(mut out: W, comment: &str, diags: &[StepDiagnostics]) -> std::io::Result<()> {
    writeln!(out, "# {comment}")?;
    writeln!(
        out,
        "k,t,velocity_norm,viscous_norm,divergence_norm,pressure_norm,energy_ok,projection_ok,divergence_ok,mesh_condition,velocity_residual,projection_residual,correction_residual"
    )?;
    for d in diags {
        let e = d.energy.as_ref();
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{},{},{:.16e},{:.16e},{:.16e}",
            d.k,
            d.t,
            d.velocity_norm,
            d.viscous_norm,
            d.divergence_norm,
            d.pressure_norm,
            flag(e.map(|e| e.energy_ok())),
            flag(e.map(|e| e.projection_ok())),
            flag(e.map(|e| e.divergence_ok())),
            flag(d.mesh_condition),
            d.residuals.velocity,
            d.residuals.projection,
            d.residuals.correction
        )?;
    }
    Ok(())
}
