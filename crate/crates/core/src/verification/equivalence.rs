use super::exact::NoSlipSolution;
use crate::error::Result;
use crate::fem::{Discretization, FlowForm};
use crate::schemes::{run, NoForcing, Observer, SchemeKind, SchemeParams, SchemeState, Stepper};
use crate::sparse::SolverConfig;

#[derive(Clone, Debug)]
pub struct EquivalenceSetup {
    pub nx: usize,
    pub re: f64,
    pub tau: f64,
    pub steps: usize,
    pub form: FlowForm,
    /// Unforced run from zero data instead of the manufactured no-slip flow.
    pub zero_data: bool,
    pub solver: SolverConfig,
}

impl Default for EquivalenceSetup {
    fn default() -> Self {
        Self {
            nx: 16,
            re: 1.0,
            tau: 0.01,
            steps: 10,
            form: FlowForm::Traction,
            zero_data: false,
            solver: SolverConfig::default(),
        }
    }
}

/// Largest relative discrepancies between the gauge-Uzawa and rotational
/// trajectories over all steps.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EquivalenceReport {
    pub steps: usize,
    pub velocity: f64,
    pub pressure: f64,
    /// `φᵏ` against `δψᵏ`.
    pub gauge: f64,
}

impl EquivalenceReport {
    pub fn max(&self) -> f64 {
        self.velocity.max(self.pressure).max(self.gauge)
    }
}

fn rel(a: &[f64], b: &[f64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let den = a.iter().chain(b).map(|x| x.abs()).fold(0.0, f64::max);
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn trajectory(setup: &EquivalenceSetup, scheme: SchemeKind, disc: &Discretization) -> Result<Vec<SchemeState>> {
    let params = SchemeParams {
        scheme,
        form: setup.form,
        m: 1,
        re: setup.re,
        tau: setup.tau,
        final_time: setup.steps as f64 * setup.tau,
        ..Default::default()
    };
    let stepper = Stepper::new(disc.clone(), params, setup.solver)?;
    let exact = NoSlipSolution { re: setup.re };
    let mut states = Vec::new();
    let mut keep = |_: &Stepper, s: &SchemeState, _: Option<&_>| -> Result<()> {
        states.push(s.clone());
        Ok(())
    };
    let observers: &mut [&mut dyn Observer] = &mut [&mut keep];
    if setup.zero_data {
        let state = stepper.initial_state(&[(vec![0.0; disc.spaces.velocity_dim()], vec![0.0; disc.spaces.pressure_dim()])])?;
        run(&stepper, state, &NoForcing, observers).into_result()?;
    } else {
        let state = stepper.initialize_exact(&exact)?;
        run(&stepper, state, &exact, observers).into_result()?;
    }
    Ok(states)
}

/// Runs the no-slip gauge-Uzawa and rotational schemes side by side.
pub fn equivalence_run(setup: &EquivalenceSetup) -> Result<EquivalenceReport> {
    let disc = Discretization::unit_square(setup.nx)?;
    let gu = trajectory(setup, SchemeKind::GaugeUzawaNoSlip, &disc)?;
    let rot = trajectory(setup, SchemeKind::RotationalNoSlip, &disc)?;
    let mut report = EquivalenceReport {
        steps: gu.len().saturating_sub(1),
        ..Default::default()
    };
    for (a, b) in gu.iter().zip(&rot) {
        report.velocity = report.velocity.max(rel(&a.u, &b.u));
        report.pressure = report.pressure.max(rel(&a.p, &b.p));
        report.gauge = report.gauge.max(rel(&a.dpsi, &b.dpsi));
    }
    Ok(report)
}
