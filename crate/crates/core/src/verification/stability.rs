use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fem::{Discretization, OperatorSet};
use crate::schemes::{
    run, GaugeStartup, NoForcing, Observer, SchemeKind, SchemeParams, SchemeState, StepDiagnostics, Stepper,
};
use crate::sparse::SolverConfig;

/// Seeded random velocity coefficients scaled to unit L² norm (or to
/// `amplitude`). Boundary values are zeroed for no-slip schemes.
pub fn random_velocity(ops: &OperatorSet, seed: u64, amplitude: f64, zero_mask: Option<&[bool]>) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u: Vec<f64> = (0..ops.m_u.nrows()).map(|_| rng.random_range(-1.0..1.0)).collect();
    if let Some(mask) = zero_mask {
        u.iter_mut().zip(mask).filter(|(_, &m)| m).for_each(|(x, _)| *x = 0.0);
    }
    let norm = ops.m_u.bilinear(&u, &u).expect("square mass matrix").sqrt();
    let scale = if norm > 0.0 { amplitude / norm } else { 0.0 };
    u.iter_mut().for_each(|x| *x *= scale);
    u
}

#[derive(Clone, Debug)]
pub struct StabilitySetup {
    /// `tau`, scheme, order and physical parameters; the final time is
    /// replaced by `steps · tau`.
    pub params: SchemeParams,
    pub nx: usize,
    pub steps: usize,
    pub seed: u64,
    pub amplitude: f64,
    pub gauge: GaugeStartup,
    pub solver: SolverConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityRow {
    pub k: usize,
    pub t: f64,
    /// `‖u‖²`, `α‖div u‖²`, `τ c_q ‖q‖²`, `τ²⟦ψ⟧²`.
    pub energies: [f64; 4],
    pub diagnostics: Option<StepDiagnostics>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityTrace {
    pub rows: Vec<StabilityRow>,
    pub initial_norm: f64,
    pub max_norm: f64,
    pub mesh_condition: Option<bool>,
    pub warnings: Vec<String>,
}

impl StabilityTrace {
    pub fn violations(&self) -> usize {
        self.rows
            .iter()
            .filter_map(|r| r.diagnostics.as_ref())
            .filter(|d| !d.monitors_pass())
            .count()
    }

    /// `max_k ‖uᵏ‖ ≤ e ‖u⁰‖`.
    pub fn bounded(&self) -> bool {
        self.max_norm <= std::f64::consts::E * self.initial_norm * (1.0 + 1e-12) + f64::MIN_POSITIVE
    }

    pub fn write_csv<W: Write>(&self, mut out: W, comment: &str) -> std::io::Result<()> {
        writeln!(out, "# {comment}")?;
        writeln!(
            out,
            "k,t,velocity_energy,graddiv_energy,q_energy,gauge_energy,lhs,rhs,energy_ok,projection_ok,divergence_ok"
        )?;
        for r in &self.rows {
            write!(out, "{},{:.16e}", r.k, r.t)?;
            for e in r.energies {
                write!(out, ",{e:.16e}")?;
            }
            match r.diagnostics.as_ref().and_then(|d| d.energy) {
                Some(m) => writeln!(
                    out,
                    ",{:.16e},{:.16e},{},{},{}",
                    m.lhs,
                    m.rhs,
                    u8::from(m.energy_ok()),
                    u8::from(m.projection_ok()),
                    u8::from(m.divergence_ok())
                )?,
                None => writeln!(out, ",,,,,")?,
            }
        }
        Ok(())
    }
}

fn energies(stepper: &Stepper, s: &SchemeState) -> [f64; 4] {
    let ops = stepper.ops();
    let p = stepper.params();
    let q = |a: &crate::sparse::CsrMatrix, x: &[f64]| a.bilinear(x, x).expect("fixed dimensions");
    let gauge = match p.scheme {
        SchemeKind::GradDiv => q(&ops.h_p, &s.psi),
        _ => q(&ops.l_p, &s.psi),
    };
    let alpha = if p.scheme == SchemeKind::GradDiv { p.alpha } else { 0.0 };
    [
        q(&ops.m_u, &s.u),
        alpha * q(&ops.g, &s.u),
        p.tau * stepper.q_coefficient() * q(&ops.m_p, &s.q),
        p.tau * p.tau * gauge,
    ]
}

/// Unforced run from random data recording energies and monitor verdicts.
pub fn stability_probe(setup: &StabilitySetup) -> Result<StabilityTrace> {
    let params = SchemeParams {
        final_time: setup.steps as f64 * setup.params.tau,
        ..setup.params.clone()
    };
    let disc = Discretization::unit_square(setup.nx)?;
    let stepper = Stepper::new(disc, params, setup.solver)?;
    let mask = stepper
        .params()
        .scheme
        .is_no_slip()
        .then(|| stepper.spaces().no_slip_restriction());
    let u0 = random_velocity(stepper.ops(), setup.seed, setup.amplitude, mask.as_ref().map(|r| r.mask()));
    let state = stepper.initialize_velocity(u0, setup.gauge)?;

    let mut rows = Vec::new();
    let mut record = |st: &Stepper, s: &SchemeState, d: Option<&StepDiagnostics>| -> Result<()> {
        rows.push(StabilityRow {
            k: s.k,
            t: s.t,
            energies: energies(st, s),
            diagnostics: d.cloned(),
        });
        Ok(())
    };
    let history = run(&stepper, state, &NoForcing, &mut [&mut record as &mut dyn Observer]);
    let warnings = history.warnings.clone();
    history.into_result()?;
    let norms: Vec<f64> = rows.iter().map(|r| r.energies[0].sqrt()).collect();
    Ok(StabilityTrace {
        initial_norm: norms[0],
        max_norm: norms.iter().cloned().fold(0.0, f64::max),
        mesh_condition: (stepper.params().scheme == SchemeKind::BoundaryCorrection).then(|| stepper.mesh_condition()),
        rows,
        warnings,
    })
}
