use super::bdf::{bdf_history, bdf_leading, extrapolate_sharp};
use super::forcing::{ExactFlow, Forcing};
use super::params::{PressureUpdate, SchemeKind, SchemeParams};
use super::state::{EnergyMonitor, SchemeState, SolverResiduals, StepDiagnostics};
use crate::error::{Error, Result};
use crate::fem::{
    assemble_boundary_load, assemble_load, Discretization, OperatorSet, Projector, Restriction, SpacePair,
};
use crate::sparse::{axpy, LinearSolver, SolverConfig};
use crate::sparse::CsrMatrix;
use crate::verification::estimate_kappa;

/// How `δψ⁰` is chosen when a run starts from a bare velocity field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GaugeStartup {
    /// `δψ⁰ = 0`.
    Zero,
    /// `δψ⁰` solves the projection equation with `u⁰` on the right, as if
    /// the scheme had been running before `t = 0`.
    Consistent,
}

/// Projection operator of the scheme, with the restriction it lives on.
#[derive(Debug)]
enum Projection {
    /// `H_p δψ = -(β/τ) B u` on all of Q_h.
    Full(LinearSolver),
    /// `L_p δψ = (β/τ) C_v u` on M_h.
    Gauge { solver: LinearSolver, c_v: CsrMatrix },
    /// `L_p δψ = -(1/τ) B u` with a homogeneous Neumann condition; one
    /// vertex is pinned and the result shifted to zero mean.
    Neumann { solver: LinearSolver, pin: Restriction },
}

/// One configured scheme on one mesh: all matrices that stay fixed during
/// a run are assembled and factored here.
#[derive(Debug)]
pub struct Stepper {
    disc: Discretization,
    params: SchemeParams,
    kappa: f64,
    k_form: CsrMatrix,
    /// Operator hit by the time derivative: `M_u + αG` or `M_u`.
    mop: CsrMatrix,
    velocity: LinearSolver,
    no_slip: Option<Restriction>,
    projection: Projection,
    projector: Projector,
    solver: SolverConfig,
    mesh_condition: bool,
}

fn solve(solver: &LinearSolver, rhs: &[f64], residual: &mut f64) -> Result<Vec<f64>> {
    let (x, report) = solver.solve_with_report(rhs)?;
    *residual = residual.max(report.residual);
    Ok(x)
}

fn quad(a: &CsrMatrix, x: &[f64]) -> f64 {
    a.bilinear(x, x).expect("dimensions fixed at construction")
}

fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl Stepper {
    pub fn new(disc: Discretization, params: SchemeParams, solver: SolverConfig) -> Result<Self> {
        params.validate()?;
        solver.validate()?;
        let ops: &OperatorSet = &disc.ops;
        let kappa = match params.kappa {
            Some(k) => k,
            None if params.needs_kappa() => estimate_kappa(ops, params.form, 1e-10)?,
            None => 0.5,
        };
        let k_form = ops.form_stiffness(params.form);
        let mop = if params.scheme == SchemeKind::GradDiv {
            CsrMatrix::linear_combination(&[(1.0, &ops.m_u), (params.alpha, &ops.g)])?
        } else {
            ops.m_u.clone()
        };
        let a = CsrMatrix::linear_combination(&[
            (bdf_leading(params.m) / params.tau, &mop),
            (1.0 / params.re, &k_form),
        ])?;
        let spaces = &disc.spaces;
        let no_slip = params.scheme.is_no_slip().then(|| spaces.no_slip_restriction());
        let velocity = match &no_slip {
            Some(r) => LinearSolver::spd(&r.restrict_matrix(&a), solver)?,
            None => LinearSolver::spd(&a, solver)?,
        };
        let projection = match params.scheme {
            SchemeKind::GradDiv => Projection::Full(LinearSolver::spd(&ops.h_p, solver)?),
            SchemeKind::BoundaryCorrection => {
                if spaces.gauge_dim() == 0 {
                    return Err(Error::InvalidArgument(
                        "boundary-correction scheme needs at least one interior vertex".into(),
                    ));
                }
                Projection::Gauge {
                    solver: LinearSolver::spd(&spaces.gauge.restrict_matrix(&ops.l_p), solver)?,
                    c_v: spaces.gauge.restrict_rows(&ops.c_v),
                }
            }
            SchemeKind::GaugeUzawaNoSlip | SchemeKind::RotationalNoSlip => {
                let mut mask = vec![false; spaces.pressure_dim()];
                mask[0] = true;
                let pin = Restriction::from_mask(&mask);
                Projection::Neumann {
                    solver: LinearSolver::spd(&pin.restrict_matrix(&ops.l_p), solver)?,
                    pin,
                }
            }
        };
        let projector = Projector::new(ops, solver)?;
        let mesh_condition = params.mesh_condition(disc.mesh().h_min);
        Ok(Self {
            disc,
            params,
            kappa,
            k_form,
            mop,
            velocity,
            no_slip,
            projection,
            projector,
            solver,
            mesh_condition,
        })
    }

    pub fn params(&self) -> &SchemeParams {
        &self.params
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn spaces(&self) -> &SpacePair {
        &self.disc.spaces
    }

    pub fn ops(&self) -> &OperatorSet {
        &self.disc.ops
    }

    pub fn discretization(&self) -> &Discretization {
        &self.disc
    }

    pub fn solver_config(&self) -> SolverConfig {
        self.solver
    }

    /// Whether `τ ≤ c_cfl Re h_min²` holds; only consulted by the
    /// boundary-correction scheme, which warns otherwise.
    pub fn mesh_condition(&self) -> bool {
        self.mesh_condition
    }

    /// Coefficient of `q` in the pressure update.
    pub fn q_coefficient(&self) -> f64 {
        let use_kappa = match self.params.scheme {
            SchemeKind::BoundaryCorrection => true,
            SchemeKind::GradDiv => self.params.pressure_update == PressureUpdate::Korn,
            _ => false,
        };
        if use_kappa {
            self.kappa / self.params.re
        } else {
            1.0 / self.params.re
        }
    }

    fn zero_state(&self) -> SchemeState {
        SchemeState::zeros(self.spaces().velocity_dim(), self.spaces().pressure_dim())
    }

    /// Initialization from given coefficient vectors, one `(u, p)` pair per
    /// level `t₀ … t_{m-1}`; `ψ = q = 0`.
    pub fn initial_state(&self, levels: &[(Vec<f64>, Vec<f64>)]) -> Result<SchemeState> {
        let m = self.params.m;
        if levels.len() != m {
            return Err(Error::InvalidArgument(format!(
                "expected {m} initialization levels, got {}",
                levels.len()
            )));
        }
        let (nu, np) = (self.spaces().velocity_dim(), self.spaces().pressure_dim());
        for (u, p) in levels {
            if u.len() != nu {
                return Err(Error::DimensionMismatch { expected: nu, found: u.len() });
            }
            if p.len() != np {
                return Err(Error::DimensionMismatch { expected: np, found: p.len() });
            }
        }
        let mut s = self.zero_state();
        let (u, p) = &levels[m - 1];
        s.k = m - 1;
        s.t = (m - 1) as f64 * self.params.tau;
        s.u = u.clone();
        s.u_prev = levels[0].0.clone();
        s.p = p.clone();
        s.p_offset = p.clone();
        if let Some(r) = &self.no_slip {
            s.u = r.prolong(&r.restrict_vector(&s.u));
            s.u_prev = r.prolong(&r.restrict_vector(&s.u_prev));
        }
        Ok(s)
    }

    /// `uᵏ = Π u(t_k)`, `pᵏ = Π p(t_k)` for `k < m`.
    pub fn initialize_exact(&self, exact: &dyn ExactFlow) -> Result<SchemeState> {
        let spaces = self.spaces();
        let levels = (0..self.params.m)
            .map(|k| {
                let t = k as f64 * self.params.tau;
                let u = self.projector.velocity(spaces, |x| exact.velocity(t, x))?;
                let p = self.projector.pressure(spaces, |x| exact.pressure(t, x))?;
                Ok((u.coeffs, p.coeffs))
            })
            .collect::<Result<Vec<_>>>()?;
        self.initial_state(&levels)
    }

    /// Start from a velocity field at rest pressure: `u¹ = u⁰`, `p = 0`.
    pub fn initialize_velocity(&self, u0: Vec<f64>, gauge: GaugeStartup) -> Result<SchemeState> {
        let np = self.spaces().pressure_dim();
        let levels = vec![(u0, vec![0.0; np]); self.params.m];
        let mut s = self.initial_state(&levels)?;
        if gauge == GaugeStartup::Consistent {
            let mut r = 0.0;
            s.dpsi = self.project(&s.u, &mut r)?;
        }
        Ok(s)
    }

    /// Gauge increment from the projection step.
    fn project(&self, u: &[f64], residual: &mut f64) -> Result<Vec<f64>> {
        let ops = self.ops();
        let spaces = self.spaces();
        let coef = self.params.beta() / self.params.tau;
        match &self.projection {
            Projection::Full(solver) => {
                let mut rhs = ops.b.matvec(u)?;
                rhs.iter_mut().for_each(|x| *x *= -coef);
                solve(solver, &rhs, residual)
            }
            Projection::Gauge { solver, c_v } => {
                let mut rhs = c_v.matvec(u)?;
                rhs.iter_mut().for_each(|x| *x *= coef);
                Ok(spaces.gauge.prolong(&solve(solver, &rhs, residual)?))
            }
            Projection::Neumann { solver, pin } => {
                let mut rhs = ops.b.matvec(u)?;
                rhs.iter_mut().for_each(|x| *x *= -1.0 / self.params.tau);
                let mut x = pin.prolong(&solve(solver, &pin.restrict_vector(&rhs), residual)?);
                let ones = vec![1.0; x.len()];
                let mean = ops.m_p.bilinear(&ones, &x)? / ops.m_p.bilinear(&ones, &ones)?;
                x.iter_mut().for_each(|v| *v -= mean);
                Ok(x)
            }
        }
    }

    /// Advances `state` from `t_k` to `t_{k+1}`.
    pub fn step(&self, state: &mut SchemeState, forcing: &dyn Forcing) -> Result<StepDiagnostics> {
        let k = state.k;
        self.advance(state, forcing).map_err(|e| Error::StepFailure {
            step: k + 1,
            source: Box::new(e),
        })
    }

    fn advance(&self, state: &mut SchemeState, forcing: &dyn Forcing) -> Result<StepDiagnostics> {
        let prm = &self.params;
        let ops = self.ops();
        let spaces = self.spaces();
        let (m, tau) = (prm.m, prm.tau);
        let t_next = (state.k + 1) as f64 * tau;
        let mut res = SolverResiduals::default();

        // (1) velocity
        let history = bdf_history(m, &state.u, &state.u_prev);
        let mut rhs = self.mop.matvec(&history)?;
        rhs.iter_mut().for_each(|x| *x /= tau);
        if !forcing.is_zero() {
            axpy(1.0, &assemble_load(spaces, t_next, |t, x| forcing.body(t, x)), &mut rhs);
            if self.no_slip.is_none() {
                let g = assemble_boundary_load(spaces, t_next, |t, x, f| forcing.traction(t, x, f));
                axpy(1.0, &g, &mut rhs);
            }
        }
        let sharp = extrapolate_sharp(m, &state.dpsi, Some(&state.dpsi_prev))?;
        match prm.scheme {
            SchemeKind::GradDiv | SchemeKind::GaugeUzawaNoSlip | SchemeKind::RotationalNoSlip => {
                let pp: Vec<f64> = state.p.iter().zip(&sharp).map(|(a, b)| a + b).collect();
                axpy(1.0, &ops.b.transpose_matvec(&pp)?, &mut rhs);
            }
            SchemeKind::BoundaryCorrection => {
                axpy(1.0, &ops.b.transpose_matvec(&state.p)?, &mut rhs);
                axpy(-1.0, &ops.c_v.transpose_matvec(&sharp)?, &mut rhs);
                let s = ops.s.matvec(&state.dpsi)?;
                axpy(-tau / (prm.beta() * prm.re), &s, &mut rhs);
            }
        }
        let u_new = match &self.no_slip {
            Some(r) => r.prolong(&solve(&self.velocity, &r.restrict_vector(&rhs), &mut res.velocity)?),
            None => solve(&self.velocity, &rhs, &mut res.velocity)?,
        };

        // (2) projection
        let dpsi_new = self.project(&u_new, &mut res.projection)?;

        // (3) divergence correction: M_p w = B u, δq = -w
        let bu = ops.b.matvec(&u_new)?;
        let w = solve(self.projector_pressure(), &bu, &mut res.correction)?;

        // (4) pressure
        let old = (state.u.clone(), state.psi.clone(), state.q.clone(), state.dpsi.clone());
        state.u_prev = std::mem::replace(&mut state.u, u_new);
        state.dpsi_prev = std::mem::replace(&mut state.dpsi, dpsi_new);
        axpy(-1.0, &w, &mut state.q);
        if prm.scheme == SchemeKind::RotationalNoSlip {
            // δp = φ - (1/Re) Π div u
            axpy(1.0, &state.dpsi, &mut state.p);
            axpy(-1.0 / prm.re, &w, &mut state.p);
        } else {
            axpy(1.0, &state.dpsi, &mut state.psi);
            let c = self.q_coefficient();
            state.p = state
                .p_offset
                .iter()
                .zip(&state.psi)
                .zip(&state.q)
                .map(|((o, s), q)| o + s + c * q)
                .collect();
        }
        state.k += 1;
        state.t = t_next;

        let energy = (prm.scheme == SchemeKind::GradDiv && m == 1 && forcing.is_zero())
            .then(|| self.energy_monitor(&old.0, &old.1, &old.2, &old.3, state, &w));
        let a2 = quad(&self.k_form, &state.u) / prm.re;
        Ok(StepDiagnostics {
            k: state.k,
            t: state.t,
            velocity_norm: quad(&ops.m_u, &state.u).sqrt(),
            viscous_norm: a2.max(0.0).sqrt(),
            divergence_norm: quad(&ops.g, &state.u).max(0.0).sqrt(),
            pressure_norm: quad(&ops.m_p, &state.p).sqrt(),
            dq_norm: quad(&ops.m_p, &w).sqrt(),
            energy,
            mesh_condition: (prm.scheme == SchemeKind::BoundaryCorrection).then_some(self.mesh_condition),
            residuals: res,
        })
    }

    fn projector_pressure(&self) -> &LinearSolver {
        self.projector.pressure_solver()
    }

    fn energy_monitor(
        &self,
        u_old: &[f64],
        psi_old: &[f64],
        q_old: &[f64],
        dpsi_old: &[f64],
        s: &SchemeState,
        w: &[f64],
    ) -> EnergyMonitor {
        let ops = self.ops();
        let prm = &self.params;
        let (tau, alpha) = (prm.tau, prm.alpha);
        let cq = tau * self.q_coefficient();
        let du = diff(&s.u, u_old);
        let d2psi = diff(&s.dpsi, dpsi_old);
        let energies = [
            quad(&ops.m_u, &s.u),
            alpha * quad(&ops.g, &s.u),
            cq * quad(&ops.m_p, &s.q),
            tau * tau * quad(&ops.h_p, &s.psi),
        ];
        let lhs = energies[0]
            + (1.0 - 0.5 * tau) * energies[1]
            + energies[2]
            + energies[3]
            + quad(&ops.m_u, &du)
            + 2.0 * tau * quad(&self.k_form, &s.u) / prm.re
            + tau * tau * quad(&ops.h_p, dpsi_old);
        let rhs = quad(&ops.m_u, u_old)
            + alpha * quad(&ops.g, u_old)
            + cq * quad(&ops.m_p, q_old)
            + tau * tau * quad(&ops.h_p, psi_old);
        EnergyMonitor {
            lhs,
            rhs,
            projection_bound: [tau * tau * quad(&ops.h_p, &d2psi), quad(&ops.g, &du)],
            divergence_bound: [quad(&ops.m_p, w), quad(&ops.g, &s.u)],
            energies,
        }
    }
}
