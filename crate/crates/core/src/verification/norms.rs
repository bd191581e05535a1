use crate::error::Result;
use crate::fem::quadrature::TRIANGLE_DEG4;
use crate::fem::{pressure_at, velocity_at, velocity_gradient_at, SpacePair};
use crate::schemes::{ExactFlow, Observer, SchemeState, StepDiagnostics, Stepper};

/// Errors of one discrete state against the exact flow at the same time.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StateErrors {
    pub velocity_l2: f64,
    /// Full H¹ norm: `(‖e‖² + ‖∇e‖²)^{1/2}`.
    pub velocity_h1: f64,
    pub pressure_l2: f64,
}

pub fn state_errors(spaces: &SpacePair, exact: &dyn ExactFlow, t: f64, u: &[f64], p: &[f64]) -> StateErrors {
    let (mut eu, mut egrad, mut ep) = (0.0, 0.0, 0.0);
    for tri in 0..spaces.mesh().n_triangles() {
        let geo = spaces.geometry(tri);
        for (l, w) in TRIANGLE_DEG4 {
            let x = geo.map(l);
            let wa = w * geo.area;
            let uh = velocity_at(spaces, u, tri, l);
            let ue = exact.velocity(t, x);
            eu += wa * ((uh[0] - ue[0]).powi(2) + (uh[1] - ue[1]).powi(2));
            let gh = velocity_gradient_at(spaces, u, tri, l);
            let ge = exact.velocity_gradient(t, x);
            for i in 0..2 {
                for j in 0..2 {
                    egrad += wa * (gh[i][j] - ge[i][j]).powi(2);
                }
            }
            ep += wa * (pressure_at(spaces, p, tri, l) - exact.pressure(t, x)).powi(2);
        }
    }
    StateErrors {
        velocity_l2: eu.sqrt(),
        velocity_h1: (eu + egrad).sqrt(),
        pressure_l2: ep.sqrt(),
    }
}

/// The four discrete-in-time norms reported by convergence studies.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorNorms {
    /// `max_k ‖u(t_k) - uᵏ‖`
    pub velocity_linf_l2: f64,
    /// `(τ Σ_{k≥1} ‖u(t_k) - uᵏ‖²_{H¹})^{1/2}`
    pub velocity_l2_h1: f64,
    pub pressure_linf_l2: f64,
    pub pressure_l2_l2: f64,
}

impl ErrorNorms {
    pub const NAMES: [&'static str; 4] = ["velocity_linf_l2", "velocity_l2_h1", "pressure_linf_l2", "pressure_l2_l2"];

    pub fn as_array(&self) -> [f64; 4] {
        [
            self.velocity_linf_l2,
            self.velocity_l2_h1,
            self.pressure_linf_l2,
            self.pressure_l2_l2,
        ]
    }
}

/// Observer accumulating [`ErrorNorms`] over a run.
pub struct ErrorAccumulator<'a> {
    exact: &'a dyn ExactFlow,
    sum_u: f64,
    sum_p: f64,
    norms: ErrorNorms,
    last: StateErrors,
    tau: f64,
}

impl<'a> ErrorAccumulator<'a> {
    pub fn new(exact: &'a dyn ExactFlow) -> Self {
        Self {
            exact,
            sum_u: 0.0,
            sum_p: 0.0,
            norms: ErrorNorms::default(),
            last: StateErrors::default(),
            tau: 0.0,
        }
    }

    pub fn norms(&self) -> ErrorNorms {
        ErrorNorms {
            velocity_l2_h1: (self.tau * self.sum_u).sqrt(),
            pressure_l2_l2: (self.tau * self.sum_p).sqrt(),
            ..self.norms
        }
    }

    /// Errors of the most recently observed state.
    pub fn last(&self) -> StateErrors {
        self.last
    }
}

impl Observer for ErrorAccumulator<'_> {
    fn observe(&mut self, stepper: &Stepper, state: &SchemeState, _diag: Option<&StepDiagnostics>) -> Result<()> {
        self.tau = stepper.params().tau;
        let e = state_errors(stepper.spaces(), self.exact, state.t, &state.u, &state.p);
        self.norms.velocity_linf_l2 = self.norms.velocity_linf_l2.max(e.velocity_l2);
        self.norms.pressure_linf_l2 = self.norms.pressure_linf_l2.max(e.pressure_l2);
        if state.k >= 1 {
            self.sum_u += e.velocity_h1.powi(2);
            self.sum_p += e.pressure_l2.powi(2);
        }
        self.last = e;
        Ok(())
    }
}
