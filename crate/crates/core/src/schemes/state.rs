/// Discrete unknowns carried between steps.
///
/// For the no-slip rotational scheme `dpsi` holds `φᵏ` and `psi` stays zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeState {
    pub k: usize,
    pub t: f64,
    pub u: Vec<f64>,
    pub u_prev: Vec<f64>,
    pub psi: Vec<f64>,
    /// `δψᵏ = ψᵏ - ψᵏ⁻¹`.
    pub dpsi: Vec<f64>,
    pub dpsi_prev: Vec<f64>,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
    /// Pressure at the last initialization level; `p = offset + ψ + c q`.
    pub p_offset: Vec<f64>,
}

impl SchemeState {
    pub fn zeros(velocity_dim: usize, pressure_dim: usize) -> Self {
        Self {
            k: 0,
            t: 0.0,
            u: vec![0.0; velocity_dim],
            u_prev: vec![0.0; velocity_dim],
            psi: vec![0.0; pressure_dim],
            dpsi: vec![0.0; pressure_dim],
            dpsi_prev: vec![0.0; pressure_dim],
            q: vec![0.0; pressure_dim],
            p: vec![0.0; pressure_dim],
            p_offset: vec![0.0; pressure_dim],
        }
    }
}

/// Relative residuals of the linear solves performed in one step.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SolverResiduals {
    pub velocity: f64,
    pub projection: f64,
    pub correction: f64,
}

impl SolverResiduals {
    pub fn max(&self) -> f64 {
        self.velocity.max(self.projection).max(self.correction)
    }
}

/// Terms of the first-order grad-div energy inequality for one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyMonitor {
    /// `‖uᵏ⁺¹‖² + α(1-τ/2)‖div uᵏ⁺¹‖² + (τ/Re)‖qᵏ⁺¹‖² + τ²⟦ψᵏ⁺¹⟧² + ‖δuᵏ⁺¹‖² + 2τ𝒜(uᵏ⁺¹)² + τ²⟦δψᵏ⟧²`
    pub lhs: f64,
    /// `‖uᵏ‖² + α‖div uᵏ‖² + (τ/Re)‖qᵏ‖² + τ²⟦ψᵏ⟧²`
    pub rhs: f64,
    /// `τ²⟦δ²ψᵏ⁺¹⟧²` against `‖δ div uᵏ⁺¹‖²`.
    pub projection_bound: [f64; 2],
    /// `‖δqᵏ⁺¹‖²` against `‖div uᵏ⁺¹‖²`.
    pub divergence_bound: [f64; 2],
    /// The four parts of `aᵏ⁺¹`: velocity, grad-div, q and ψ energies.
    pub energies: [f64; 4],
}

pub const MONITOR_SLACK: f64 = 1e-10;

fn holds(small: f64, big: f64) -> bool {
    small <= big + MONITOR_SLACK * big.abs().max(small.abs()) + f64::MIN_POSITIVE
}

impl EnergyMonitor {
    pub fn energy_ok(&self) -> bool {
        holds(self.lhs, self.rhs)
    }

    pub fn projection_ok(&self) -> bool {
        holds(self.projection_bound[0], self.projection_bound[1])
    }

    pub fn divergence_ok(&self) -> bool {
        holds(self.divergence_bound[0], self.divergence_bound[1])
    }

    pub fn passes(&self) -> bool {
        self.energy_ok() && self.projection_ok() && self.divergence_ok()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepDiagnostics {
    pub k: usize,
    pub t: f64,
    pub velocity_norm: f64,
    /// `𝒜(u)`, i.e. the square root of the viscous energy.
    pub viscous_norm: f64,
    pub divergence_norm: f64,
    pub pressure_norm: f64,
    pub dq_norm: f64,
    pub energy: Option<EnergyMonitor>,
    /// Mesh condition verdict (boundary-correction scheme only).
    pub mesh_condition: Option<bool>,
    pub residuals: SolverResiduals,
}

impl StepDiagnostics {
    /// `false` only if a monitor was evaluated and failed.
    pub fn monitors_pass(&self) -> bool {
        self.energy.is_none_or(|e| e.passes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_is_relative() {
        assert!(holds(1.0 + 5e-11, 1.0));
        assert!(!holds(1.0 + 1e-9, 1.0));
        assert!(holds(0.0, 0.0));
    }
}
