use super::assembly::{assemble_load, assemble_scalar_load, OperatorSet};
use super::element::{p2_gradients, p2_values};
use super::spaces::SpacePair;
use crate::error::{Error, Result};
use crate::mesh::Point;
use crate::sparse::{LinearSolver, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Velocity,
    Pressure,
    Gauge,
}

/// Coefficient vector tied to one of the discrete spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteField {
    pub space: SpaceKind,
    pub coeffs: Vec<f64>,
}

impl DiscreteField {
    pub fn new(space: SpaceKind, coeffs: Vec<f64>, spaces: &SpacePair) -> Result<Self> {
        let expected = match space {
            SpaceKind::Velocity => spaces.velocity_dim(),
            SpaceKind::Pressure => spaces.pressure_dim(),
            SpaceKind::Gauge => spaces.gauge_dim(),
        };
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Self { space, coeffs })
    }

    pub fn zeros(space: SpaceKind, spaces: &SpacePair) -> Self {
        let n = match space {
            SpaceKind::Velocity => spaces.velocity_dim(),
            SpaceKind::Pressure => spaces.pressure_dim(),
            SpaceKind::Gauge => spaces.gauge_dim(),
        };
        Self {
            space,
            coeffs: vec![0.0; n],
        }
    }
}

/// Nodal interpolant of a vector field into X_h.
pub fn interpolate_velocity(spaces: &SpacePair, f: impl Fn(Point) -> [f64; 2]) -> Vec<f64> {
    let mut out = vec![0.0; spaces.velocity_dim()];
    for (a, &p) in spaces.node_coords.iter().enumerate() {
        let v = f(p);
        out[2 * a] = v[0];
        out[2 * a + 1] = v[1];
    }
    out
}

/// Nodal interpolant of a scalar field into Q_h.
pub fn interpolate_pressure(spaces: &SpacePair, f: impl Fn(Point) -> f64) -> Vec<f64> {
    spaces.mesh().vertices.iter().map(|&p| f(p)).collect()
}

/// Velocity value at barycentric point `l` of triangle `t`.
pub fn velocity_at(spaces: &SpacePair, u: &[f64], t: usize, l: [f64; 3]) -> [f64; 2] {
    let nodes = &spaces.triangle_nodes[t];
    let phi = p2_values(l);
    let mut v = [0.0; 2];
    for a in 0..6 {
        v[0] += phi[a] * u[2 * nodes[a]];
        v[1] += phi[a] * u[2 * nodes[a] + 1];
    }
    v
}

/// Velocity gradient `[[∂x u₁, ∂y u₁], [∂x u₂, ∂y u₂]]` at barycentric point `l`.
pub fn velocity_gradient_at(spaces: &SpacePair, u: &[f64], t: usize, l: [f64; 3]) -> [[f64; 2]; 2] {
    let nodes = &spaces.triangle_nodes[t];
    let dphi = p2_gradients(l, &spaces.geometry(t));
    let mut g = [[0.0; 2]; 2];
    for a in 0..6 {
        for c in 0..2 {
            let coef = u[2 * nodes[a] + c];
            g[c][0] += coef * dphi[a][0];
            g[c][1] += coef * dphi[a][1];
        }
    }
    g
}

pub fn pressure_at(spaces: &SpacePair, p: &[f64], t: usize, l: [f64; 3]) -> f64 {
    let v = spaces.mesh().triangles[t];
    l[0] * p[v[0]] + l[1] * p[v[1]] + l[2] * p[v[2]]
}

/// Factored mass matrices for repeated L² projections.
#[derive(Debug)]
pub struct Projector {
    velocity: LinearSolver,
    pressure: LinearSolver,
}

impl Projector {
    pub fn new(ops: &OperatorSet, config: SolverConfig) -> Result<Self> {
        Ok(Self {
            velocity: LinearSolver::spd(&ops.m_u, config)?,
            pressure: LinearSolver::spd(&ops.m_p, config)?,
        })
    }

    /// Π_{X_h} of a vector field.
    pub fn velocity(&self, spaces: &SpacePair, f: impl Fn(Point) -> [f64; 2]) -> Result<DiscreteField> {
        let load = assemble_load(spaces, 0.0, |_, p| f(p));
        let coeffs = self.velocity.solve(&load)?;
        Ok(DiscreteField {
            space: SpaceKind::Velocity,
            coeffs,
        })
    }

    /// Π_{Q_h} of a scalar field.
    pub fn pressure(&self, spaces: &SpacePair, f: impl Fn(Point) -> f64) -> Result<DiscreteField> {
        let load = assemble_scalar_load(spaces, 0.0, |_, p| f(p));
        let coeffs = self.pressure.solve(&load)?;
        Ok(DiscreteField {
            space: SpaceKind::Pressure,
            coeffs,
        })
    }

    /// Π_{Q_h} applied to a precomputed load `(w, z_j)`.
    pub fn pressure_from_load(&self, load: &[f64]) -> Result<Vec<f64>> {
        self.pressure.solve(load)
    }

    pub fn velocity_from_load(&self, load: &[f64]) -> Result<Vec<f64>> {
        self.velocity.solve(load)
    }

    /// The factored pressure mass matrix.
    pub fn pressure_solver(&self) -> &LinearSolver {
        &self.pressure
    }
}

/// One-shot L² projection onto the requested space.
pub fn l2_project_velocity(
    spaces: &SpacePair,
    ops: &OperatorSet,
    f: impl Fn(Point) -> [f64; 2],
    config: SolverConfig,
) -> Result<DiscreteField> {
    let load = assemble_load(spaces, 0.0, |_, p| f(p));
    let coeffs = LinearSolver::spd(&ops.m_u, config)?.solve(&load)?;
    DiscreteField::new(SpaceKind::Velocity, coeffs, spaces)
}

pub fn l2_project_pressure(
    spaces: &SpacePair,
    ops: &OperatorSet,
    f: impl Fn(Point) -> f64,
    config: SolverConfig,
) -> Result<DiscreteField> {
    let load = assemble_scalar_load(spaces, 0.0, |_, p| f(p));
    let coeffs = LinearSolver::spd(&ops.m_p, config)?.solve(&load)?;
    DiscreteField::new(SpaceKind::Pressure, coeffs, spaces)
}
