//! Taylor-Hood P2/P1 spaces on triangles and assembly of every bilinear
//! form and load used by the time-stepping schemes.

mod assembly;
pub mod element;
mod field;
pub mod quadrature;
mod spaces;

use std::sync::Arc;

pub use assembly::{
    assemble_boundary_load, assemble_load, assemble_operators, assemble_scalar_load, FlowForm, OperatorSet,
};
pub use field::{
    interpolate_pressure, interpolate_velocity, l2_project_pressure, l2_project_velocity, pressure_at,
    velocity_at, velocity_gradient_at, DiscreteField, Projector, SpaceKind,
};
pub use spaces::{build_spaces, restrict_to_gauge, Restriction, SpacePair};

use crate::error::Result;
use crate::mesh::{build_rect_mesh, Mesh};

/// Mesh, spaces and assembled operators bundled together.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub spaces: SpacePair,
    pub ops: Arc<OperatorSet>,
}

impl Discretization {
    pub fn new(mesh: Mesh) -> Self {
        let spaces = build_spaces(Arc::new(mesh));
        let ops = Arc::new(assemble_operators(&spaces));
        Self { spaces, ops }
    }

    pub fn unit_square(n: usize) -> Result<Self> {
        Ok(Self::new(build_rect_mesh(n, n, [1.0, 1.0])?))
    }

    pub fn mesh(&self) -> &Mesh {
        self.spaces.mesh()
    }
}

#[cfg(test)]
mod tests;
