use std::sync::Arc;

use super::element::TriangleGeometry;
use crate::mesh::{Mesh, Point};
use crate::sparse::CsrMatrix;

/// Taylor-Hood pair on a triangulation: continuous vector P2 velocities,
/// continuous P1 pressures, and the gauge space of P1 functions with zero
/// trace.
///
/// Quadratic nodes are numbered vertices first, then edge midpoints.
/// Velocity degrees of freedom are interleaved: node `a`, component `c`
/// lives at `2a + c`.
#[derive(Clone, Debug)]
pub struct SpacePair {
    mesh: Arc<Mesh>,
    n_edges: usize,
    /// Quadratic node ids of every triangle, local ordering of [`super::element`].
    pub triangle_nodes: Vec<[usize; 6]>,
    /// Coordinates of every quadratic node.
    pub node_coords: Vec<Point>,
    /// Quadratic nodes lying on the boundary.
    pub boundary_nodes: Vec<bool>,
    /// Per boundary facet: (start vertex, end vertex, midpoint node).
    pub facet_nodes: Vec<[usize; 3]>,
    /// Restriction of Q_h onto the gauge space M_h.
    pub gauge: Restriction,
}

pub fn build_spaces(mesh: Arc<Mesh>) -> SpacePair {
    let nv = mesh.n_vertices();
    let table = mesh.edges();
    let n_edges = table.edges.len();
    let triangle_nodes: Vec<[usize; 6]> = mesh
        .triangles
        .iter()
        .zip(&table.triangle_edges)
        .map(|(t, e)| [t[0], t[1], t[2], nv + e[0], nv + e[1], nv + e[2]])
        .collect();
    let mut node_coords = mesh.vertices.clone();
    for e in &table.edges {
        let (a, b) = (mesh.vertices[e[0]], mesh.vertices[e[1]]);
        node_coords.push([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]);
    }

    let mut edge_of = std::collections::HashMap::with_capacity(n_edges);
    for (id, e) in table.edges.iter().enumerate() {
        edge_of.insert((e[0], e[1]), id);
    }
    let vertex_mask = mesh.boundary_vertex_mask();
    let mut boundary_nodes = vec![false; nv + n_edges];
    boundary_nodes[..nv].copy_from_slice(&vertex_mask);
    let facet_nodes = mesh
        .boundary_facets
        .iter()
        .map(|f| {
            let key = (f.edge[0].min(f.edge[1]), f.edge[0].max(f.edge[1]));
            let mid = nv + edge_of[&key];
            boundary_nodes[mid] = true;
            [f.edge[0], f.edge[1], mid]
        })
        .collect();

    SpacePair {
        gauge: Restriction::from_mask(&vertex_mask),
        mesh,
        n_edges,
        triangle_nodes,
        node_coords,
        boundary_nodes,
        facet_nodes,
    }
}

impl SpacePair {
    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn mesh_arc(&self) -> Arc<Mesh> {
        Arc::clone(&self.mesh)
    }

    pub fn n_nodes(&self) -> usize {
        self.node_coords.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn velocity_dim(&self) -> usize {
        2 * self.n_nodes()
    }

    pub fn pressure_dim(&self) -> usize {
        self.mesh.n_vertices()
    }

    pub fn gauge_dim(&self) -> usize {
        self.gauge.free_dim()
    }

    #[inline]
    pub fn velocity_dof(node: usize, component: usize) -> usize {
        2 * node + component
    }

    pub fn geometry(&self, t: usize) -> TriangleGeometry {
        TriangleGeometry::new(self.mesh.triangle_points(t))
    }

    /// Restriction removing every velocity degree of freedom on the boundary
    /// (no-slip subspace).
    pub fn no_slip_restriction(&self) -> Restriction {
        let mask: Vec<bool> = (0..self.velocity_dim()).map(|d| self.boundary_nodes[d / 2]).collect();
        Restriction::from_mask(&mask)
    }
}

/// Removes a masked set of degrees of freedom and prolongs by zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Restriction {
    constrained: Vec<bool>,
    free: Vec<usize>,
}

impl Restriction {
    /// `mask[i] == true` marks a constrained (removed) degree of freedom.
    pub fn from_mask(mask: &[bool]) -> Self {
        Self {
            constrained: mask.to_vec(),
            free: (0..mask.len()).filter(|&i| !mask[i]).collect(),
        }
    }

    pub fn full_dim(&self) -> usize {
        self.constrained.len()
    }

    pub fn free_dim(&self) -> usize {
        self.free.len()
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn is_constrained(&self, i: usize) -> bool {
        self.constrained[i]
    }

    pub fn mask(&self) -> &[bool] {
        &self.constrained
    }

    pub fn restrict_vector(&self, v: &[f64]) -> Vec<f64> {
        self.free.iter().map(|&i| v[i]).collect()
    }

    pub fn prolong(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.full_dim()];
        for (&i, &x) in self.free.iter().zip(v) {
            out[i] = x;
        }
        out
    }

    /// Keeps free rows and free columns of a square operator.
    pub fn restrict_matrix(&self, a: &CsrMatrix) -> CsrMatrix {
        a.submatrix(&self.free, &self.free)
    }

    /// Keeps the free rows of an operator, all columns.
    pub fn restrict_rows(&self, a: &CsrMatrix) -> CsrMatrix {
        let cols: Vec<usize> = (0..a.ncols()).collect();
        a.submatrix(&self.free, &cols)
    }

    /// Keeps the free columns of an operator, all rows.
    pub fn restrict_cols(&self, a: &CsrMatrix) -> CsrMatrix {
        let rows: Vec<usize> = (0..a.nrows()).collect();
        a.submatrix(&rows, &self.free)
    }
}

/// Restricts a square Q_h operator (or, via the restriction, a vector) to
/// the gauge space M_h.
pub fn restrict_to_gauge(spaces: &SpacePair, a: &CsrMatrix) -> CsrMatrix {
    spaces.gauge.restrict_matrix(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::unit_square;

    fn spaces(n: usize) -> SpacePair {
        build_spaces(Arc::new(unit_square(n).unwrap()))
    }

    #[test]
    fn dimensions_single_cell() {
        let s = spaces(1);
        assert_eq!(s.n_edges(), 5);
        assert_eq!(s.velocity_dim(), 18);
        assert_eq!(s.pressure_dim(), 4);
        assert_eq!(s.gauge_dim(), 0);
    }

    #[test]
    fn gauge_dimensions() {
        assert_eq!(spaces(2).gauge_dim(), 1);
        assert_eq!(spaces(64).gauge_dim(), 3969);
    }

    #[test]
    fn gauge_mask_marks_boundary_vertices() {
        let s = spaces(5);
        for (v, p) in s.mesh().vertices.iter().enumerate() {
            let on_boundary = p[0] == 0.0 || p[1] == 0.0 || p[0] == 1.0 || p[1] == 1.0;
            assert_eq!(s.gauge.is_constrained(v), on_boundary);
        }
    }

    #[test]
    fn boundary_nodes_cover_facets() {
        let s = spaces(3);
        let count = s.boundary_nodes.iter().filter(|&&b| b).count();
        // 12 boundary vertices + 12 boundary midpoints
        assert_eq!(count, 24);
        for (i, p) in s.node_coords.iter().enumerate() {
            let on = p[0].abs() < 1e-14 || p[1].abs() < 1e-14 || (p[0] - 1.0).abs() < 1e-14 || (p[1] - 1.0).abs() < 1e-14;
            assert_eq!(on, s.boundary_nodes[i]);
        }
    }

    #[test]
    fn restrict_then_prolong_interior_vector() {
        let s = spaces(4);
        let v: Vec<f64> = (0..s.pressure_dim())
            .map(|i| if s.gauge.is_constrained(i) { 0.0 } else { i as f64 + 0.5 })
            .collect();
        assert_eq!(s.gauge.prolong(&s.gauge.restrict_vector(&v)), v);
    }
}
