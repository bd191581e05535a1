//! Structured triangulations of axis-aligned rectangles.
//!
//! Every grid cell is split along its lower-left to upper-right diagonal,
//! giving two counterclockwise triangles per cell. Boundary facets carry a
//! side tag, the outward unit normal, the unit tangent (normal rotated by
//! +90°, so the boundary is traversed counterclockwise) and the index of the
//! triangle that owns them.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Side of the rectangle a boundary facet lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Side::Left => "left",
            Side::Right => "right",
            Side::Bottom => "bottom",
            Side::Top => "top",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFacet {
    /// Vertex indices, ordered along the tangent.
    pub edge: [usize; 2],
    pub tag: Side,
    pub normal: [f64; 2],
    pub tangent: [f64; 2],
    pub owner: usize,
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary_facets: Vec<BoundaryFacet>,
    pub h_max: f64,
    pub h_min: f64,
    extent: [f64; 2],
}

/// Unique edges of a triangulation and the triangle-to-edge incidence.
///
/// Local edge `e` of a triangle joins its local vertices `e` and `(e + 1) % 3`.
#[derive(Clone, Debug)]
pub struct EdgeTable {
    pub edges: Vec<[usize; 2]>,
    pub triangle_edges: Vec<[usize; 3]>,
    /// Number of triangles sharing each edge.
    pub multiplicity: Vec<u8>,
}

/// Builds a structured mesh of `[0, width] x [0, height]` with `nx * ny` cells.
pub fn build_rect_mesh(nx: usize, ny: usize, extent: [f64; 2]) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidArgument(format!(
            "cell counts must be positive, got nx={nx}, ny={ny}"
        )));
    }
    let [width, height] = extent;
    if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "rectangle extent must be positive, got {width} x {height}"
        )));
    }
    let dx = width / nx as f64;
    let dy = height / ny as f64;
    let vid = |i: usize, j: usize| j * (nx + 1) + i;

    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        // snap the last row/column onto the exact extent
        let y = if j == ny { height } else { j as f64 * dy };
        for i in 0..=nx {
            let x = if i == nx { width } else { i as f64 * dx };
            vertices.push([x, y]);
        }
    }

    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (v00, v10, v01, v11) = (vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1));
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    let lower = |i: usize, j: usize| 2 * (j * nx + i);
    let upper = |i: usize, j: usize| 2 * (j * nx + i) + 1;

    let mut boundary_facets = Vec::with_capacity(2 * (nx + ny));
    for i in 0..nx {
        boundary_facets.push(BoundaryFacet {
            edge: [vid(i, 0), vid(i + 1, 0)],
            tag: Side::Bottom,
            normal: [0.0, -1.0],
            tangent: [1.0, 0.0],
            owner: lower(i, 0),
        });
    }
    for j in 0..ny {
        boundary_facets.push(BoundaryFacet {
            edge: [vid(nx, j), vid(nx, j + 1)],
            tag: Side::Right,
            normal: [1.0, 0.0],
            tangent: [0.0, 1.0],
            owner: lower(nx - 1, j),
        });
    }
    for i in (0..nx).rev() {
        boundary_facets.push(BoundaryFacet {
            edge: [vid(i + 1, ny), vid(i, ny)],
            tag: Side::Top,
            normal: [0.0, 1.0],
            tangent: [-1.0, 0.0],
            owner: upper(i, ny - 1),
        });
    }
    for j in (0..ny).rev() {
        boundary_facets.push(BoundaryFacet {
            edge: [vid(0, j + 1), vid(0, j)],
            tag: Side::Left,
            normal: [-1.0, 0.0],
            tangent: [0.0, -1.0],
            owner: upper(0, j),
        });
    }

    let mut mesh = Mesh {
        vertices,
        triangles,
        boundary_facets,
        h_max: 0.0,
        h_min: 0.0,
        extent,
    };
    let (h_max, h_min) = mesh_size(&mesh);
    mesh.h_max = h_max;
    mesh.h_min = h_min;
    Ok(mesh)
}

/// Unit square with `n x n` cells.
pub fn unit_square(n: usize) -> Result<Mesh> {
    build_rect_mesh(n, n, [1.0, 1.0])
}

/// Returns `(h_max, h_min)`: the largest triangle diameter and the shortest edge.
pub fn mesh_size(mesh: &Mesh) -> (f64, f64) {
    let mut h_max: f64 = 0.0;
    let mut h_min = f64::INFINITY;
    for tri in &mesh.triangles {
        for e in 0..3 {
            let len = dist(mesh.vertices[tri[e]], mesh.vertices[tri[(e + 1) % 3]]);
            h_max = h_max.max(len);
            h_min = h_min.min(len);
        }
    }
    (h_max, h_min)
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl Mesh {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn extent(&self) -> [f64; 2] {
        self.extent
    }

    pub fn area(&self) -> f64 {
        self.extent[0] * self.extent[1]
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * (self.extent[0] + self.extent[1])
    }

    /// Signed area of triangle `t` (positive for counterclockwise ordering).
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangle_points(t);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [i, j, k] = self.triangles[t];
        [self.vertices[i], self.vertices[j], self.vertices[k]]
    }

    pub fn facet_length(&self, facet: &BoundaryFacet) -> f64 {
        dist(self.vertices[facet.edge[0]], self.vertices[facet.edge[1]])
    }

    /// True when `p` lies in the closed rectangle.
    pub fn contains(&self, p: Point) -> bool {
        p[0] >= 0.0 && p[1] >= 0.0 && p[0] <= self.extent[0] && p[1] <= self.extent[1]
    }

    /// Marks vertices that lie on the boundary.
    pub fn boundary_vertex_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n_vertices()];
        for f in &self.boundary_facets {
            mask[f.edge[0]] = true;
            mask[f.edge[1]] = true;
        }
        mask
    }

    pub fn edges(&self) -> EdgeTable {
        let mut lookup: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut multiplicity = Vec::new();
        let mut triangle_edges = Vec::with_capacity(self.triangles.len());
        for tri in &self.triangles {
            let mut local = [0usize; 3];
            for (e, slot) in local.iter_mut().enumerate() {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let id = *lookup.entry(key).or_insert_with(|| {
                    edges.push([key.0, key.1]);
                    multiplicity.push(0);
                    edges.len() - 1
                });
                multiplicity[id] += 1;
                *slot = id;
            }
            triangle_edges.push(local);
        }
        EdgeTable {
            edges,
            triangle_edges,
            multiplicity,
        }
    }

    /// Writes the plain-text node/element listing: one vertex per line `x y`,
    /// one triangle per line `i j k`, one facet per line `i j tag`. Each block
    /// is preceded by a `# <name> <count>` line.
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# vertices {}", self.vertices.len())?;
        for v in &self.vertices {
            writeln!(out, "{:.17e} {:.17e}", v[0], v[1])?;
        }
        writeln!(out, "# triangles {}", self.triangles.len())?;
        for t in &self.triangles {
            writeln!(out, "{} {} {}", t[0], t[1], t[2])?;
        }
        writeln!(out, "# facets {}", self.boundary_facets.len())?;
        for f in &self.boundary_facets {
            writeln!(out, "{} {} {}", f.edge[0], f.edge[1], f.tag)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell_counts() {
        let m = unit_square(1).unwrap();
        assert_eq!(m.n_triangles(), 2);
        assert_eq!(m.n_vertices(), 4);
        assert_eq!(m.boundary_facets.len(), 4);
        assert!((m.h_max - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_counts() {
        let m = unit_square(2).unwrap();
        assert_eq!(m.n_triangles(), 8);
        assert_eq!(m.n_vertices(), 9);
        assert_eq!(m.boundary_facets.len(), 8);
    }

    #[test]
    fn fine_mesh_size() {
        let m = unit_square(64).unwrap();
        assert_eq!(m.h_min, 0.015625);
    }

    #[test]
    fn channel_mesh_size() {
        let m = build_rect_mesh(22, 4, [2.2, 0.41]).unwrap();
        assert!((m.h_min - 0.1).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(build_rect_mesh(0, 3, [1.0, 1.0]), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_rect_mesh(3, 0, [1.0, 1.0]), Err(Error::InvalidArgument(_))));
        assert!(build_rect_mesh(2, 2, [-1.0, 1.0]).is_err());
        assert!(build_rect_mesh(2, 2, [1.0, 0.0]).is_err());
    }

    #[test]
    fn edge_multiplicities() {
        let m = build_rect_mesh(3, 5, [1.5, 0.7]).unwrap();
        let table = m.edges();
        let boundary: Vec<_> = table
            .edges
            .iter()
            .zip(&table.multiplicity)
            .filter(|(_, &c)| c == 1)
            .map(|(e, _)| *e)
            .collect();
        assert!(table.multiplicity.iter().all(|&c| c == 1 || c == 2));
        assert_eq!(boundary.len(), m.boundary_facets.len());
        for f in &m.boundary_facets {
            let key = [f.edge[0].min(f.edge[1]), f.edge[0].max(f.edge[1])];
            assert!(boundary.contains(&key));
            assert!(m.triangles[f.owner].contains(&f.edge[0]));
            assert!(m.triangles[f.owner].contains(&f.edge[1]));
        }
        // Euler: V - E + F = 1 for a disc
        assert_eq!(m.n_vertices() + m.n_triangles(), table.edges.len() + 1);
    }

    #[test]
    fn text_dump_layout() {
        let m = unit_square(1).unwrap();
        let mut buf = Vec::new();
        m.write_text(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "# vertices 4");
        assert_eq!(lines[5], "# triangles 2");
        assert_eq!(lines[6], "0 1 3");
        assert_eq!(lines[8], "# facets 4");
        assert_eq!(lines[9], "0 1 bottom");
        assert_eq!(lines.len(), 13);
    }
}
