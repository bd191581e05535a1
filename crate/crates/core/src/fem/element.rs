//! Quadratic (P2) and linear (P1) Lagrange bases on a single triangle.
//!
//! Local P2 nodes: 0..3 are the vertices, 3 is the midpoint of edge (0,1),
//! 4 of edge (1,2), 5 of edge (2,0).

use crate::mesh::Point;

#[derive(Clone, Copy, Debug)]
pub struct TriangleGeometry {
    pub points: [Point; 3],
    pub area: f64,
    /// Gradients of the barycentric coordinates (constant on the triangle).
    pub grad_lambda: [[f64; 2]; 3],
}

impl TriangleGeometry {
    pub fn new(points: [Point; 3]) -> Self {
        let [p0, p1, p2] = points;
        let twice = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
        let inv = 1.0 / twice;
        let grad_lambda = [
            [(p1[1] - p2[1]) * inv, (p2[0] - p1[0]) * inv],
            [(p2[1] - p0[1]) * inv, (p0[0] - p2[0]) * inv],
            [(p0[1] - p1[1]) * inv, (p1[0] - p0[0]) * inv],
        ];
        Self {
            points,
            area: 0.5 * twice,
            grad_lambda,
        }
    }

    pub fn map(&self, bary: [f64; 3]) -> Point {
        let [p0, p1, p2] = self.points;
        [
            bary[0] * p0[0] + bary[1] * p1[0] + bary[2] * p2[0],
            bary[0] * p0[1] + bary[1] * p1[1] + bary[2] * p2[1],
        ]
    }

    /// Barycentric coordinates of `p` (may be negative outside the triangle).
    pub fn barycentric(&self, p: Point) -> [f64; 3] {
        let [p0, _, _] = self.points;
        let g = &self.grad_lambda;
        let d = [p[0] - p0[0], p[1] - p0[1]];
        let l1 = g[1][0] * d[0] + g[1][1] * d[1];
        let l2 = g[2][0] * d[0] + g[2][1] * d[1];
        [1.0 - l1 - l2, l1, l2]
    }
}

pub const P2_EDGES: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

pub fn p2_values(l: [f64; 3]) -> [f64; 6] {
    [
        l[0] * (2.0 * l[0] - 1.0),
        l[1] * (2.0 * l[1] - 1.0),
        l[2] * (2.0 * l[2] - 1.0),
        4.0 * l[0] * l[1],
        4.0 * l[1] * l[2],
        4.0 * l[2] * l[0],
    ]
}

pub fn p2_gradients(l: [f64; 3], geo: &TriangleGeometry) -> [[f64; 2]; 6] {
    let g = &geo.grad_lambda;
    let mut out = [[0.0; 2]; 6];
    for i in 0..3 {
        let s = 4.0 * l[i] - 1.0;
        out[i] = [s * g[i][0], s * g[i][1]];
    }
    for (k, &(i, j)) in P2_EDGES.iter().enumerate() {
        out[3 + k] = [
            4.0 * (l[i] * g[j][0] + l[j] * g[i][0]),
            4.0 * (l[i] * g[j][1] + l[j] * g[i][1]),
        ];
    }
    out
}

pub fn p1_values(l: [f64; 3]) -> [f64; 3] {
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p2_is_nodal() {
        let nodes = [
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.5, 0.5, 0.0],
            [0.0, 0.5, 0.5],
            [0.5, 0.0, 0.5],
        ];
        for (a, l) in nodes.iter().enumerate() {
            let v = p2_values(*l);
            for (b, vb) in v.iter().enumerate() {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((vb - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let geo = TriangleGeometry::new([[0.1, 0.2], [0.9, 0.35], [0.3, 0.8]]);
        let p = geo.map([0.2, 0.5, 0.3]);
        let grads = p2_gradients(geo.barycentric(p), &geo);
        let h = 1e-6;
        for a in 0..6 {
            for d in 0..2 {
                let mut pp = p;
                let mut pm = p;
                pp[d] += h;
                pm[d] -= h;
                let fd = (p2_values(geo.barycentric(pp))[a] - p2_values(geo.barycentric(pm))[a]) / (2.0 * h);
                assert!((fd - grads[a][d]).abs() < 1e-8);
            }
        }
    }
}
