use std::fmt;
use std::str::FromStr;

use super::element::{p2_gradients, p2_values, TriangleGeometry};
use super::quadrature::{SEGMENT_GAUSS3, TRIANGLE_DEG4};
use super::spaces::SpacePair;
use crate::error::{Error, Result};
use crate::mesh::{BoundaryFacet, Point};
use crate::sparse::CsrMatrix;

/// Which viscous bilinear form the momentum equation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlowForm {
    /// `(1/Re)(∇v, ∇w)`, paired with the open boundary condition.
    Open,
    /// `(2/Re)(ε(v), ε(w))`, paired with the traction boundary condition.
    Traction,
}

impl fmt::Display for FlowForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlowForm::Open => "open",
            FlowForm::Traction => "traction",
        })
    }
}

impl FromStr for FlowForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "open" => Ok(FlowForm::Open),
            "traction" => Ok(FlowForm::Traction),
            other => Err(Error::Config(format!("unknown form '{other}' (expected open|traction)"))),
        }
    }
}

/// Every matrix the schemes need, assembled once per mesh.
///
/// Stiffness matrices carry no `1/Re` factor. Velocity-by-pressure
/// couplings are stored with pressure rows: `b[j][i] = (z_j, div v_i)` and
/// `c_v[j][i] = (v_i, ∇z_j)`; `s[i][j] = ⟨∂ₙz_j, div_Γ v_i⟩_Γ` has velocity
/// rows.
#[derive(Clone, Debug)]
pub struct OperatorSet {
    pub m_u: CsrMatrix,
    pub k_grad: CsrMatrix,
    pub k_eps: CsrMatrix,
    pub g: CsrMatrix,
    pub b: CsrMatrix,
    pub l_p: CsrMatrix,
    pub m_p: CsrMatrix,
    pub h_p: CsrMatrix,
    pub s: CsrMatrix,
    pub c_v: CsrMatrix,
}

impl OperatorSet {
    /// Matrix of `Re·𝒜(·,·)` for the chosen form: `K_grad` (open) or
    /// `2 K_eps` (traction, matching the weak form of `-div(2ε(u))`).
    pub fn form_stiffness(&self, form: FlowForm) -> CsrMatrix {
        match form {
            FlowForm::Open => self.k_grad.clone(),
            FlowForm::Traction => self.k_eps.scaled(2.0),
        }
    }
}

fn pattern(nrows: usize, ncols: usize, blocks: impl Iterator<Item = (Vec<usize>, Vec<usize>)>) -> CsrMatrix {
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); nrows];
    for (r, c) in blocks {
        for &i in &r {
            rows[i].extend_from_slice(&c);
        }
    }
    let mut row_ptr = Vec::with_capacity(nrows + 1);
    let mut col_idx = Vec::new();
    row_ptr.push(0);
    for row in &mut rows {
        row.sort_unstable();
        row.dedup();
        col_idx.extend_from_slice(row);
        row_ptr.push(col_idx.len());
    }
    let nnz = col_idx.len();
    CsrMatrix::from_raw(nrows, ncols, row_ptr, col_idx, vec![0.0; nnz]).expect("pattern is well formed")
}

fn velocity_dofs(nodes: &[usize; 6]) -> Vec<usize> {
    nodes.iter().flat_map(|&a| [2 * a, 2 * a + 1]).collect()
}

/// Assembles the full [`OperatorSet`] with exact quadrature.
pub fn assemble_operators(spaces: &SpacePair) -> OperatorSet {
    let mesh = spaces.mesh();
    let nu = spaces.velocity_dim();
    let np = spaces.pressure_dim();

    let vv = || {
        spaces
            .triangle_nodes
            .iter()
            .map(|n| (velocity_dofs(n), velocity_dofs(n)))
    };
    let pv = || {
        spaces
            .triangle_nodes
            .iter()
            .zip(&mesh.triangles)
            .map(|(n, t)| (t.to_vec(), velocity_dofs(n)))
    };
    let pp = || mesh.triangles.iter().map(|t| (t.to_vec(), t.to_vec()));

    let mut m_u = pattern(nu, nu, vv());
    let mut k_grad = m_u.clone();
    let mut k_eps = m_u.clone();
    let mut g = m_u.clone();
    let mut b = pattern(np, nu, pv());
    let mut c_v = b.clone();
    let mut m_p = pattern(np, np, pp());
    let mut l_p = m_p.clone();

    for (t, nodes) in spaces.triangle_nodes.iter().enumerate() {
        let geo = spaces.geometry(t);
        let verts = mesh.triangles[t];
        // scalar P2 blocks
        let mut mass = [[0.0; 6]; 6];
        let mut dd = [[[[0.0; 6]; 6]; 2]; 2]; // dd[c][d][a][b] = ∫ ∂_c φ_a ∂_d φ_b
        let mut lam_dphi = [[[0.0; 6]; 2]; 3]; // ∫ λ_j ∂_c φ_a
        let mut phi_int = [0.0; 6]; // ∫ φ_a
        for (l, w) in TRIANGLE_DEG4 {
            let wa = w * geo.area;
            let phi = p2_values(l);
            let dphi = p2_gradients(l, &geo);
            for a in 0..6 {
                for bb in 0..6 {
                    mass[a][bb] += wa * phi[a] * phi[bb];
                    for c in 0..2 {
                        for d in 0..2 {
                            dd[c][d][a][bb] += wa * dphi[a][c] * dphi[bb][d];
                        }
                    }
                }
                phi_int[a] += wa * phi[a];
                for j in 0..3 {
                    for c in 0..2 {
                        lam_dphi[j][c][a] += wa * l[j] * dphi[a][c];
                    }
                }
            }
        }
        for a in 0..6 {
            for bb in 0..6 {
                let lap = dd[0][0][a][bb] + dd[1][1][a][bb];
                for c in 0..2 {
                    let i = 2 * nodes[a] + c;
                    let jc = 2 * nodes[bb] + c;
                    m_u.add_to_entry(i, jc, mass[a][bb]);
                    k_grad.add_to_entry(i, jc, lap);
                    for d in 0..2 {
                        let j = 2 * nodes[bb] + d;
                        g.add_to_entry(i, j, dd[c][d][a][bb]);
                        let delta = if c == d { lap } else { 0.0 };
                        k_eps.add_to_entry(i, j, 0.5 * (delta + dd[d][c][a][bb]));
                    }
                }
            }
        }
        for j in 0..3 {
            for a in 0..6 {
                for c in 0..2 {
                    b.add_to_entry(verts[j], 2 * nodes[a] + c, lam_dphi[j][c][a]);
                    c_v.add_to_entry(verts[j], 2 * nodes[a] + c, phi_int[a] * geo.grad_lambda[j][c]);
                }
            }
            for k in 0..3 {
                let gl = geo.grad_lambda;
                let mass_p = geo.area * if j == k { 1.0 / 6.0 } else { 1.0 / 12.0 };
                m_p.add_to_entry(verts[j], verts[k], mass_p);
                l_p.add_to_entry(verts[j], verts[k], geo.area * (gl[j][0] * gl[k][0] + gl[j][1] * gl[k][1]));
            }
        }
    }

    let h_p = CsrMatrix::linear_combination(&[(1.0, &m_p), (1.0, &l_p)]).expect("same shape");
    let s = assemble_surface_divergence(spaces);
    OperatorSet {
        m_u,
        k_grad,
        k_eps,
        g,
        b,
        l_p,
        m_p,
        h_p,
        s,
        c_v,
    }
}

/// `S[i][j] = Σ_facets ∫ (n·∇z_j)(tᵀ(∇v_i)t) ds` with one-sided gradients
/// taken from the owning triangle.
fn assemble_surface_divergence(spaces: &SpacePair) -> CsrMatrix {
    let mesh = spaces.mesh();
    let mut triplets = Vec::new();
    for (facet, fnodes) in mesh.boundary_facets.iter().zip(&spaces.facet_nodes) {
        let geo = spaces.geometry(facet.owner);
        let verts = mesh.triangles[facet.owner];
        let nodes = spaces.triangle_nodes[facet.owner];
        let len = mesh.facet_length(facet);
        let (n, t) = (facet.normal, facet.tangent);
        let dn: [f64; 3] = std::array::from_fn(|j| n[0] * geo.grad_lambda[j][0] + n[1] * geo.grad_lambda[j][1]);
        let mut block = [[0.0; 3]; 6]; // ∫ (t·∇φ_a) ∂ₙλ_j
        for (s, w) in SEGMENT_GAUSS3 {
            let p = lerp(mesh.vertices[facet.edge[0]], mesh.vertices[facet.edge[1]], s);
            let dphi = p2_gradients(geo.barycentric(p), &geo);
            for a in 0..6 {
                let dt = t[0] * dphi[a][0] + t[1] * dphi[a][1];
                for j in 0..3 {
                    block[a][j] += w * len * dt * dn[j];
                }
            }
        }
        for a in 0..6 {
            // nodes off the facet have vanishing trace, hence zero tangential derivative
            if !fnodes.contains(&nodes[a]) {
                continue;
            }
            for c in 0..2 {
                for j in 0..3 {
                    triplets.push((2 * nodes[a] + c, verts[j], t[c] * block[a][j]));
                }
            }
        }
    }
    CsrMatrix::from_triplets(spaces.velocity_dim(), spaces.pressure_dim(), &triplets).expect("indices in range")
}

pub(crate) fn lerp(a: Point, b: Point, s: f64) -> Point {
    [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
}

/// Velocity load vector `∫ f(t,·)·v_i dx`.
pub fn assemble_load<F>(spaces: &SpacePair, t: f64, f: F) -> Vec<f64>
where
    F: Fn(f64, Point) -> [f64; 2],
{
    let mut out = vec![0.0; spaces.velocity_dim()];
    for (tri, nodes) in spaces.triangle_nodes.iter().enumerate() {
        let geo = spaces.geometry(tri);
        for (l, w) in TRIANGLE_DEG4 {
            let val = f(t, geo.map(l));
            let phi = p2_values(l);
            for a in 0..6 {
                let s = w * geo.area * phi[a];
                out[2 * nodes[a]] += s * val[0];
                out[2 * nodes[a] + 1] += s * val[1];
            }
        }
    }
    out
}

/// Boundary load `∫_Γ g(t,·)·v_i ds`; `g` also receives the facet so it can
/// depend on the outward normal.
pub fn assemble_boundary_load<G>(spaces: &SpacePair, t: f64, g: G) -> Vec<f64>
where
    G: Fn(f64, Point, &BoundaryFacet) -> [f64; 2],
{
    let mesh = spaces.mesh();
    let mut out = vec![0.0; spaces.velocity_dim()];
    for (facet, fnodes) in mesh.boundary_facets.iter().zip(&spaces.facet_nodes) {
        let (p0, p1) = (mesh.vertices[facet.edge[0]], mesh.vertices[facet.edge[1]]);
        let len = mesh.facet_length(facet);
        for (s, w) in SEGMENT_GAUSS3 {
            let val = g(t, lerp(p0, p1, s), facet);
            // 1D quadratic Lagrange basis on the facet: start, end, midpoint
            let phi = [(1.0 - s) * (1.0 - 2.0 * s), s * (2.0 * s - 1.0), 4.0 * s * (1.0 - s)];
            for k in 0..3 {
                out[2 * fnodes[k]] += w * len * phi[k] * val[0];
                out[2 * fnodes[k] + 1] += w * len * phi[k] * val[1];
            }
        }
    }
    out
}

/// Scalar load `∫ f(t,·) z_j dx` against the P1 basis.
pub fn assemble_scalar_load<F>(spaces: &SpacePair, t: f64, f: F) -> Vec<f64>
where
    F: Fn(f64, Point) -> f64,
{
    let mesh = spaces.mesh();
    let mut out = vec![0.0; spaces.pressure_dim()];
    for (tri, verts) in mesh.triangles.iter().enumerate() {
        let geo: TriangleGeometry = spaces.geometry(tri);
        for (l, w) in TRIANGLE_DEG4 {
            let val = f(t, geo.map(l));
            for j in 0..3 {
                out[verts[j]] += w * geo.area * l[j] * val;
            }
        }
    }
    out
}
