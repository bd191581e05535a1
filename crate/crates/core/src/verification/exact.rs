use std::f64::consts::PI;

use crate::fem::FlowForm;
use crate::mesh::{BoundaryFacet, Point};
use crate::schemes::{ExactFlow, Forcing};

/// `u = (sin(t+x) sin(t+y), cos(t+x) cos(t+y))`, `p = sin(t+x-y)`.
///
/// `u` is divergence free, so `f` does not depend on the form; the
/// boundary traction does.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExactSolution {
    pub form: FlowForm,
    pub re: f64,
}

impl ExactSolution {
    pub fn new(form: FlowForm, re: f64) -> Self {
        Self { form, re }
    }

    pub fn u(&self, t: f64, x: Point) -> [f64; 2] {
        let (a, b) = (t + x[0], t + x[1]);
        [a.sin() * b.sin(), a.cos() * b.cos()]
    }

    pub fn p(&self, t: f64, x: Point) -> f64 {
        (t + x[0] - x[1]).sin()
    }

    /// `∇u` with `grad[i][j] = ∂_j u_i`.
    pub fn grad_u(&self, t: f64, x: Point) -> [[f64; 2]; 2] {
        let (a, b) = (t + x[0], t + x[1]);
        let (sa, ca, sb, cb) = (a.sin(), a.cos(), b.sin(), b.cos());
        [[ca * sb, sa * cb], [-sa * cb, -ca * sb]]
    }

    pub fn div_u(&self, t: f64, x: Point) -> f64 {
        let g = self.grad_u(t, x);
        g[0][0] + g[1][1]
    }

    pub fn f(&self, t: f64, x: Point) -> [f64; 2] {
        let (a, b) = (t + x[0], t + x[1]);
        let s = (a + b).sin();
        let dp = (t + x[0] - x[1]).cos();
        let nu2 = 2.0 / self.re;
        [
            s + nu2 * a.sin() * b.sin() + dp,
            -s + nu2 * a.cos() * b.cos() - dp,
        ]
    }

    /// Boundary stress `σ n` with `σ = (2/Re)ε(u) - pI` (traction) or
    /// `(1/Re)∇u - pI` (open).
    pub fn g(&self, t: f64, x: Point, n: [f64; 2]) -> [f64; 2] {
        let gu = self.grad_u(t, x);
        let p = self.p(t, x);
        let mut out = [0.0; 2];
        for i in 0..2 {
            for j in 0..2 {
                let s = match self.form {
                    FlowForm::Open => gu[i][j],
                    FlowForm::Traction => gu[i][j] + gu[j][i],
                };
                out[i] += s * n[j] / self.re;
            }
            out[i] -= p * n[i];
        }
        out
    }
}

impl Forcing for ExactSolution {
    fn body(&self, t: f64, x: Point) -> [f64; 2] {
        self.f(t, x)
    }

    fn traction(&self, t: f64, x: Point, facet: &BoundaryFacet) -> [f64; 2] {
        self.g(t, x, facet.normal)
    }
}

impl ExactFlow for ExactSolution {
    fn velocity(&self, t: f64, x: Point) -> [f64; 2] {
        self.u(t, x)
    }

    fn pressure(&self, t: f64, x: Point) -> f64 {
        self.p(t, x)
    }

    fn velocity_gradient(&self, t: f64, x: Point) -> [[f64; 2]; 2] {
        self.grad_u(t, x)
    }
}

/// Divergence-free flow vanishing on the boundary of the unit square, used
/// by the no-slip equivalence runs: the curl of `cos t · sin²(πx) sin²(πy)`
/// with pressure `sin t · cos(πx) cos(πy)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoSlipSolution {
    pub re: f64,
}

impl NoSlipSolution {
    fn shape(x: Point) -> [f64; 2] {
        let (sx, sy) = ((PI * x[0]).sin(), (PI * x[1]).sin());
        [
            PI * sx * sx * (2.0 * PI * x[1]).sin(),
            -PI * (2.0 * PI * x[0]).sin() * sy * sy,
        ]
    }

    fn laplacian(x: Point) -> [f64; 2] {
        let c = 2.0 * PI.powi(3);
        let (s2x, s2y) = ((2.0 * PI * x[0]).sin(), (2.0 * PI * x[1]).sin());
        let (c2x, c2y) = ((2.0 * PI * x[0]).cos(), (2.0 * PI * x[1]).cos());
        [c * s2y * (2.0 * c2x - 1.0), -c * s2x * (2.0 * c2y - 1.0)]
    }
}

impl Forcing for NoSlipSolution {
    fn body(&self, t: f64, x: Point) -> [f64; 2] {
        let s = Self::shape(x);
        let l = Self::laplacian(x);
        let (px, py) = (PI * x[0], PI * x[1]);
        let grad_p = [-PI * px.sin() * py.cos(), -PI * px.cos() * py.sin()];
        std::array::from_fn(|i| -t.sin() * s[i] - t.cos() * l[i] / self.re + t.sin() * grad_p[i])
    }
}

impl ExactFlow for NoSlipSolution {
    fn velocity(&self, t: f64, x: Point) -> [f64; 2] {
        let s = Self::shape(x);
        [t.cos() * s[0], t.cos() * s[1]]
    }

    fn pressure(&self, t: f64, x: Point) -> f64 {
        t.sin() * (PI * x[0]).cos() * (PI * x[1]).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const H: f64 = 1e-5;

    fn samples(n: usize) -> Vec<(f64, Point)> {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        (0..n)
            .map(|_| (rng.random_range(0.0..1.0), [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]))
            .collect()
    }

    // central differences of a vector field: d[i][j] = ∂_j v_i
    fn fd_grad(v: impl Fn(Point) -> [f64; 2], x: Point) -> [[f64; 2]; 2] {
        let mut d = [[0.0; 2]; 2];
        for j in 0..2 {
            let (mut xp, mut xm) = (x, x);
            xp[j] += H;
            xm[j] -= H;
            let (a, b) = (v(xp), v(xm));
            for i in 0..2 {
                d[i][j] = (a[i] - b[i]) / (2.0 * H);
            }
        }
        d
    }

    /// `u_t - div σ(u, p) - f` evaluated by nested central differences.
    fn momentum_residual(flow: &dyn ExactFlow, stress: impl Fn(f64, Point) -> [[f64; 2]; 2], t: f64, x: Point) -> f64 {
        let a = flow.velocity(t + H, x);
        let b = flow.velocity(t - H, x);
        let f = flow.body(t, x);
        let mut div_sigma = [0.0; 2];
        for j in 0..2 {
            let (mut xp, mut xm) = (x, x);
            xp[j] += H;
            xm[j] -= H;
            let (sp, sm) = (stress(t, xp), stress(t, xm));
            for i in 0..2 {
                div_sigma[i] += (sp[i][j] - sm[i][j]) / (2.0 * H);
            }
        }
        (0..2)
            .map(|i| ((a[i] - b[i]) / (2.0 * H) - div_sigma[i] - f[i]).abs())
            .fold(0.0, f64::max)
    }

    fn sigma(e: &ExactSolution, t: f64, x: Point) -> [[f64; 2]; 2] {
        let g = e.grad_u(t, x);
        let p = e.p(t, x);
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let s = match e.form {
                    FlowForm::Open => g[i][j],
                    FlowForm::Traction => g[i][j] + g[j][i],
                };
                s / e.re - if i == j { p } else { 0.0 }
            })
        })
    }

    #[test]
    fn point_values() {
        let e = ExactSolution::new(FlowForm::Traction, 1.0);
        assert_eq!(e.u(0.0, [0.0, 0.0]), [0.0, 1.0]);
        assert_eq!(e.p(0.0, [0.0, 0.0]), 0.0);
    }

    #[test]
    fn divergence_free() {
        let e = ExactSolution::new(FlowForm::Traction, 1.0);
        for (t, x) in samples(100) {
            assert!(e.div_u(t, x).abs() <= 1e-12);
            let d = fd_grad(|y| e.u(t, y), x);
            assert!((d[0][0] + d[1][1]).abs() < 1e-8);
        }
    }

    #[test]
    fn gradient_matches_differences() {
        let e = ExactSolution::new(FlowForm::Open, 1.0);
        for (t, x) in samples(20) {
            let (g, d) = (e.grad_u(t, x), fd_grad(|y| e.u(t, y), x));
            for i in 0..2 {
                for j in 0..2 {
                    assert!((g[i][j] - d[i][j]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn momentum_residual_is_small() {
        for form in [FlowForm::Open, FlowForm::Traction] {
            for re in [0.1, 1.0, 100.0] {
                let e = ExactSolution::new(form, re);
                let scale = 1.0 + 2.0 / re;
                for (t, x) in samples(100) {
                    let r = momentum_residual(&e, |s, y| sigma(&e, s, y), t, x);
                    assert!(r <= 1e-7 * scale, "{form} Re={re} residual {r}");
                }
            }
        }
    }

    #[test]
    fn fixed_point_f() {
        let e = ExactSolution::new(FlowForm::Traction, 1.0);
        let (t, x) = (0.3, [0.2, 0.7]);
        let r = momentum_residual(&e, |s, y| sigma(&e, s, y), t, x);
        assert!(r <= 1e-8);
    }

    #[test]
    fn traction_matches_stress_on_edge_midpoints() {
        let mesh = crate::mesh::unit_square(4).unwrap();
        for form in [FlowForm::Open, FlowForm::Traction] {
            let e = ExactSolution::new(form, 2.0);
            for f in &mesh.boundary_facets {
                let (a, b) = (mesh.vertices[f.edge[0]], mesh.vertices[f.edge[1]]);
                let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                let t = 0.5;
                let g = e.g(t, mid, f.normal);
                // stress from finite-difference gradients
                let d = fd_grad(|y| e.u(t, y), mid);
                let p = e.p(t, mid);
                for i in 0..2 {
                    let mut s = 0.0;
                    for j in 0..2 {
                        let v = match form {
                            FlowForm::Open => d[i][j],
                            FlowForm::Traction => d[i][j] + d[j][i],
                        };
                        s += v * f.normal[j] / e.re;
                    }
                    s -= p * f.normal[i];
                    assert!((s - g[i]).abs() <= 1e-8, "{form} facet {:?}", f.edge);
                }
            }
        }
    }

    #[test]
    fn no_slip_solution() {
        let e = NoSlipSolution { re: 3.0 };
        for (t, x) in samples(50) {
            let d = fd_grad(|y| e.velocity(t, y), x);
            assert!((d[0][0] + d[1][1]).abs() < 1e-7);
            let r = momentum_residual(
                &e,
                |s, y| {
                    let g = fd_grad(|z| e.velocity(s, z), y);
                    let p = e.pressure(s, y);
                    std::array::from_fn(|i| {
                        std::array::from_fn(|j| g[i][j] / e.re - if i == j { p } else { 0.0 })
                    })
                },
                t,
                x,
            );
            assert!(r < 1e-3, "residual {r}");
        }
        for s in [0.0, 0.3, 1.0] {
            for b in [[s, 0.0], [s, 1.0], [0.0, s], [1.0, s]] {
                let v = e.velocity(0.4, b);
                assert!(v[0].abs() < 1e-14 && v[1].abs() < 1e-14);
            }
        }
    }
}
