use crate::mesh::{BoundaryFacet, Point};

/// Right-hand sides of the momentum equation and traction condition.
pub trait Forcing: Sync {
    fn body(&self, t: f64, x: Point) -> [f64; 2];

    fn traction(&self, _t: f64, _x: Point, _facet: &BoundaryFacet) -> [f64; 2] {
        [0.0, 0.0]
    }

    /// `true` only when both `f` and `g` vanish identically; lets the step
    /// skip load assembly and enables the energy monitor.
    fn is_zero(&self) -> bool {
        false
    }
}

/// A problem with known velocity and pressure, used for initialization.
pub trait ExactFlow: Forcing {
    fn velocity(&self, t: f64, x: Point) -> [f64; 2];
    fn pressure(&self, t: f64, x: Point) -> f64;

    /// `grad[i][j] = ∂_j u_i`; defaults to fourth-order central differences.
    fn velocity_gradient(&self, t: f64, x: Point) -> [[f64; 2]; 2] {
        const H: f64 = 1e-3;
        let mut g = [[0.0; 2]; 2];
        for j in 0..2 {
            let at = |s: f64| {
                let mut y = x;
                y[j] += s * H;
                self.velocity(t, y)
            };
            let (p1, m1, p2, m2) = (at(1.0), at(-1.0), at(2.0), at(-2.0));
            for i in 0..2 {
                g[i][j] = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * H);
            }
        }
        g
    }
}

/// `f = 0`, `g = 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoForcing;

impl Forcing for NoForcing {
    fn body(&self, _t: f64, _x: Point) -> [f64; 2] {
        [0.0, 0.0]
    }

    fn is_zero(&self) -> bool {
        true
    }
}
