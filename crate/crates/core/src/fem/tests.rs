use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::quadrature::TRIANGLE_DEG4;
use super::*;
use crate::sparse::{dot, SolverConfig};

fn disc(n: usize) -> Discretization {
    Discretization::unit_square(n).unwrap()
}

fn random_vec(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

#[test]
fn symmetric_operators() {
    let d = disc(6);
    let o = &d.ops;
    for (name, m) in [
        ("m_u", &o.m_u),
        ("k_grad", &o.k_grad),
        ("k_eps", &o.k_eps),
        ("g", &o.g),
        ("m_p", &o.m_p),
        ("l_p", &o.l_p),
        ("h_p", &o.h_p),
    ] {
        assert!(m.max_asymmetry() <= 1e-13, "{name} asymmetry {}", m.max_asymmetry());
    }
}

#[test]
fn shapes() {
    let d = disc(3);
    let (nu, np) = (d.spaces.velocity_dim(), d.spaces.pressure_dim());
    let o = &d.ops;
    assert_eq!((o.b.nrows(), o.b.ncols()), (np, nu));
    assert_eq!((o.c_v.nrows(), o.c_v.ncols()), (np, nu));
    assert_eq!((o.s.nrows(), o.s.ncols()), (nu, np));
    assert_eq!((o.g.nrows(), o.m_u.ncols()), (nu, nu));
}

// pointwise |div v|² ≤ 2|ε(v)|² ≤ 2|∇v|², so the same holds for the matrices
#[test]
fn korn_ordering() {
    let d = disc(4);
    let o = &d.ops;
    for seed in 0..5 {
        let v = random_vec(d.spaces.velocity_dim(), seed);
        let div = o.g.bilinear(&v, &v).unwrap();
        let eps = o.k_eps.bilinear(&v, &v).unwrap();
        let grad = o.k_grad.bilinear(&v, &v).unwrap();
        assert!(div >= -1e-12);
        assert!(div <= 2.0 * eps + 1e-10, "{div} vs {eps}");
        assert!(eps <= grad + 1e-10, "{eps} vs {grad}");
    }
}

#[test]
fn divergence_of_linear_field() {
    let d = disc(5);
    let v = interpolate_velocity(&d.spaces, |p| [p[0], p[1]]);
    assert!((d.ops.g.bilinear(&v, &v).unwrap() - 4.0).abs() < 1e-12);
    let ones = vec![1.0; d.spaces.pressure_dim()];
    let w = interpolate_velocity(&d.spaces, |p| [p[0], 0.0]);
    assert!((d.ops.b.bilinear(&ones, &w).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn grad_div_matches_direct_quadrature() {
    let d = disc(3);
    let v = random_vec(d.spaces.velocity_dim(), 11);
    let mut direct = 0.0;
    for t in 0..d.mesh().n_triangles() {
        let area = d.spaces.geometry(t).area;
        for (l, w) in TRIANGLE_DEG4 {
            let g = velocity_gradient_at(&d.spaces, &v, t, l);
            direct += w * area * (g[0][0] + g[1][1]).powi(2);
        }
    }
    let assembled = d.ops.g.bilinear(&v, &v).unwrap();
    assert!((assembled - direct).abs() <= 1e-12 * direct.max(1.0));
}

#[test]
fn laplacian_annihilates_constants() {
    let d = disc(7);
    let ones = vec![1.0; d.spaces.pressure_dim()];
    let r = d.ops.l_p.matvec(&ones).unwrap();
    assert!(r.iter().all(|x| x.abs() < 1e-12));
}

// (v, ∇z) = -(div v, z) for v vanishing on the boundary
#[test]
fn gradient_is_adjoint_of_divergence_on_no_slip_fields() {
    let d = disc(4);
    let r = d.spaces.no_slip_restriction();
    let v = r.prolong(&random_vec(r.free_dim(), 3));
    let cv = d.ops.c_v.matvec(&v).unwrap();
    let bv = d.ops.b.matvec(&v).unwrap();
    for (a, b) in cv.iter().zip(&bv) {
        assert!((a + b).abs() < 1e-12);
    }
}

// v = (x², xy), z = x: only the right side contributes, with tᵀ∇v t = x = 1
#[test]
fn surface_divergence_oracle() {
    let d = disc(4);
    let v = interpolate_velocity(&d.spaces, |p| [p[0] * p[0], p[0] * p[1]]);
    let zx = interpolate_pressure(&d.spaces, |p| p[0]);
    let zy = interpolate_pressure(&d.spaces, |p| p[1]);
    let sx = dot(&v, &d.ops.s.matvec(&zx).unwrap());
    let sy = dot(&v, &d.ops.s.matvec(&zy).unwrap());
    assert!((sx - 1.0).abs() < 1e-12, "{sx}");
    assert!(sy.abs() < 1e-12, "{sy}");
}

#[test]
fn load_vectors_integrate_constants() {
    let d = disc(3);
    let f = assemble_load(&d.spaces, 0.0, |_, _| [1.0, 0.0]);
    let fx: f64 = f.iter().step_by(2).sum();
    let fy: f64 = f.iter().skip(1).step_by(2).sum();
    assert!((fx - 1.0).abs() < 1e-13);
    assert!(fy.abs() < 1e-13);
    let g = assemble_boundary_load(&d.spaces, 0.0, |_, _, _| [0.0, 1.0]);
    let gy: f64 = g.iter().skip(1).step_by(2).sum();
    assert!((gy - 4.0).abs() < 1e-13);
    let q = assemble_scalar_load(&d.spaces, 0.0, |_, _| 2.0);
    assert!((q.iter().sum::<f64>() - 2.0).abs() < 1e-13);
}

#[test]
fn projection_reproduces_discrete_functions() {
    let d = disc(3);
    let proj = Projector::new(&d.ops, SolverConfig::default()).unwrap();
    let u = proj.velocity(&d.spaces, |p| [p[0] * p[1], 1.0 - p[0] * p[0]]).unwrap();
    let exact = interpolate_velocity(&d.spaces, |p| [p[0] * p[1], 1.0 - p[0] * p[0]]);
    for (a, b) in u.coeffs.iter().zip(&exact) {
        assert!((a - b).abs() < 1e-11);
    }
    let p = proj.pressure(&d.spaces, |p| 2.0 * p[0] - p[1]).unwrap();
    let pe = interpolate_pressure(&d.spaces, |p| 2.0 * p[0] - p[1]);
    for (a, b) in p.coeffs.iter().zip(&pe) {
        assert!((a - b).abs() < 1e-11);
    }
}

#[test]
fn projection_error_is_third_order() {
    let f = |p: [f64; 2]| [(3.0 * p[0]).sin() * p[1].exp(), (2.0 * p[1]).cos()];
    let err = |n: usize| {
        let d = disc(n);
        let u = l2_project_velocity(&d.spaces, &d.ops, f, SolverConfig::default()).unwrap();
        let mut e2 = 0.0;
        for t in 0..d.mesh().n_triangles() {
            let geo = d.spaces.geometry(t);
            for (l, w) in TRIANGLE_DEG4 {
                let uh = velocity_at(&d.spaces, &u.coeffs, t, l);
                let ue = f(geo.map(l));
                e2 += w * geo.area * ((uh[0] - ue[0]).powi(2) + (uh[1] - ue[1]).powi(2));
            }
        }
        e2.sqrt()
    };
    let (e1, e2) = (err(8), err(16));
    let rate = (e1 / e2).log2();
    assert!(rate > 2.8, "rate {rate}");
}

#[test]
fn gauge_laplacian_on_two_by_two() {
    let d = disc(2);
    let l = restrict_to_gauge(&d.spaces, &d.ops.l_p);
    assert_eq!((l.nrows(), l.ncols()), (1, 1));
    assert!((l.get(0, 0) - 4.0).abs() < 1e-13);
}

#[test]
fn pressure_evaluation_is_linear() {
    let d = disc(2);
    let p = interpolate_pressure(&d.spaces, |p| 1.0 + p[0] - 3.0 * p[1]);
    let geo = d.spaces.geometry(5);
    let l = [0.2, 0.3, 0.5];
    let x = geo.map(l);
    assert!((pressure_at(&d.spaces, &p, 5, l) - (1.0 + x[0] - 3.0 * x[1])).abs() < 1e-14);
}
