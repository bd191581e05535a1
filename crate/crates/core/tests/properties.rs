use proptest::prelude::*;
use traction_split::mesh::build_rect_mesh;
use traction_split::sparse::{dot, CsrMatrix, LinearSolver, SolverConfig};

fn triplets(n: usize) -> impl Strategy<Value = Vec<(usize, usize, f64)>> {
    prop::collection::vec((0..n, 0..n, -1.0..1.0f64), 0..40)
}

/// `Xᵀ X + I` from a random dense factor.
fn spd(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0..1.0f64, n), n).prop_map(move |x| {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| x[k][i] * x[k][j]).sum::<f64>() + f64::from(u8::from(i == j))).collect())
            .collect()
    })
}

proptest! {
    #[test]
    fn csr_matches_dense_accumulation(t in triplets(7), x in prop::collection::vec(-1.0..1.0f64, 7)) {
        let a = CsrMatrix::from_triplets(7, 7, &t).unwrap();
        let mut d = vec![vec![0.0; 7]; 7];
        for &(i, j, v) in &t {
            d[i][j] += v;
        }
        let y = a.matvec(&x).unwrap();
        for i in 0..7 {
            prop_assert!((y[i] - dot(&d[i], &x)).abs() < 1e-12);
        }
        let yt = a.transpose().matvec(&x).unwrap();
        prop_assert_eq!(yt, a.transpose_matvec(&x).unwrap());
    }

    #[test]
    fn direct_and_cg_agree(d in spd(6), b in prop::collection::vec(-1.0..1.0f64, 6)) {
        let a = CsrMatrix::from_dense(&d).unwrap();
        let x = LinearSolver::spd(&a, SolverConfig::default()).unwrap().solve(&b).unwrap();
        let y = LinearSolver::spd(&a, SolverConfig::cg(1e-13).unwrap()).unwrap().solve(&b).unwrap();
        for (p, q) in x.iter().zip(&y) {
            prop_assert!((p - q).abs() < 1e-9);
        }
        let r = a.matvec(&x).unwrap();
        for (p, q) in r.iter().zip(&b) {
            prop_assert!((p - q).abs() < 1e-10);
        }
    }

    #[test]
    fn rectangle_meshes_tile_the_domain(nx in 1usize..9, ny in 1usize..9, w in 0.5..3.0f64, h in 0.5..3.0f64) {
        let mesh = build_rect_mesh(nx, ny, [w, h]).unwrap();
        prop_assert_eq!(mesh.n_vertices(), (nx + 1) * (ny + 1));
        prop_assert_eq!(mesh.n_triangles(), 2 * nx * ny);
        let total: f64 = (0..mesh.n_triangles()).map(|t| mesh.signed_area(t)).sum();
        prop_assert!((0..mesh.n_triangles()).all(|t| mesh.signed_area(t) > 0.0));
        prop_assert!((total - w * h).abs() < 1e-12 * w * h);
        let boundary: f64 = mesh.boundary_facets.iter().map(|f| mesh.facet_length(f)).sum();
        prop_assert!((boundary - 2.0 * (w + h)).abs() < 1e-12);
    }
}
