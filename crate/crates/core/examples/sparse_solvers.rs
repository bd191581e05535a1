//! Direct and conjugate-gradient solves of the H¹ pressure system.
//!
//! cargo run --example sparse_solvers -- [nx]

use std::time::Instant;

use traction_split::fem::{assemble_scalar_load, Discretization};
use traction_split::sparse::{norm2, LinearSolver, SolverConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nx: usize = std::env::args().nth(1).map_or(Ok(64), |s| s.parse())?;
    let disc = Discretization::unit_square(nx)?;
    let a = &disc.ops.h_p;
    let b = assemble_scalar_load(&disc.spaces, 0.0, |_, x| (x[0] * x[1]).sin());

    let mut solutions = Vec::new();
    for (name, cfg) in [("direct", SolverConfig::default()), ("cg", SolverConfig::cg(1e-12)?)] {
        let start = Instant::now();
        let solver = LinearSolver::spd(a, cfg)?;
        let (x, report) = solver.solve_with_report(&b)?;
        println!(
            "{name:>6}: n = {}, {} iterations, relative residual {:.2e}, {:.1} ms",
            a.nrows(),
            report.iterations,
            report.residual,
            start.elapsed().as_secs_f64() * 1e3
        );
        solutions.push(x);
    }
    let diff: Vec<f64> = solutions[0].iter().zip(&solutions[1]).map(|(p, q)| p - q).collect();
    println!("relative difference {:.2e}", norm2(&diff) / norm2(&solutions[0]));
    Ok(())
}
