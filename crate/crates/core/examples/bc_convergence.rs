//! Temporal convergence of the boundary-correction scheme, with the mesh
//! condition reported for every step size.
//!
//! cargo run --example bc_convergence -- [Re] [m] [nx]

use traction_split::fem::{Discretization, FlowForm};
use traction_split::schemes::{SchemeKind, SchemeParams};
use traction_split::sparse::SolverConfig;
use traction_split::verification::{convergence_study, estimate_kappa, ConvergenceSetup, ErrorNorms};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let re: f64 = args.first().map_or(Ok(1.0), |s| s.parse())?;
    let m: usize = args.get(1).map_or(Ok(2), |s| s.parse())?;
    let nx: usize = args.get(2).map_or(Ok(64), |s| s.parse())?;

    let disc = Discretization::unit_square(nx)?;
    let kappa = estimate_kappa(&disc.ops, FlowForm::Traction, 1e-10)?;
    let params = SchemeParams {
        scheme: SchemeKind::BoundaryCorrection,
        form: FlowForm::Traction,
        m,
        re,
        kappa: Some(kappa),
        ..Default::default()
    };
    let taus = vec![0.1, 0.05, 0.025, 0.0125];
    let h = disc.mesh().h_min;
    let table = convergence_study(&ConvergenceSetup {
        params: params.clone(),
        nx,
        taus: taus.clone(),
        jobs: 1,
        solver: SolverConfig::default(),
    })?;

    println!("boundary correction m={m} Re={re} nx={nx} kappa={kappa:.6}");
    println!("{:>8} {} {:>10}", "tau", ErrorNorms::NAMES.map(|n| format!("{n:>18}")).join(""), "tau<=Re h^2");
    let eoc = table.eoc();
    for (i, row) in table.rows.iter().enumerate() {
        print!("{:>8.5}", row.tau);
        for v in row.errors.as_array() {
            print!(" {v:>17.6e}");
        }
        print!(" {:>10}", SchemeParams { tau: row.tau, ..params.clone() }.mesh_condition(h));
        if i > 0 {
            print!("   eoc:");
            for r in eoc[i - 1] {
                print!(" {:.3}", r.unwrap_or(f64::NAN));
            }
        }
        println!();
        if let Some(f) = &row.failure {
            println!("  failed: {f}");
        }
    }
    Ok(())
}
