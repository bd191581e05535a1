//! Temporal convergence of the grad-div scheme on the manufactured solution.
//!
//! cargo run --example graddiv_convergence -- [Re] [m] [nx]

use traction_split::fem::FlowForm;
use traction_split::schemes::{SchemeKind, SchemeParams};
use traction_split::sparse::SolverConfig;
use traction_split::verification::{convergence_study, ConvergenceSetup, ErrorNorms};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let re: f64 = args.first().map_or(Ok(1.0), |s| s.parse())?;
    let m: usize = args.get(1).map_or(Ok(2), |s| s.parse())?;
    let nx: usize = args.get(2).map_or(Ok(64), |s| s.parse())?;

    let setup = ConvergenceSetup {
        params: SchemeParams {
            scheme: SchemeKind::GradDiv,
            form: FlowForm::Traction,
            m,
            re,
            alpha: 1.0,
            ..Default::default()
        },
        nx,
        taus: vec![0.1, 0.05, 0.025, 0.0125],
        jobs: 1,
        solver: SolverConfig::default(),
    };
    let table = convergence_study(&setup)?;
    println!("grad-div m={m} Re={re} nx={nx}");
    println!("{:>8} {}", "tau", ErrorNorms::NAMES.map(|n| format!("{n:>18}")).join(""));
    for (i, row) in table.rows.iter().enumerate() {
        let e = row.errors.as_array();
        print!("{:>8.5}", row.tau);
        for v in e {
            print!(" {v:>17.6e}");
        }
        if i > 0 {
            let rates = table.eoc()[i - 1];
            print!("   eoc:");
            for r in rates {
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
