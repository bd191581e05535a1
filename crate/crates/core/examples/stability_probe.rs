//! Unforced grad-div run from seeded random data; prints the per-step
//! energy balance and the auxiliary bounds.
//!
//! cargo run --example stability_probe -- [alpha] [seed] [nx]

use traction_split::schemes::{GaugeStartup, SchemeKind, SchemeParams};
use traction_split::sparse::SolverConfig;
use traction_split::verification::{stability_probe, StabilitySetup};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let alpha: f64 = args.first().map_or(Ok(2.5), |s| s.parse())?;
    let seed: u64 = args.get(1).map_or(Ok(0), |s| s.parse())?;
    let nx: usize = args.get(2).map_or(Ok(16), |s| s.parse())?;

    let setup = StabilitySetup {
        params: SchemeParams {
            scheme: SchemeKind::GradDiv,
            m: 1,
            re: 1.0,
            alpha,
            tau: 0.01,
            ..Default::default()
        },
        nx,
        steps: 100,
        seed,
        amplitude: 1.0,
        gauge: GaugeStartup::Consistent,
        solver: SolverConfig::default(),
    };
    let trace = stability_probe(&setup)?;
    println!("{:>4} {:>12} {:>14} {:>14} {:>6}", "k", "|u|^2", "lhs", "rhs", "ok");
    for row in trace.rows.iter().filter(|r| r.k % 10 == 1 || r.k == 0) {
        match row.diagnostics.as_ref().and_then(|d| d.energy) {
            Some(m) => println!(
                "{:>4} {:>12.6e} {:>14.6e} {:>14.6e} {:>6}",
                row.k,
                row.energies[0],
                m.lhs,
                m.rhs,
                m.passes()
            ),
            None => println!("{:>4} {:>12.6e}", row.k, row.energies[0]),
        }
    }
    println!(
        "violations: {}, max |u| / |u0| = {:.6}",
        trace.violations(),
        trace.max_norm / trace.initial_norm
    );
    Ok(())
}
