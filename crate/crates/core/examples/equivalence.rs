//! Gauge-Uzawa and rotational no-slip schemes side by side.
//!
//! cargo run --example equivalence -- [nx] [steps]

use traction_split::verification::{equivalence_run, EquivalenceSetup};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let nx: usize = args.first().map_or(Ok(16), |s| s.parse())?;
    let steps: usize = args.get(1).map_or(Ok(10), |s| s.parse())?;
    let report = equivalence_run(&EquivalenceSetup {
        nx,
        steps,
        ..Default::default()
    })?;
    println!("steps            {}", report.steps);
    println!("velocity         {:.3e}", report.velocity);
    println!("pressure         {:.3e}", report.pressure);
    println!("phi against dpsi {:.3e}", report.gauge);
    Ok(())
}
