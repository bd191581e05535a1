//! Discrete Korn constant for both flow forms over a few meshes.
//!
//! cargo run --example korn_constant -- [nx ...]

use std::time::Instant;

use traction_split::fem::{Discretization, FlowForm};
use traction_split::verification::estimate_kappa;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut sizes: Vec<usize> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    if sizes.is_empty() {
        sizes = vec![4, 8, 16, 32];
    }
    println!("{:>5} {:>14} {:>14} {:>10}", "nx", "open", "traction", "ms");
    for nx in sizes {
        let disc = Discretization::unit_square(nx)?;
        let start = Instant::now();
        let open = estimate_kappa(&disc.ops, FlowForm::Open, 1e-10)?;
        let traction = estimate_kappa(&disc.ops, FlowForm::Traction, 1e-10)?;
        println!(
            "{nx:>5} {open:>14.10} {traction:>14.10} {:>10.1}",
            start.elapsed().as_secs_f64() * 1e3
        );
    }
    Ok(())
}
