//! Drives a stepper by hand with an observer and writes the per-step
//! diagnostics to stdout.
//!
//! cargo run --example single_run -- [scheme] [m] [nx] [tau]

use traction_split::fem::Discretization;
use traction_split::schemes::{
    run, write_diagnostics_csv, Observer, SchemeKind, SchemeParams, SchemeState, StepDiagnostics, Stepper,
};
use traction_split::sparse::SolverConfig;
use traction_split::verification::{state_errors, ExactSolution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let params = SchemeParams {
        scheme: args.first().map_or(Ok(SchemeKind::GradDiv), |s| s.parse())?,
        m: args.get(1).map_or(Ok(2), |s| s.parse())?,
        tau: args.get(3).map_or(Ok(0.05), |s| s.parse())?,
        ..Default::default()
    };
    let nx: usize = args.get(2).map_or(Ok(16), |s| s.parse())?;

    let exact = ExactSolution::new(params.form, params.re);
    let stepper = Stepper::new(Discretization::unit_square(nx)?, params.clone(), SolverConfig::default())?;
    let mut worst = 0.0f64;
    let mut track = |s: &Stepper, st: &SchemeState, _: Option<&StepDiagnostics>| -> traction_split::Result<()> {
        worst = worst.max(state_errors(s.spaces(), &exact, st.t, &st.u, &st.p).velocity_l2);
        Ok(())
    };
    let history = run(&stepper, stepper.initialize_exact(&exact)?, &exact, &mut [&mut track as &mut dyn Observer]);
    for w in &history.warnings {
        eprintln!("warning: {w}");
    }
    let history = history.into_result()?;
    write_diagnostics_csv(std::io::stdout().lock(), &params.describe(), &history.diagnostics)?;
    eprintln!("max velocity L2 error {worst:.3e} over {} steps", history.steps());
    Ok(())
}
