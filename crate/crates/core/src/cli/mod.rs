//! Command-line front end: `converge`, `stability`, `equivalence` and `run`.
//!
//! Exit codes: 0 on success, 1 when a run fails or a verdict is negative,
//! 2 for usage and configuration errors.

mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{Command, RunConfig, KEYS, OUT_ENV};

use crate::error::{Error, Result};
use crate::fem::Discretization;
use crate::schemes::{
    run as run_scheme, write_diagnostics_csv, ExactFlow, GaugeStartup, NoForcing, SchemeParams, Stepper,
};
use crate::verification::{
    convergence_study, equivalence_run, stability_probe, state_errors, ConvergenceSetup, EquivalenceSetup,
    ErrorNorms, ExactSolution, NoSlipSolution, StabilitySetup,
};

/// Largest trajectory discrepancy accepted by `equivalence`.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "traction-split", version, about = "Rotational pressure-correction schemes with traction boundary conditions")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Temporal convergence study against the manufactured solution.
    Converge(Flags),
    /// Unforced run from random data with per-step energy monitors.
    Stability(Flags),
    /// Gauge-Uzawa against rotational no-slip trajectories.
    Equivalence(Flags),
    /// Single run with per-step diagnostics and a final field dump.
    Run(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// Flat `key = value` file applied before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// graddiv | bc | gu | rot
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    /// open | traction
    #[arg(long)]
    form: Option<String>,
    #[arg(long)]
    re: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Korn constant, or `auto`.
    #[arg(long)]
    kappa: Option<String>,
    /// standard | korn
    #[arg(long)]
    pressure_variant: Option<String>,
    #[arg(long)]
    nx: Option<usize>,
    /// Time step; repeat for a convergence sweep.
    #[arg(long)]
    tau: Vec<f64>,
    #[arg(long)]
    final_time: Option<f64>,
    #[arg(long)]
    c_cfl: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    amplitude: Option<f64>,
    #[arg(long)]
    zero_data: bool,
    /// Output directory; `TRACTION_SPLIT_OUT` takes precedence.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    /// direct | cg
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    tolerance: Option<f64>,
}

impl Flags {
    fn overrides(&self) -> Vec<(&'static str, String)> {
        let mut v = Vec::new();
        let mut push = |k: &'static str, s: Option<String>| {
            if let Some(s) = s {
                v.push((k, s));
            }
        };
        push("scheme", self.scheme.clone());
        push("m", self.m.map(|x| x.to_string()));
        push("form", self.form.clone());
        push("re", self.re.map(|x| x.to_string()));
        push("alpha", self.alpha.map(|x| x.to_string()));
        push("kappa", self.kappa.clone());
        push("pressure_variant", self.pressure_variant.clone());
        push("nx", self.nx.map(|x| x.to_string()));
        push(
            "tau",
            (!self.tau.is_empty()).then(|| self.tau.iter().map(f64::to_string).collect::<Vec<_>>().join(",")),
        );
        push("final_time", self.final_time.map(|x| x.to_string()));
        push("c_cfl", self.c_cfl.map(|x| x.to_string()));
        push("seed", self.seed.map(|x| x.to_string()));
        push("amplitude", self.amplitude.map(|x| x.to_string()));
        push("zero_data", self.zero_data.then(|| "true".to_string()));
        push("out", self.out.as_ref().map(|p| p.display().to_string()));
        push("jobs", self.jobs.map(|x| x.to_string()));
        push("solver", self.solver.clone());
        push("tolerance", self.tolerance.map(|x| x.to_string()));
        v
    }
}

/// Outcome of a subcommand that ran to the end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

fn resolve(command: Command, flags: &Flags, out_env: Option<String>) -> Result<RunConfig> {
    let mut cfg = RunConfig::defaults(command);
    if let Some(path) = &flags.config {
        cfg.apply_file(path)?;
    }
    for (k, v) in flags.overrides() {
        cfg.apply(k, &v)?;
    }
    if let Some(dir) = out_env.filter(|s| !s.is_empty()) {
        cfg.out = PathBuf::from(dir);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    std::fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidArgument(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (command, flags) = match &cli.command {
        Sub::Converge(f) => (Command::Converge, f),
        Sub::Stability(f) => (Command::Stability, f),
        Sub::Equivalence(f) => (Command::Equivalence, f),
        Sub::Run(f) => (Command::Run, f),
    };
    let cfg = match resolve(command, flags, std::env::var(OUT_ENV).ok()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match execute(&cfg) {
        Ok(Verdict::Pass) => 0,
        Ok(Verdict::Fail) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs an already resolved configuration, writing artifacts under `cfg.out`.
pub fn execute(cfg: &RunConfig) -> Result<Verdict> {
    match cfg.command {
        Command::Converge => converge(cfg),
        Command::Stability => stability(cfg),
        Command::Equivalence => equivalence(cfg),
        Command::Run => single_run(cfg),
    }
}

fn converge(cfg: &RunConfig) -> Result<Verdict> {
    let setup = ConvergenceSetup {
        params: cfg.params.clone(),
        nx: cfg.nx,
        taus: cfg.taus.clone(),
        jobs: cfg.jobs,
        solver: cfg.solver,
    };
    let table = convergence_study(&setup)?;
    let comment = cfg.describe();
    let mut out = create(&cfg.out, "table.csv")?;
    table.write_csv(&mut out, &comment)?;
    out.flush()?;
    for (i, name) in ErrorNorms::NAMES.iter().enumerate() {
        let mut f = create(&cfg.out, &format!("{name}.dat"))?;
        table.write_gnuplot(&mut f, i, &comment)?;
        f.flush()?;
    }

    println!("{comment}");
    println!("{:>10} {}", "tau", ErrorNorms::NAMES.map(|n| format!("{n:>18}")).join(""));
    for r in &table.rows {
        print!("{:>10.6}", r.tau);
        for e in r.errors.as_array() {
            print!(" {e:>17.6e}");
        }
        match &r.failure {
            Some(f) => println!("  FAILED: {f}"),
            None if r.spatially_limited() => println!("  (near spatial floor)"),
            None => println!(),
        }
    }
    if let Some(eoc) = table.final_eoc() {
        let rates: Vec<String> = ErrorNorms::NAMES
            .iter()
            .zip(eoc)
            .map(|(n, r)| format!("{n}={}", r.map_or("n/a".to_string(), |v| format!("{v:.3}"))))
            .collect();
        println!("EOC (finest pair): {}", rates.join(" "));
    }
    Ok(if table.all_completed() { Verdict::Pass } else { Verdict::Fail })
}

fn stability(cfg: &RunConfig) -> Result<Verdict> {
    let steps = cfg.params.steps()?;
    let setup = StabilitySetup {
        params: cfg.params.clone(),
        nx: cfg.nx,
        steps,
        seed: cfg.seed,
        amplitude: cfg.amplitude,
        gauge: GaugeStartup::Consistent,
        solver: cfg.solver,
    };
    let trace = stability_probe(&setup)?;
    let mut out = create(&cfg.out, "trace.csv")?;
    trace.write_csv(&mut out, &cfg.describe())?;
    out.flush()?;
    for w in &trace.warnings {
        eprintln!("warning: {w}");
    }
    let monitored = trace
        .rows
        .iter()
        .filter(|r| r.diagnostics.as_ref().is_some_and(|d| d.energy.is_some()))
        .count();
    let violations = trace.violations();
    println!(
        "{steps} steps, {monitored} monitored, {violations} monitor violations; max |u| = {:.6e} (|u0| = {:.6e}, bounded by e|u0|: {})",
        trace.max_norm,
        trace.initial_norm,
        trace.bounded()
    );
    if monitored == 0 {
        println!("note: energy monitors apply to the grad-div scheme with m = 1 only");
    }
    if !cfg.params.alpha_is_stable() && cfg.params.scheme == crate::schemes::SchemeKind::GradDiv {
        println!("note: alpha = {} violates alpha > max(1, 2/Re)", cfg.params.alpha);
    }
    Ok(if violations == 0 { Verdict::Pass } else { Verdict::Fail })
}

fn equivalence(cfg: &RunConfig) -> Result<Verdict> {
    let setup = EquivalenceSetup {
        nx: cfg.nx,
        re: cfg.params.re,
        tau: cfg.params.tau,
        steps: SchemeParams { m: 1, ..cfg.params.clone() }.steps()?,
        form: cfg.params.form,
        zero_data: cfg.zero_data,
        solver: cfg.solver,
    };
    let report = equivalence_run(&setup)?;
    println!("{}", cfg.describe());
    println!(
        "{} steps: velocity {:.3e}, pressure {:.3e}, phi vs dpsi {:.3e}; max {:.3e} (tolerance {EQUIVALENCE_TOLERANCE:.0e})",
        report.steps,
        report.velocity,
        report.pressure,
        report.gauge,
        report.max()
    );
    if report.max() <= EQUIVALENCE_TOLERANCE {
        Ok(Verdict::Pass)
    } else {
        println!("discrepancy exceeds tolerance; loose solver tolerances propagate into the comparison");
        Ok(Verdict::Fail)
    }
}

fn write_vertex_values<W: Write>(mut out: W, comment: &str, disc: &Discretization, values: &[f64]) -> Result<()> {
    writeln!(out, "# {comment}")?;
    writeln!(out, "# x y value")?;
    for (x, v) in disc.mesh().vertices.iter().zip(values) {
        writeln!(out, "{:.16e} {:.16e} {:.16e}", x[0], x[1], v)?;
    }
    out.flush()?;
    Ok(())
}

fn single_run(cfg: &RunConfig) -> Result<Verdict> {
    let disc = Discretization::unit_square(cfg.nx)?;
    let stepper = Stepper::new(disc.clone(), cfg.params.clone(), cfg.solver)?;
    let re = cfg.params.re;
    let exact: Box<dyn ExactFlow> = if cfg.params.scheme.is_no_slip() {
        Box::new(NoSlipSolution { re })
    } else {
        Box::new(ExactSolution::new(cfg.params.form, re))
    };
    let history = if cfg.zero_data {
        let levels = vec![(vec![0.0; disc.spaces.velocity_dim()], vec![0.0; disc.spaces.pressure_dim()]); cfg.params.m];
        run_scheme(&stepper, stepper.initial_state(&levels)?, &NoForcing, &mut [])
    } else {
        run_scheme(&stepper, stepper.initialize_exact(exact.as_ref())?, exact.as_ref(), &mut [])
    };
    for w in &history.warnings {
        eprintln!("warning: {w}");
    }
    let comment = cfg.describe();
    let mut out = create(&cfg.out, "diagnostics.csv")?;
    write_diagnostics_csv(&mut out, &comment, &history.diagnostics)?;
    out.flush()?;
    let history = match history.into_result() {
        Ok(h) => h,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(Verdict::Fail);
        }
    };
    let s = &history.final_state;
    let nv = disc.mesh().n_vertices();
    let speed: Vec<f64> = (0..nv).map(|a| s.u[2 * a].hypot(s.u[2 * a + 1])).collect();
    write_vertex_values(create(&cfg.out, "velocity_magnitude.txt")?, &comment, &disc, &speed)?;
    write_vertex_values(create(&cfg.out, "pressure.txt")?, &comment, &disc, &s.p[..nv])?;
    println!("{comment}");
    println!("{} steps to t = {}", history.steps(), s.t);
    if !cfg.zero_data {
        let e = state_errors(&disc.spaces, exact.as_ref(), s.t, &s.u, &s.p);
        println!(
            "final errors: velocity L2 {:.6e}, velocity H1 {:.6e}, pressure L2 {:.6e}",
            e.velocity_l2, e.velocity_h1, e.pressure_l2
        );
    }
    Ok(Verdict::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(args: &[&str]) -> (Command, RunConfig) {
        let cli = Cli::try_parse_from(std::iter::once("traction-split").chain(args.iter().copied())).unwrap();
        let (c, f) = match &cli.command {
            Sub::Converge(f) => (Command::Converge, f),
            Sub::Stability(f) => (Command::Stability, f),
            Sub::Equivalence(f) => (Command::Equivalence, f),
            Sub::Run(f) => (Command::Run, f),
        };
        (c, resolve(c, f, Some("env-out".into())).unwrap())
    }

    #[test]
    fn flags_override_defaults() {
        let (c, cfg) = flags(&["converge", "--tau", "0.5", "--tau", "0.25", "--re", "100", "--out", "x"]);
        assert_eq!(c, Command::Converge);
        assert_eq!(cfg.taus, vec![0.5, 0.25]);
        assert_eq!(cfg.params.re, 100.0);
        assert_eq!(cfg.out, PathBuf::from("env-out"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["traction-split", "run", "--scheme", "nope"]), 2);
        assert_eq!(main_with_args(["traction-split", "frobnicate"]), 2);
        assert_eq!(main_with_args(["traction-split", "--help"]), 0);
        assert_eq!(exit_code(&Error::Config("x".into())), 2);
        assert_eq!(
            exit_code(&Error::SolverFailure {
                reason: "x".into(),
                iterations: 1,
                residual: 1.0
            }),
            1
        );
    }
}
