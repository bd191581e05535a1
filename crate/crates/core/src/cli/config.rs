use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::schemes::{SchemeKind, SchemeParams};
use crate::sparse::{SolverConfig, SolverMethod};

/// Environment variable that overrides the output directory.
pub const OUT_ENV: &str = "TRACTION_SPLIT_OUT";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Converge,
    Stability,
    Equivalence,
    Run,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Converge => "converge",
            Command::Stability => "stability",
            Command::Equivalence => "equivalence",
            Command::Run => "run",
        }
    }
}

/// Fully resolved configuration of one CLI invocation.
///
/// Values are layered: per-command defaults, then the `key = value` file
/// given by `--config`, then command-line flags.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// `tau` mirrors `taus[0]`.
    pub params: SchemeParams,
    pub taus: Vec<f64>,
    pub nx: usize,
    pub seed: u64,
    pub amplitude: f64,
    /// Start from zero data instead of the manufactured flow (`run`, `equivalence`).
    pub zero_data: bool,
    pub out: PathBuf,
    pub jobs: usize,
    pub solver: SolverConfig,
}

pub const KEYS: [&str; 18] = [
    "scheme",
    "m",
    "form",
    "re",
    "alpha",
    "kappa",
    "pressure_variant",
    "nx",
    "tau",
    "final_time",
    "c_cfl",
    "seed",
    "amplitude",
    "zero_data",
    "out",
    "jobs",
    "solver",
    "tolerance",
];

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value '{value}' for '{key}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("invalid value '{value}' for '{key}'"))),
    }
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        let mut c = Self {
            command,
            params: SchemeParams::default(),
            taus: vec![0.1, 0.05, 0.025, 0.0125],
            nx: 64,
            seed: 0,
            amplitude: 1.0,
            zero_data: false,
            out: PathBuf::from("out"),
            jobs: 1,
            solver: SolverConfig::default(),
        };
        match command {
            Command::Converge => {}
            Command::Stability => {
                c.params.m = 1;
                c.params.alpha = 2.5;
                c.taus = vec![0.01];
                c.nx = 16;
            }
            Command::Equivalence => {
                c.params.scheme = SchemeKind::GaugeUzawaNoSlip;
                c.params.m = 1;
                c.params.final_time = 0.1;
                c.taus = vec![0.01];
                c.nx = 16;
            }
            Command::Run => {
                c.taus = vec![0.01];
                c.nx = 32;
            }
        }
        c.params.tau = c.taus[0];
        c
    }

    /// Sets one key; unknown keys and malformed values are configuration errors.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "scheme" => self.params.scheme = value.parse()?,
            "m" => self.params.m = parse(key, value)?,
            "form" => self.params.form = value.parse()?,
            "re" => self.params.re = parse(key, value)?,
            "alpha" => self.params.alpha = parse(key, value)?,
            "kappa" => {
                self.params.kappa = match value {
                    "auto" => None,
                    v => Some(parse(key, v)?),
                }
            }
            "pressure_variant" | "pressure-variant" => self.params.pressure_update = value.parse()?,
            "nx" => self.nx = parse(key, value)?,
            "tau" => {
                self.taus = value
                    .split(',')
                    .map(|s| parse(key, s.trim()))
                    .collect::<Result<Vec<f64>>>()?;
                self.params.tau = self.taus[0];
            }
            "final_time" | "final-time" => self.params.final_time = parse(key, value)?,
            "c_cfl" | "c-cfl" => self.params.c_cfl = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "amplitude" => self.amplitude = parse(key, value)?,
            "zero_data" | "zero-data" => self.zero_data = parse_bool(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "jobs" => self.jobs = parse(key, value)?,
            "solver" => {
                self.solver.method = match value {
                    "direct" => SolverMethod::Direct,
                    "cg" | "iterative" => SolverMethod::ConjugateGradient,
                    _ => return Err(Error::Config(format!("unknown solver '{value}' (expected direct|cg)"))),
                }
            }
            "tolerance" => self.solver.tolerance = parse(key, value)?,
            other => {
                return Err(Error::Config(format!(
                    "unknown key '{other}' (known keys: {})",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Applies a flat `key = value` file. Blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("{origin}:{}: expected 'key = value'", i + 1)))?;
            self.apply(k, v)
                .map_err(|e| Error::Config(format!("{origin}:{}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text, &path.display().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 {
            return Err(Error::Config("nx must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(Error::Config("amplitude must be nonnegative".into()));
        }
        if self.command != Command::Converge && self.taus.len() != 1 {
            return Err(Error::Config(format!(
                "'{}' takes a single time step, got {}",
                self.command.name(),
                self.taus.len()
            )));
        }
        self.solver.validate()?;
        match self.command {
            Command::Converge => {
                for &tau in &self.taus {
                    SchemeParams { tau, ..self.params.clone() }.validate()?;
                }
                Ok(())
            }
            Command::Equivalence => SchemeParams {
                scheme: SchemeKind::GaugeUzawaNoSlip,
                m: 1,
                ..self.params.clone()
            }
            .validate(),
            _ => self.params.validate(),
        }
    }

    /// One-line rendering of every resolved key, written at the top of each output file.
    pub fn describe(&self) -> String {
        let p = &self.params;
        let mut s = format!("traction-split {}", self.command.name());
        let taus: Vec<String> = self.taus.iter().map(|t| t.to_string()).collect();
        let solver = match self.solver.method {
            SolverMethod::Direct => "direct",
            SolverMethod::ConjugateGradient => "cg",
        };
        let _ = write!(
            s,
            " scheme={} m={} form={} re={} alpha={} kappa={} pressure_variant={} nx={} tau={} final_time={} \
             c_cfl={} seed={} amplitude={} zero_data={} out={} jobs={} solver={} tolerance={}",
            p.scheme,
            p.m,
            p.form,
            p.re,
            p.alpha,
            p.kappa.map_or("auto".to_string(), |k| k.to_string()),
            p.pressure_update,
            self.nx,
            taus.join(","),
            p.final_time,
            p.c_cfl,
            self.seed,
            self.amplitude,
            self.zero_data,
            self.out.display(),
            self.jobs,
            solver,
            format_args!("{:e}", self.solver.tolerance)
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::FlowForm;

    #[test]
    fn file_then_overrides() {
        let mut c = RunConfig::defaults(Command::Converge);
        c.apply_text("# sweep\nscheme = bc\nre = 100\ntau = 0.1, 0.05\n\nform=open # inline\n", "t")
            .unwrap();
        assert_eq!(c.params.scheme, SchemeKind::BoundaryCorrection);
        assert_eq!(c.params.form, FlowForm::Open);
        assert_eq!(c.taus, vec![0.1, 0.05]);
        assert_eq!(c.params.tau, 0.1);
        c.apply("re", "2").unwrap();
        assert_eq!(c.params.re, 2.0);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::defaults(Command::Run);
        assert!(matches!(c.apply("colour", "red"), Err(Error::Config(_))));
        assert!(matches!(c.apply("m", "two"), Err(Error::Config(_))));
        assert!(matches!(c.apply_text("scheme graddiv", "t"), Err(Error::Config(_))));
        c.apply("tau", "0.3").unwrap();
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("time step must divide final time"), "{err}");
        c.apply("tau", "0.1,0.05").unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn describe_lists_every_key() {
        let d = RunConfig::defaults(Command::Stability).describe();
        for k in KEYS {
            assert!(d.contains(&format!(" {k}=")), "{k} missing from {d}");
        }
    }
}
