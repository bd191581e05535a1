use std::io::Write;
use std::sync::Mutex;

use super::exact::ExactSolution;
use super::norms::{state_errors, ErrorAccumulator, ErrorNorms};
use crate::error::{Error, Result};
use crate::fem::{Discretization, Projector};
use crate::schemes::{run, Observer, SchemeKind, SchemeParams, Stepper};
use crate::sparse::SolverConfig;

/// Experimental order between two consecutive rows; `None` when either
/// error is not strictly positive.
pub fn eoc_pair(e: (f64, f64), tau: (f64, f64)) -> Option<f64> {
    if e.0 > 0.0 && e.1 > 0.0 && e.0.is_finite() && e.1.is_finite() {
        Some((e.0 / e.1).ln() / (tau.0 / tau.1).ln())
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub tau: f64,
    pub h: f64,
    pub errors: ErrorNorms,
    /// Same norms for the projected exact solution at the final time; rows
    /// whose errors come within a factor 2 of this are flagged.
    pub spatial_floor: [f64; 4],
    /// Error message when the run failed.
    pub failure: Option<String>,
}

impl ConvergenceRow {
    pub fn spatially_limited(&self) -> bool {
        self.errors
            .as_array()
            .iter()
            .zip(&self.spatial_floor)
            .any(|(e, f)| *e < 2.0 * f)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Rates between consecutive rows, one array per norm.
    pub fn eoc(&self) -> Vec<[Option<f64>; 4]> {
        self.rows
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0].errors.as_array(), w[1].errors.as_array());
                std::array::from_fn(|i| {
                    if w[0].failure.is_some() || w[1].failure.is_some() {
                        None
                    } else {
                        eoc_pair((a[i], b[i]), (w[0].tau, w[1].tau))
                    }
                })
            })
            .collect()
    }

    /// Rate over the finest pair of rows.
    pub fn final_eoc(&self) -> Option<[Option<f64>; 4]> {
        self.eoc().last().copied()
    }

    pub fn all_completed(&self) -> bool {
        self.rows.iter().all(|r| r.failure.is_none())
    }

    pub fn write_csv<W: Write>(&self, mut out: W, comment: &str) -> std::io::Result<()> {
        writeln!(out, "# {comment}")?;
        write!(out, "tau,h")?;
        for n in ErrorNorms::NAMES {
            write!(out, ",{n}")?;
        }
        for n in ErrorNorms::NAMES {
            write!(out, ",eoc_{n}")?;
        }
        writeln!(out, ",spatially_limited,failure")?;
        let eoc = self.eoc();
        for (i, r) in self.rows.iter().enumerate() {
            write!(out, "{:.16e},{:.16e}", r.tau, r.h)?;
            for e in r.errors.as_array() {
                write!(out, ",{e:.16e}")?;
            }
            for k in 0..4 {
                match i.checked_sub(1).and_then(|j| eoc[j][k]) {
                    Some(v) => write!(out, ",{v:.16e}")?,
                    None => write!(out, ",")?,
                }
            }
            writeln!(
                out,
                ",{},{}",
                u8::from(r.spatially_limited()),
                r.failure.as_deref().unwrap_or("").replace(',', ";")
            )?;
        }
        Ok(())
    }

    /// Two-column `tau error` data for one norm, for gnuplot.
    pub fn write_gnuplot<W: Write>(&self, mut out: W, norm: usize, comment: &str) -> std::io::Result<()> {
        writeln!(out, "# {comment}")?;
        writeln!(out, "# tau {}", ErrorNorms::NAMES[norm])?;
        for r in self.rows.iter().filter(|r| r.failure.is_none()) {
            writeln!(out, "{:.16e} {:.16e}", r.tau, r.errors.as_array()[norm])?;
        }
        Ok(())
    }
}

/// Inputs of a temporal convergence study with the manufactured solution.
#[derive(Clone, Debug)]
pub struct ConvergenceSetup {
    /// Shared parameters; `tau` is overwritten per row.
    pub params: SchemeParams,
    pub nx: usize,
    pub taus: Vec<f64>,
    pub jobs: usize,
    pub solver: SolverConfig,
}

fn check_taus(taus: &[f64]) -> Result<()> {
    if taus.is_empty() {
        return Err(Error::Config("at least one time step is required".into()));
    }
    if taus.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config("time steps must be strictly decreasing".into()));
    }
    Ok(())
}

fn spatial_floor(disc: &Discretization, exact: &ExactSolution, t: f64, solver: SolverConfig) -> Result<[f64; 4]> {
    let proj = Projector::new(&disc.ops, solver)?;
    let u = proj.velocity(&disc.spaces, |x| exact.u(t, x))?;
    let p = proj.pressure(&disc.spaces, |x| exact.p(t, x))?;
    let e = state_errors(&disc.spaces, exact, t, &u.coeffs, &p.coeffs);
    let s = t.sqrt();
    Ok([e.velocity_l2, s * e.velocity_h1, e.pressure_l2, s * e.pressure_l2])
}

/// One manufactured-solution run; returns the four error norms.
pub fn manufactured_run(disc: &Discretization, params: &SchemeParams, solver: SolverConfig) -> Result<ErrorNorms> {
    let exact = ExactSolution::new(params.form, params.re);
    let stepper = Stepper::new(disc.clone(), params.clone(), solver)?;
    let state = stepper.initialize_exact(&exact)?;
    let mut acc = ErrorAccumulator::new(&exact);
    let history = run(&stepper, state, &exact, &mut [&mut acc as &mut dyn Observer]);
    history.into_result()?;
    Ok(acc.norms())
}

/// Runs one manufactured-solution simulation per time step, possibly in
/// parallel, and tabulates the errors.
pub fn convergence_study(setup: &ConvergenceSetup) -> Result<ConvergenceTable> {
    check_taus(&setup.taus)?;
    if setup.params.scheme.is_no_slip() {
        return Err(Error::Config("convergence studies use the traction/open schemes".into()));
    }
    let mut base = setup.params.clone();
    for &tau in &setup.taus {
        SchemeParams { tau, ..base.clone() }.validate()?;
    }
    let disc = Discretization::unit_square(setup.nx)?;
    if base.kappa.is_none() && base.scheme == SchemeKind::BoundaryCorrection {
        base.kappa = Some(super::kappa::estimate_kappa(&disc.ops, base.form, 1e-10)?);
    }
    let exact = ExactSolution::new(base.form, base.re);
    let floor = spatial_floor(&disc, &exact, base.final_time, setup.solver)?;
    let h = disc.mesh().h_max;

    let slots: Vec<Mutex<Option<ConvergenceRow>>> = setup.taus.iter().map(|_| Mutex::new(None)).collect();
    let next = Mutex::new(0usize);
    let jobs = setup.jobs.clamp(1, setup.taus.len());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = {
                    let mut n = next.lock().expect("index lock");
                    let i = *n;
                    *n += 1;
                    i
                };
                let Some(&tau) = setup.taus.get(i) else { break };
                let params = SchemeParams { tau, ..base.clone() };
                let (errors, failure) = match manufactured_run(&disc, &params, setup.solver) {
                    Ok(e) => (e, None),
                    Err(e) => (ErrorNorms::default(), Some(e.to_string())),
                };
                *slots[i].lock().expect("row lock") = Some(ConvergenceRow {
                    tau,
                    h,
                    errors,
                    spatial_floor: floor,
                    failure,
                });
            });
        }
    });
    let rows = slots
        .into_iter()
        .map(|s| s.into_inner().expect("row lock").expect("every row computed"))
        .collect();
    Ok(ConvergenceTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eoc_arithmetic() {
        assert!((eoc_pair((1e-2, 2.5e-3), (0.1, 0.05)).unwrap() - 2.0).abs() < 1e-13);
        assert_eq!(eoc_pair((1.0, 1.0), (0.1, 0.05)).unwrap(), 0.0);
        assert!(eoc_pair((0.0, 1.0), (0.1, 0.05)).is_none());
        assert!(eoc_pair((-1.0, 1.0), (0.1, 0.05)).is_none());
    }

    fn row(tau: f64, e: f64) -> ConvergenceRow {
        ConvergenceRow {
            tau,
            h: 0.1,
            errors: ErrorNorms {
                velocity_linf_l2: e,
                velocity_l2_h1: 2.0 * e,
                pressure_linf_l2: 3.0 * e,
                pressure_l2_l2: e * e,
            },
            spatial_floor: [0.0; 4],
            failure: None,
        }
    }

    #[test]
    fn eoc_is_scale_invariant() {
        let t = ConvergenceTable {
            rows: vec![row(0.1, 0.3), row(0.05, 0.1), row(0.025, 0.04)],
        };
        let scaled = ConvergenceTable {
            rows: t
                .rows
                .iter()
                .map(|r| {
                    let mut r = r.clone();
                    r.errors.velocity_linf_l2 *= 7.5;
                    r
                })
                .collect(),
        };
        for (a, b) in t.eoc().iter().zip(scaled.eoc()) {
            assert!((a[0].unwrap() - b[0].unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn single_row_has_no_rate() {
        let t = ConvergenceTable { rows: vec![row(0.1, 0.3)] };
        assert!(t.eoc().is_empty());
        assert!(t.final_eoc().is_none());
        let mut buf = Vec::new();
        t.write_csv(&mut buf, "cfg").unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("# cfg\ntau,h,"));
        assert_eq!(s.lines().count(), 3);
    }

    #[test]
    fn rejects_unsorted_steps() {
        assert!(check_taus(&[0.05, 0.1]).is_err());
        assert!(check_taus(&[]).is_err());
        assert!(check_taus(&[0.1]).is_ok());
    }
}
