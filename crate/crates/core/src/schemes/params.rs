use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fem::FlowForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Grad-div stabilized rotational scheme, gauge in Q_h.
    GradDiv,
    /// Boundary-correction gauge-Uzawa scheme, gauge in M_h.
    BoundaryCorrection,
    /// No-slip stabilized gauge-Uzawa scheme (first order only).
    GaugeUzawaNoSlip,
    /// No-slip rotational pressure correction (first order only).
    RotationalNoSlip,
}

impl SchemeKind {
    pub fn is_no_slip(self) -> bool {
        matches!(self, SchemeKind::GaugeUzawaNoSlip | SchemeKind::RotationalNoSlip)
    }

    pub fn short_name(self) -> &'static str {
        match self {
            SchemeKind::GradDiv => "graddiv",
            SchemeKind::BoundaryCorrection => "bc",
            SchemeKind::GaugeUzawaNoSlip => "gu",
            SchemeKind::RotationalNoSlip => "rot",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graddiv" | "grad-div" | "grad_div" => Ok(SchemeKind::GradDiv),
            "bc" | "boundary_correction" | "boundary-correction" => Ok(SchemeKind::BoundaryCorrection),
            "gu" | "gauge_uzawa_noslip" => Ok(SchemeKind::GaugeUzawaNoSlip),
            "rot" | "rotational_noslip" => Ok(SchemeKind::RotationalNoSlip),
            other => Err(Error::Config(format!(
                "unknown scheme '{other}' (expected graddiv|bc|gu|rot)"
            ))),
        }
    }
}

/// Coefficient in front of `q` in the pressure update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PressureUpdate {
    /// `p = ψ + q/Re`.
    Standard,
    /// `p = ψ + κ q/Re`.
    Korn,
}

impl fmt::Display for PressureUpdate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PressureUpdate::Standard => "standard",
            PressureUpdate::Korn => "korn",
        })
    }
}

impl FromStr for PressureUpdate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" | "q" => Ok(PressureUpdate::Standard),
            "korn" | "kappa" => Ok(PressureUpdate::Korn),
            other => Err(Error::Config(format!(
                "unknown pressure variant '{other}' (expected standard|korn)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeParams {
    pub scheme: SchemeKind,
    pub form: FlowForm,
    /// BDF order, 1 or 2.
    pub m: usize,
    pub re: f64,
    pub tau: f64,
    /// Grad-div parameter (ignored outside the grad-div scheme).
    pub alpha: f64,
    /// Korn constant; estimated from the mesh when `None` and needed.
    pub kappa: Option<f64>,
    /// Ignored by the boundary-correction scheme, which always uses κ.
    pub pressure_update: PressureUpdate,
    pub final_time: f64,
    /// Constant of the mesh condition `τ ≤ c_cfl Re h²`.
    pub c_cfl: f64,
}

impl Default for SchemeParams {
    fn default() -> Self {
        Self {
            scheme: SchemeKind::GradDiv,
            form: FlowForm::Traction,
            m: 2,
            re: 1.0,
            tau: 0.1,
            alpha: 1.0,
            kappa: None,
            pressure_update: PressureUpdate::Standard,
            final_time: 1.0,
            c_cfl: 1.0,
        }
    }
}

impl SchemeParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("Re", self.re)?;
        positive("time step", self.tau)?;
        positive("final time", self.final_time)?;
        positive("c_cfl", self.c_cfl)?;
        if self.m != 1 && self.m != 2 {
            return Err(Error::Config(format!("time order must be 1 or 2, got {}", self.m)));
        }
        if self.scheme.is_no_slip() && self.m != 1 {
            return Err(Error::Config("no-slip schemes are first order only (m = 1)".into()));
        }
        if self.scheme == SchemeKind::GradDiv && !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("alpha must be nonnegative, got {}", self.alpha)));
        }
        if let Some(k) = self.kappa {
            if !(k > 0.0 && k <= 1.0) {
                return Err(Error::Config(format!("kappa must lie in (0, 1], got {k}")));
            }
        }
        if self.steps()? < self.m {
            return Err(Error::Config(format!(
                "final time must span at least m = {} time steps",
                self.m
            )));
        }
        Ok(())
    }

    /// Number of steps `K = T/τ`; the ratio must be an integer up to rounding.
    pub fn steps(&self) -> Result<usize> {
        let ratio = self.final_time / self.tau;
        let k = ratio.round();
        if k < 1.0 || (ratio - k).abs() > 4.0 * f64::EPSILON * ratio.max(1.0) {
            return Err(Error::Config("time step must divide final time".into()));
        }
        Ok(k as usize)
    }

    pub fn beta(&self) -> f64 {
        super::bdf::beta(self.m)
    }

    /// Whether `α > max{1, 2/Re}`, under which the grad-div scheme is unconditionally stable.
    pub fn alpha_is_stable(&self) -> bool {
        self.alpha > 1f64.max(2.0 / self.re)
    }

    /// Mesh condition `τ ≤ c_cfl Re h²`.
    pub fn mesh_condition(&self, h: f64) -> bool {
        self.tau <= self.c_cfl * self.re * h * h
    }

    pub(crate) fn needs_kappa(&self) -> bool {
        self.scheme == SchemeKind::BoundaryCorrection
            || (self.scheme == SchemeKind::GradDiv && self.pressure_update == PressureUpdate::Korn)
    }

    pub fn describe(&self) -> String {
        format!(
            "scheme={} m={} form={} re={} tau={} alpha={} kappa={} pressure_update={} final_time={} c_cfl={}",
            self.scheme,
            self.m,
            self.form,
            self.re,
            self.tau,
            self.alpha,
            self.kappa.map_or("auto".to_string(), |k| k.to_string()),
            self.pressure_update,
            self.final_time,
            self.c_cfl
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_count() {
        let mut p = SchemeParams {
            tau: 0.1,
            ..Default::default()
        };
        assert_eq!(p.steps().unwrap(), 10);
        p.tau = 1.0;
        assert_eq!(p.steps().unwrap(), 1);
        p.tau = 1.0 / 80.0;
        assert_eq!(p.steps().unwrap(), 80);
        p.tau = 0.3;
        let err = p.steps().unwrap_err().to_string();
        assert!(err.contains("time step must divide final time"), "{err}");
    }

    #[test]
    fn beta_and_alpha() {
        let p = SchemeParams {
            m: 2,
            alpha: 2.5,
            re: 1.0,
            ..Default::default()
        };
        assert_eq!(p.beta(), 1.5);
        assert!(p.alpha_is_stable());
        assert!(!SchemeParams { alpha: 1.5, ..p.clone() }.alpha_is_stable());
    }

    #[test]
    fn rejects_bad_values() {
        assert!(SchemeParams { re: 0.0, ..Default::default() }.validate().is_err());
        assert!(SchemeParams { m: 3, ..Default::default() }.validate().is_err());
        assert!(SchemeParams {
            scheme: SchemeKind::RotationalNoSlip,
            m: 2,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SchemeParams::default().validate().is_ok());
    }

    #[test]
    fn parse_names() {
        assert_eq!("bc".parse::<SchemeKind>().unwrap(), SchemeKind::BoundaryCorrection);
        assert_eq!("graddiv".parse::<SchemeKind>().unwrap(), SchemeKind::GradDiv);
        assert!("upwind".parse::<SchemeKind>().is_err());
        assert_eq!("korn".parse::<PressureUpdate>().unwrap(), PressureUpdate::Korn);
    }
}
