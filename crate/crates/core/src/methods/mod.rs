//! Steppers for AGM, OGM and their strongly convex and linear-coupling
//! relatives. Every method evaluates one gradient per iteration, at `x_k`.

mod run;
mod stepper;

pub use run::{run, run_with, RunError, Snapshot, Trace};
pub use stepper::{last_step_modify, MethodState, Proposal, Stepper};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::numkit::NumError;
use crate::schedules::{CouplingMode, PhiSchedule, ScheduleError, ThetaSchedule};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MethodError {
    #[error("non-finite iterate or gradient at k = {k}")]
    Divergence { k: usize },
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Num(#[from] NumError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Nesterov's method, momentum form.
    Agm,
    /// Nesterov's method, three-sequence form.
    AgmZ,
    /// OGM, momentum plus correction form.
    Ogm,
    /// OGM, three-sequence form.
    OgmZ,
    /// OGM with `θ_k = (k+2)/2`, three-sequence form.
    SimpleOgm,
    /// Constant momentum `(√κ−1)/(√κ+1)`.
    ScAgm,
    /// Constant momentum and correction `1/(2γ+1)`.
    ScOgm,
    /// Gradient step coupled with a quadratic mirror step.
    Lc,
    /// Linear coupling with the SC-OGM mirror step.
    LcScOgm,
    /// `t`-family between AGM (`t = ½`) and OGM (`t = 1`), momentum form.
    Unified,
    /// `t`-family, three-sequence form.
    UnifiedZ,
}

impl Algorithm {
    pub const ALL: [Algorithm; 11] = [
        Self::Agm,
        Self::AgmZ,
        Self::Ogm,
        Self::OgmZ,
        Self::SimpleOgm,
        Self::ScAgm,
        Self::ScOgm,
        Self::Lc,
        Self::LcScOgm,
        Self::Unified,
        Self::UnifiedZ,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Agm => "agm",
            Self::AgmZ => "agm_z",
            Self::Ogm => "ogm",
            Self::OgmZ => "ogm_z",
            Self::SimpleOgm => "simple_ogm",
            Self::ScAgm => "sc_agm",
            Self::ScOgm => "sc_ogm",
            Self::Lc => "lc",
            Self::LcScOgm => "lc_sc_ogm",
            Self::Unified => "unified",
            Self::UnifiedZ => "unified_z",
        }
    }

    pub fn is_strongly_convex(self) -> bool {
        matches!(self, Self::ScAgm | Self::ScOgm | Self::LcScOgm)
    }

    /// Methods whose `z_k` satisfies `x_k = (1 − 1/θ_k)y_k + z_k/θ_k`.
    pub fn uses_theta(self) -> bool {
        !self.is_strongly_convex()
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = MethodError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| MethodError::Usage(format!("unknown method `{s}`")))
    }
}

/// Algorithm plus the schedules it needs. `phi` enables the last-step
/// sequence `x̃_k`; `t` and `coupling` only matter for the linear-coupling
/// and unified methods.
#[derive(Debug, Clone)]
pub struct MethodConfig<T> {
    pub algorithm: Algorithm,
    pub theta: ThetaSchedule<T>,
    pub phi: Option<PhiSchedule<T>>,
    pub t: T,
    pub coupling: CouplingMode,
}

impl<T: Scalar> MethodConfig<T> {
    pub fn new(algorithm: Algorithm) -> Self {
        let theta = match algorithm {
            Algorithm::SimpleOgm => ThetaSchedule::simple(),
            _ => ThetaSchedule::exact(),
        };
        Self {
            algorithm,
            theta,
            phi: None,
            t: T::one(),
            coupling: CouplingMode::Ogm,
        }
    }

    pub fn with_theta(mut self, theta: ThetaSchedule<T>) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_phi(mut self, phi: PhiSchedule<T>) -> Self {
        self.phi = Some(phi);
        self
    }

    /// Exact φ on the configured θ.
    pub fn with_last_step(self) -> Self {
        let phi = PhiSchedule::exact(self.theta.clone());
        self.with_phi(phi)
    }

    pub fn with_t(mut self, t: T) -> Self {
        self.t = t;
        self
    }

    pub fn with_coupling(mut self, mode: CouplingMode) -> Self {
        self.coupling = mode;
        self
    }

    /// E.g. `ogm_z[theta=exact]`, `lc[theta=exact,t=0.75,mode=ogm]`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.algorithm.uses_theta() {
            parts.push(format!("theta={}", self.theta.name()));
        }
        if let Some(p) = &self.phi {
            parts.push(format!("phi={}", p.name()));
        }
        if matches!(self.algorithm, Algorithm::Lc | Algorithm::Unified | Algorithm::UnifiedZ) {
            parts.push(format!("t={}", self.t));
        }
        if self.algorithm == Algorithm::Lc {
            parts.push(format!(
                "mode={}",
                match self.coupling {
                    CouplingMode::Agm => "agm",
                    CouplingMode::Ogm => "ogm",
                }
            ));
        }
        if parts.is_empty() {
            self.algorithm.to_string()
        } else {
            format!("{}[{}]", self.algorithm, parts.join(","))
        }
    }
}
