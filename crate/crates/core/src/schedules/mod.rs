//! Scalar parameter sequences: θ_k, φ_k, the SC-OGM γ, coupling weights
//! (α_k, τ_k) and their last-step variants, plus the asymptotics of θ_k.

mod asymptotics;
mod coupling;
mod theta;

pub use asymptotics::{estimate_zeta, scan_asymptotics, AsymptoticScan};
pub use coupling::{coupling_from_theta, tilde_coupling, CouplingMode, CouplingSchedule};
pub use theta::{phi_exact, phi_simple, theta_exact, theta_simple, PhiSchedule, ThetaSchedule};

use thiserror::Error;

use crate::scalar::Scalar;

/// Absolute slack allowed on schedule constraints, scaled by `max(1, θ_k²)`
/// so that roundoff in large squares is not mistaken for a violation.
pub const SCHEDULE_TOL: f64 = 1e-12;

/// Smallest condition number for which γ is finite.
pub const KAPPA_MIN: f64 = 1.0 + 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("schedule invalid at k = {k}: {detail}")]
    Invalid { k: usize, detail: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
}

/// γ of SC-OGM for a condition number κ, the positive root of
/// `(κ − 1)γ² − 3γ − 2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScGamma<T> {
    pub kappa: T,
    pub gamma: T,
}

impl<T: Scalar> ScGamma<T> {
    /// `1/(2γ + 1)`
    pub fn momentum(&self) -> T {
        T::one() / (T::lit(2.0) * self.gamma + T::one())
    }

    /// Per-step Lyapunov contraction factor `1/(1 + γ)`.
    pub fn contraction(&self) -> T {
        T::one() / (T::one() + self.gamma)
    }

    /// Residual of `(κ − 1)γ² − 3γ − 2`, relative to its largest term.
    pub fn defect(&self) -> T {
        let g = self.gamma;
        let a = (self.kappa - T::one()) * g * g;
        let b = T::lit(3.0) * g;
        (a - b - T::lit(2.0)).abs() / a.max(b).max(T::lit(2.0))
    }
}

/// `γ = 4/(√(8κ+1) − 3)`, the rationalized form of `(√(8κ+1)+3)/(2κ−2)`.
pub fn gamma_sc<T: Scalar>(kappa: T) -> Result<ScGamma<T>, ScheduleError> {
    if !(kappa > T::lit(KAPPA_MIN)) {
        return Err(ScheduleError::Domain(format!(
            "SC-OGM needs κ > 1 + 1e-9, got {kappa}"
        )));
    }
    let gamma = if kappa.is_infinite() {
        T::zero()
    } else {
        T::lit(4.0) / ((T::lit(8.0) * kappa + T::one()).sqrt() - T::lit(3.0))
    };
    Ok(ScGamma { kappa, gamma })
}

/// `(√κ − 1)/(√κ + 1)`, the SC-AGM momentum coefficient.
pub fn sc_agm_momentum<T: Scalar>(kappa: T) -> T {
    let s = kappa.sqrt();
    (s - T::one()) / (s + T::one())
}
