use super::{PhiSchedule, ScheduleError, ThetaSchedule, SCHEDULE_TOL};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingMode {
    /// `α_{k+1} = θ_k/L`
    Agm,
    /// `α_{k+1} = 2θ_k/L`
    Ogm,
}

/// Mirror-step weights α_k (units of `1/L`) and coupling weights τ_k for
/// linear coupling, optionally with the last-step pair (α̃_k, τ̃_k).
#[derive(Debug, Clone)]
pub struct CouplingSchedule<T> {
    theta: ThetaSchedule<T>,
    phi: Option<PhiSchedule<T>>,
    smoothness: T,
    mode: CouplingMode,
}

impl<T: Scalar> CouplingSchedule<T> {
    pub fn mode(&self) -> CouplingMode {
        self.mode
    }

    pub fn smoothness(&self) -> T {
        self.smoothness
    }

    pub fn theta(&self) -> &ThetaSchedule<T> {
        &self.theta
    }

    pub fn phi(&self) -> Option<&PhiSchedule<T>> {
        self.phi.as_ref()
    }

    /// α_k for `k ≥ 0`; `α₀ = 0` from `θ₋₁ = 0`.
    pub fn alpha(&self, k: usize) -> T {
        let c = match self.mode {
            CouplingMode::Agm => T::one(),
            CouplingMode::Ogm => T::lit(2.0),
        };
        c * self.theta.get(k as i64 - 1) / self.smoothness
    }

    /// `τ_k = 1/θ_k`
    pub fn tau(&self, k: usize) -> T {
        T::one() / self.theta.at(k)
    }

    /// `α̃_k = φ_{k−1}/L` for `k ≥ 1`.
    pub fn tilde_alpha(&self, k: usize) -> Option<T> {
        if k == 0 {
            return None;
        }
        self.phi.as_ref().map(|p| p.at(k - 1) / self.smoothness)
    }

    /// `τ̃_k = 1/(α̃_{k+1}L) = 1/φ_k`
    pub fn tilde_tau(&self, k: usize) -> Option<T> {
        self.phi.as_ref().map(|p| T::one() / p.at(k))
    }

    /// Coupling constraints `α₁ = 2/L`, `0 ≤ α_{k+1}²L − 2α_{k+1} ≤ α_k²L`
    /// (OGM mode), `τ_k ∈ (0, 1]`, and, with a last-step schedule,
    /// `α̃₁ = 1/L`, `0 ≤ α̃_{k+1}²L − α̃_{k+1} ≤ ½α_k²L`, for `k ≤ horizon`.
    pub fn validate(&self, horizon: usize) -> Result<(), ScheduleError> {
        let l = self.smoothness;
        let invalid = |k: usize, detail: String| Err(ScheduleError::Invalid { k, detail });
        if self.mode == CouplingMode::Ogm {
            let a1 = self.alpha(1);
            if (a1 * l - T::lit(2.0)).abs() > T::lit(SCHEDULE_TOL) {
                return invalid(1, format!("α₁L = {}, expected 2", a1 * l));
            }
            for k in 1..=horizon {
                let (a, b) = (self.alpha(k), self.alpha(k + 1));
                let lhs = b * b * l - T::lit(2.0) * b;
                let cap = a * a * l;
                let tol = T::lit(SCHEDULE_TOL) * (cap * l).max(T::one()) / l;
                if !b.is_finite() || lhs < -tol || lhs > cap + tol {
                    return invalid(
                        k + 1,
                        format!("α_{{k+1}}²L − 2α_{{k+1}} = {lhs} must lie in [0, α_k²L = {cap}]"),
                    );
                }
            }
        }
        for k in 0..=horizon {
            let t = self.tau(k);
            if !(t > T::zero() && t <= T::one() + T::lit(SCHEDULE_TOL)) {
                return invalid(k, format!("τ_k = {t} outside (0, 1]"));
            }
        }
        if let Some(phi) = &self.phi {
            let a1 = self.tilde_alpha(1).expect("phi present");
            if (a1 * l - T::one()).abs() > T::lit(SCHEDULE_TOL) {
                return invalid(1, format!("α̃₁L = {}, expected 1", a1 * l));
            }
            for k in 1..=horizon {
                let b = self.tilde_alpha(k + 1).expect("phi present");
                let a = T::lit(2.0) * self.theta.get(k as i64 - 1) / l;
                let lhs = b * b * l - b;
                let cap = T::lit(0.5) * a * a * l;
                let tol = T::lit(SCHEDULE_TOL) * (cap * l).max(T::one()) / l;
                if !b.is_finite() || lhs < -tol || lhs > cap + tol {
                    return invalid(
                        k + 1,
                        format!("α̃_{{k+1}}²L − α̃_{{k+1}} = {lhs} must lie in [0, ½α_k²L = {cap}]"),
                    );
                }
            }
            for k in 0..=horizon {
                let t = T::one() / phi.at(k);
                if !(t > T::zero() && t <= T::one() + T::lit(SCHEDULE_TOL)) {
                    return invalid(k, format!("τ̃_k = {t} outside (0, 1]"));
                }
            }
        }
        Ok(())
    }
}

fn check_smoothness<T: Scalar>(l: T) -> Result<(), ScheduleError> {
    if !(l > T::zero()) || !l.is_finite() {
        return Err(ScheduleError::Usage(format!("L must be positive, got {l}")));
    }
    Ok(())
}

/// `α_{k+1} = cθ_k/L` (`c = 2` for OGM, `1` for AGM) and `τ_k = 1/θ_k`,
/// validated through `horizon`.
pub fn coupling_from_theta<T: Scalar>(
    theta: ThetaSchedule<T>,
    smoothness: T,
    mode: CouplingMode,
    horizon: usize,
) -> Result<CouplingSchedule<T>, ScheduleError> {
    check_smoothness(smoothness)?;
    theta.validate(horizon + 1)?;
    let s = CouplingSchedule {
        theta,
        phi: None,
        smoothness,
        mode,
    };
    s.validate(horizon)?;
    Ok(s)
}

/// Coupling plus the last-step pair `α̃_{k+1} = φ_k/L`, `τ̃_k = 1/φ_k`,
/// validated through `horizon`. The last-step constraints are stated in
/// OGM-mode units whatever `mode` is.
pub fn tilde_coupling<T: Scalar>(
    theta: ThetaSchedule<T>,
    phi: PhiSchedule<T>,
    smoothness: T,
    mode: CouplingMode,
    horizon: usize,
) -> Result<CouplingSchedule<T>, ScheduleError> {
    check_smoothness(smoothness)?;
    theta.validate(horizon + 1)?;
    phi.validate(horizon + 1)?;
    let s = CouplingSchedule {
        theta,
        phi: Some(phi),
        smoothness,
        mode,
    };
    s.validate(horizon)?;
    Ok(s)
}
