use std::fmt;
use std::sync::{Arc, RwLock};

use super::{ScheduleError, SCHEDULE_TOL};
use crate::scalar::Scalar;

/// One step of `θ_{k+1} = (1 + √(1 + 4θ_k²))/2`.
#[inline]
fn theta_next<T: Scalar>(theta: T) -> T {
    (T::one() + (T::one() + T::lit(4.0) * theta * theta).sqrt()) * T::lit(0.5)
}

type CustomTheta<T> = Arc<dyn Fn(usize) -> T + Send + Sync>;

#[derive(Clone)]
enum ThetaKind<T> {
    Exact(Arc<RwLock<Vec<T>>>),
    Simple,
    Custom(CustomTheta<T>),
}

/// θ_k for `k ≥ −1`, with `θ₋₁ = 0`.
///
/// The exact sequence is memoized; clones share the memo, and extension
/// takes the write lock while reads of an already-built prefix only take the
/// read lock.
#[derive(Clone)]
pub struct ThetaSchedule<T> {
    kind: ThetaKind<T>,
}

impl<T> fmt::Debug for ThetaSchedule<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.kind {
            ThetaKind::Exact(_) => "ThetaSchedule::Exact",
            ThetaKind::Simple => "ThetaSchedule::Simple",
            ThetaKind::Custom(_) => "ThetaSchedule::Custom",
        })
    }
}

impl<T: Scalar> ThetaSchedule<T> {
    pub fn exact() -> Self {
        Self {
            kind: ThetaKind::Exact(Arc::new(RwLock::new(vec![T::one()]))),
        }
    }

    /// `θ_k = (k + 2)/2`
    pub fn simple() -> Self {
        Self {
            kind: ThetaKind::Simple,
        }
    }

    /// Arbitrary θ_k for `k ≥ 0`; nothing is checked until [`Self::validate`].
    pub fn custom(f: impl Fn(usize) -> T + Send + Sync + 'static) -> Self {
        Self {
            kind: ThetaKind::Custom(Arc::new(f)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            ThetaKind::Exact(_) => "exact",
            ThetaKind::Simple => "simple",
            ThetaKind::Custom(_) => "custom",
        }
    }

    /// θ_k for `k ≥ 0`.
    pub fn at(&self, k: usize) -> T {
        match &self.kind {
            ThetaKind::Simple => T::from_usize_lossy(k + 2) * T::lit(0.5),
            ThetaKind::Custom(f) => f(k),
            ThetaKind::Exact(memo) => {
                {
                    let values = memo.read().unwrap_or_else(|e| e.into_inner());
                    if let Some(&v) = values.get(k) {
                        return v;
                    }
                }
                let mut values = memo.write().unwrap_or_else(|e| e.into_inner());
                while values.len() <= k {
                    let last = *values.last().expect("memo starts non-empty");
                    values.push(theta_next(last));
                }
                values[k]
            }
        }
    }

    /// θ_k for `k ≥ −1`.
    pub fn get(&self, k: i64) -> T {
        if k < 0 {
            T::zero()
        } else {
            self.at(k as usize)
        }
    }

    /// Checks `θ₀ = 1` (exact/custom) and
    /// `0 ≤ θ_{k+1}² − θ_{k+1} ≤ θ_k²` for `0 ≤ k < horizon`.
    pub fn validate(&self, horizon: usize) -> Result<(), ScheduleError> {
        let t0 = self.at(0);
        if (t0 - T::one()).abs() > T::lit(SCHEDULE_TOL) {
            return Err(ScheduleError::Invalid {
                k: 0,
                detail: format!("θ₀ = {t0}, expected 1"),
            });
        }
        for k in 0..horizon {
            let (a, b) = (self.at(k), self.at(k + 1));
            let lhs = b * b - b;
            let tol = T::lit(SCHEDULE_TOL) * (a * a).max(T::one());
            if !(a.is_finite() && b.is_finite()) || lhs < -tol || lhs > a * a + tol {
                return Err(ScheduleError::Invalid {
                    k: k + 1,
                    detail: format!(
                        "θ_{{k+1}}² − θ_{{k+1}} = {lhs} must lie in [0, θ_k² = {}]",
                        a * a
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Exact θ_k for `k ≥ −1`.
pub fn theta_exact<T: Scalar>(k: i64) -> T {
    if k < 0 {
        return T::zero();
    }
    let mut t = T::one();
    for _ in 0..k {
        t = theta_next(t);
    }
    t
}

/// `(k + 2)/2`
pub fn theta_simple<T: Scalar>(k: usize) -> T {
    T::from_usize_lossy(k + 2) * T::lit(0.5)
}

/// `φ_k = (1 + √(1 + 8θ_{k−1}²))/2`; `φ₀ = 1`.
pub fn phi_exact<T: Scalar>(k: usize, theta: &ThetaSchedule<T>) -> T {
    let prev = theta.get(k as i64 - 1);
    (T::one() + (T::one() + T::lit(8.0) * prev * prev).sqrt()) * T::lit(0.5)
}

/// `φ_k = (k + 1 + 1/√2)/√2` for `k ≥ 1`. At `k = 0` the constraint forces
/// `φ₀ = 1`, which the closed form does not produce.
pub fn phi_simple<T: Scalar>(k: usize) -> Result<T, ScheduleError> {
    if k == 0 {
        return Err(ScheduleError::Usage(
            "the simple φ formula starts at k = 1; use φ₀ = phi_exact(0) = 1".into(),
        ));
    }
    let r2 = T::lit(2.0).sqrt();
    Ok((T::from_usize_lossy(k + 1) + T::one() / r2) / r2)
}

#[derive(Debug, Clone)]
enum PhiKind {
    Exact,
    Simple,
}

/// φ_k for the last-step modification, paired with its θ schedule. The simple
/// variant returns the forced value `φ₀ = 1` at `k = 0`.
#[derive(Debug, Clone)]
pub struct PhiSchedule<T> {
    kind: PhiKind,
    theta: ThetaSchedule<T>,
}

impl<T: Scalar> PhiSchedule<T> {
    pub fn exact(theta: ThetaSchedule<T>) -> Self {
        Self {
            kind: PhiKind::Exact,
            theta,
        }
    }

    pub fn simple(theta: ThetaSchedule<T>) -> Self {
        Self {
            kind: PhiKind::Simple,
            theta,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            PhiKind::Exact => "exact",
            PhiKind::Simple => "simple",
        }
    }

    pub fn theta(&self) -> &ThetaSchedule<T> {
        &self.theta
    }

    pub fn is_simple(&self) -> bool {
        matches!(self.kind, PhiKind::Simple)
    }

    pub fn at(&self, k: usize) -> T {
        match self.kind {
            PhiKind::Exact => phi_exact(k, &self.theta),
            PhiKind::Simple if k == 0 => T::one(),
            PhiKind::Simple => phi_simple(k).expect("k ≥ 1"),
        }
    }

    /// Checks `0 ≤ φ_k² − φ_k ≤ 2θ_{k−1}²` for `0 ≤ k ≤ horizon`.
    pub fn validate(&self, horizon: usize) -> Result<(), ScheduleError> {
        for k in 0..=horizon {
            let p = self.at(k);
            let prev = self.theta.get(k as i64 - 1);
            let lhs = p * p - p;
            let cap = T::lit(2.0) * prev * prev;
            let tol = T::lit(SCHEDULE_TOL) * cap.max(T::one());
            if !p.is_finite() || lhs < -tol || lhs > cap + tol {
                return Err(ScheduleError::Invalid {
                    k,
                    detail: format!("φ_k² − φ_k = {lhs} must lie in [0, 2θ_{{k−1}}² = {cap}]"),
                });
            }
        }
        Ok(())
    }
}
