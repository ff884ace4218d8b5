use super::CertError;
use crate::schedules::{CouplingSchedule, PhiSchedule, ScGamma, ThetaSchedule};
use crate::scalar::Scalar;

fn need_k1(k: usize) -> Result<(), CertError> {
    if k == 0 {
        return Err(CertError::Usage("the bound starts at k = 1".into()));
    }
    Ok(())
}

/// OGM: `f(y_k) − f⋆ ≤ L·R²/(4θ_{k−1}²)`, `k ≥ 1`. With `θ_k = (k+2)/2`
/// this is `L·R²/(k+1)²`.
pub fn bound_ogm_primary<T: Scalar>(k: usize, theta: &ThetaSchedule<T>, l: T, r2: T) -> Result<T, CertError> {
    need_k1(k)?;
    let th = theta.at(k - 1);
    Ok(l * r2 / (T::lit(4.0) * th * th))
}

/// AGM: `f(y_k) − f⋆ ≤ L·R²/(2θ_{k−1}²)`, `k ≥ 1`.
pub fn bound_agm<T: Scalar>(k: usize, theta: &ThetaSchedule<T>, l: T, r2: T) -> Result<T, CertError> {
    need_k1(k)?;
    let th = theta.at(k - 1);
    Ok(l * r2 / (T::lit(2.0) * th * th))
}

/// Last step: `f(x̃_k) − f⋆ ≤ L·R²/(2φ_k²)`, `k ≥ 0`.
pub fn bound_ogm_secondary<T: Scalar>(k: usize, phi: &PhiSchedule<T>, l: T, r2: T) -> T {
    let p = phi.at(k);
    l * r2 / (T::lit(2.0) * p * p)
}

/// Simple-φ form `L·R²/(k + 1 + 1/√2)²`, `k ≥ 1`.
pub fn bound_ogm_secondary_simple<T: Scalar>(k: usize, l: T, r2: T) -> Result<T, CertError> {
    need_k1(k)?;
    let d = T::from_usize_lossy(k + 1) + T::one() / T::lit(2.0).sqrt();
    Ok(l * r2 / (d * d))
}

/// SC-OGM, `k ≥ 1`: `f(y_k) − f⋆ ≤ (1+γ)^{−k+1}·(μ+2L)/2·R²` and
/// `f(x_k) − f⋆ ≤ (1+γ)^{−k+2}/(2γ)·(μ+2L)/2·R²`.
pub fn bound_sc_ogm<T: Scalar>(k: usize, gamma: &ScGamma<T>, mu: T, l: T, r2: T) -> Result<(T, T), CertError> {
    need_k1(k)?;
    let g = gamma.gamma;
    let base = (mu + T::lit(2.0) * l) * T::lit(0.5) * r2;
    let kf = T::from_usize_lossy(k);
    let primary = (T::one() + g).powf(T::one() - kf) * base;
    let secondary = (T::one() + g).powf(T::lit(2.0) - kf) / (T::lit(2.0) * g) * base;
    Ok((primary, secondary))
}

/// SC-AGM: `f(y_k) − f⋆ ≤ (1 − 1/√κ)^k·(μ+L)/2·R²`, `k ≥ 0`.
pub fn bound_sc_agm<T: Scalar>(k: usize, mu: T, l: T, r2: T) -> T {
    let q = T::one() - (mu / l).sqrt();
    q.powf(T::from_usize_lossy(k)) * (mu + l) * T::lit(0.5) * r2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcBound {
    /// `f(y_k) − f⋆ ≤ 2V₀/(Lα_k²)`, `k ≥ 1`
    Primary,
    /// `f(x̃_k) − f⋆ ≤ V₀/(Lα̃_{k+1}²)`, `k ≥ 0`
    Secondary,
}

/// Linear-coupling bounds with `V₀ = V_{x₀}(x⋆)`.
pub fn bound_lc<T: Scalar>(k: usize, coupling: &CouplingSchedule<T>, l: T, v0: T, which: LcBound) -> Result<T, CertError> {
    match which {
        LcBound::Primary => {
            need_k1(k)?;
            let a = coupling.alpha(k);
            Ok(T::lit(2.0) * v0 / (l * a * a))
        }
        LcBound::Secondary => {
            let a = coupling
                .tilde_alpha(k + 1)
                .ok_or_else(|| CertError::Usage("coupling has no last-step sequence".into()))?;
            Ok(v0 / (l * a * a))
        }
    }
}
