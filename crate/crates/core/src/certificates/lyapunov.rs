use super::{gap, reference, row, CertError};
use crate::methods::{Algorithm, Trace};
use crate::numkit::Vector;
use crate::schedules::{gamma_sc, CouplingMode, ScGamma};
use crate::scalar::Scalar;

/// `h(x) = f(x) − f⋆ − ‖∇f(x)‖⋆²/(2L)`, nonnegative for L-smooth convex `f`.
pub fn gap_term<T: Scalar>(trace: &Trace<T>, x: &Vector<T>, grad: &Vector<T>) -> Result<T, CertError> {
    let o = &trace.oracle;
    Ok(gap(trace, x)? - o.norm().dual_norm_sq(grad)? / (T::lit(2.0) * o.smoothness()))
}

fn dist_sq<T: Scalar>(trace: &Trace<T>, z: &Vector<T>) -> Result<T, CertError> {
    Ok(trace.oracle.norm().distance_sq(z, &reference(trace)?.point)?)
}

/// `‖z − c·Q⁻¹g/L − x⋆‖²`
fn shifted_dist_sq<T: Scalar>(trace: &Trace<T>, z: &Vector<T>, g: &Vector<T>, c: T) -> Result<T, CertError> {
    let o = &trace.oracle;
    let d = o.norm().apply_inverse(g)?;
    dist_sq(trace, &z.add_scaled(-c / o.smoothness(), &d)?)
}

fn need_theta<T: Scalar>(trace: &Trace<T>) -> Result<(), CertError> {
    if !trace.config.algorithm.uses_theta() {
        return Err(CertError::Usage(format!(
            "{} is not a θ-scheduled method",
            trace.config.algorithm
        )));
    }
    Ok(())
}

/// `U_k = θ_{k−1}²(f(y_k) − f⋆) + (L/2)‖z_k − x⋆‖²`
pub fn lyapunov_agm<T: Scalar>(trace: &Trace<T>, k: usize) -> Result<T, CertError> {
    need_theta(trace)?;
    let r = row(trace, k)?;
    let th = trace.config.theta.get(k as i64 - 1);
    let l = trace.oracle.smoothness();
    let weighted = if th > T::zero() { th * th * gap(trace, &r.y)? } else { T::zero() };
    Ok(weighted + T::lit(0.5) * l * dist_sq(trace, &r.z)?)
}

/// `U_k = 2θ_k²h(x_k) + (L/2)‖z_{k+1} − x⋆‖²` for `k ≥ 0`, and
/// `U₋₁ = (L/2)‖x₀ − x⋆‖²`.
pub fn lyapunov_ogm<T: Scalar>(trace: &Trace<T>, k: i64) -> Result<T, CertError> {
    need_theta(trace)?;
    let l = trace.oracle.smoothness();
    if k < 0 {
        return Ok(T::lit(0.5) * l * dist_sq(trace, &row(trace, 0)?.x)?);
    }
    let r = row(trace, k as usize)?;
    let th = trace.config.theta.at(k as usize);
    Ok(T::lit(2.0) * th * th * gap_term(trace, &r.x, &r.grad_x)? + T::lit(0.5) * l * dist_sq(trace, &r.z_next)?)
}

/// `Ũ_k = φ_k²(f(x̃_k) − f⋆) + (L/2)‖z_k − φ_k·Q⁻¹∇f(x̃_k)/L − x⋆‖²`
pub fn lyapunov_ogm_tilde<T: Scalar>(trace: &Trace<T>, k: usize) -> Result<T, CertError> {
    need_theta(trace)?;
    let phi = trace
        .config
        .phi
        .as_ref()
        .ok_or_else(|| CertError::Usage("trace was recorded without a last-step schedule".into()))?;
    let r = row(trace, k)?;
    let (xt, gt) = match (&r.x_tilde, &r.grad_xtilde) {
        (Some(x), Some(g)) => (x, g),
        _ => return Err(CertError::Usage("trace row has no x̃".into())),
    };
    let p = phi.at(k);
    let l = trace.oracle.smoothness();
    Ok(p * p * gap(trace, xt)? + T::lit(0.5) * l * shifted_dist_sq(trace, &r.z, gt, p)?)
}

fn sc_gamma<T: Scalar>(trace: &Trace<T>) -> Result<ScGamma<T>, CertError> {
    if !(trace.oracle.strong_convexity() > T::zero()) {
        return Err(CertError::Usage("strongly convex certificate needs μ > 0".into()));
    }
    gamma_sc(trace.oracle.condition_number()).map_err(|e| CertError::Usage(e.to_string()))
}

/// Unscaled SC-OGM potential `h(x_k) + (μ/2)‖z_{k+1} − x⋆‖²`; the step
/// inequality is `(1+γ)·Φ_k ≤ Φ_{k−1}`.
pub fn lyapunov_sc<T: Scalar>(trace: &Trace<T>, k: usize) -> Result<T, CertError> {
    sc_gamma(trace)?;
    let r = row(trace, k)?;
    let mu = trace.oracle.strong_convexity();
    Ok(gap_term(trace, &r.x, &r.grad_x)? + T::lit(0.5) * mu * dist_sq(trace, &r.z_next)?)
}

/// `U_k = (1+γ)^k·(h(x_k) + (μ/2)‖z_{k+1} − x⋆‖²)`
pub fn lyapunov_sc_ogm<T: Scalar>(trace: &Trace<T>, k: usize) -> Result<T, CertError> {
    let g = sc_gamma(trace)?;
    Ok((T::one() + g.gamma).powf(T::from_usize_lossy(k)) * lyapunov_sc(trace, k)?)
}

/// `Ũ_k = (1+γ)^{k−1}·(2γ/(1+γ)·(f(x_k) − f⋆) + (μ/2)‖z_k − ((γ+2)/γ)·Q⁻¹∇f(x_k)/L − x⋆‖²)`, `k ≥ 1`.
pub fn lyapunov_sc_ogm_tilde<T: Scalar>(trace: &Trace<T>, k: usize) -> Result<T, CertError> {
    let g = sc_gamma(trace)?.gamma;
    if k == 0 {
        return Err(CertError::Usage("the secondary SC-OGM potential starts at k = 1".into()));
    }
    let r = row(trace, k)?;
    let mu = trace.oracle.strong_convexity();
    let one = T::one();
    let inner = T::lit(2.0) * g / (one + g) * gap(trace, &r.x)?
        + T::lit(0.5) * mu * shifted_dist_sq(trace, &r.z, &r.grad_x, (g + T::lit(2.0)) / g)?;
    Ok((one + g).powf(T::from_usize_lossy(k - 1)) * inner)
}

/// Both sides of a per-step linear-coupling inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcStep<T> {
    pub lhs: T,
    pub rhs: T,
}

/// Mirror-step scale `t` of the equivalent OGM-mode coupling
/// (`α_{k+1} = 2θ_k/L`). AGM-mode coupling with scale `t` is OGM-mode
/// coupling with scale `t/2`; plain AGM and OGM are `t = ½` and `t = 1`.
pub(crate) fn effective_t<T: Scalar>(trace: &Trace<T>) -> Result<T, CertError> {
    let c = &trace.config;
    Ok(match c.algorithm {
        Algorithm::Agm | Algorithm::AgmZ => T::lit(0.5),
        Algorithm::Ogm | Algorithm::OgmZ | Algorithm::SimpleOgm => T::one(),
        Algorithm::Unified | Algorithm::UnifiedZ => c.t,
        Algorithm::Lc => match c.coupling {
            CouplingMode::Ogm => c.t,
            CouplingMode::Agm => c.t * T::lit(0.5),
        },
        other => return Err(CertError::Usage(format!("{other} is not a linear-coupling method"))),
    })
}

/// One coupling step: `lhs = Φ_k = (α_{k+1}²L/2)h(x_k) + V_{z_{k+1}}(x⋆)` and
/// `rhs = ((α_{k+1}²L − 2α_{k+1})/2)h(x_{k−1}) + V_{z_k}(x⋆)`, with
/// `V_z(x) = ‖z − x‖²/(2t)` and `x₋₁ = x₀`.
pub fn lyapunov_lc<T: Scalar>(trace: &Trace<T>, k: usize) -> Result<LcStep<T>, CertError> {
    let t = effective_t(trace)?;
    let l = trace.oracle.smoothness();
    let a = T::lit(2.0) * trace.config.theta.at(k) / l;
    let r = row(trace, k)?;
    let prev = row(trace, k.saturating_sub(1))?;
    let two_t = T::lit(2.0) * t;
    let lhs = a * a * l * T::lit(0.5) * gap_term(trace, &r.x, &r.grad_x)? + dist_sq(trace, &r.z_next)? / two_t;
    let coef = (a * a * l - T::lit(2.0) * a) * T::lit(0.5);
    let h_prev = if coef == T::zero() { T::zero() } else { gap_term(trace, &prev.x, &prev.grad_x)? };
    let rhs = coef * h_prev + dist_sq(trace, &r.z)? / two_t;
    Ok(LcStep { lhs, rhs })
}

/// Last-step coupling with `α̃_{k+1} = φ_k/L` and `z′ = z_k − α̃_{k+1}·t·Q⁻¹∇f(x̃_k)`:
/// `lhs = α̃_{k+1}²L(f(x̃_k) − f⋆) + V_{z′}(x⋆)`,
/// `rhs = (α̃_{k+1}²L − α̃_{k+1})h(x_{k−1}) + V_{z_k}(x⋆)`.
pub fn lyapunov_lc_tilde<T: Scalar>(trace: &Trace<T>, k: usize) -> Result<LcStep<T>, CertError> {
    let t = effective_t(trace)?;
    let phi = trace
        .config
        .phi
        .as_ref()
        .ok_or_else(|| CertError::Usage("trace was recorded without a last-step schedule".into()))?;
    let r = row(trace, k)?;
    let prev = row(trace, k.saturating_sub(1))?;
    let (xt, gt) = match (&r.x_tilde, &r.grad_xtilde) {
        (Some(x), Some(g)) => (x, g),
        _ => return Err(CertError::Usage("trace row has no x̃".into())),
    };
    let l = trace.oracle.smoothness();
    let p = phi.at(k);
    let a = p / l;
    let two_t = T::lit(2.0) * t;
    let lhs = a * a * l * gap(trace, xt)? + shifted_dist_sq(trace, &r.z, gt, p * t)? / two_t;
    let coef = a * a * l - a;
    let h_prev = if coef == T::zero() { T::zero() } else { gap_term(trace, &prev.x, &prev.grad_x)? };
    let rhs = coef * h_prev + dist_sq(trace, &r.z)? / two_t;
    Ok(LcStep { lhs, rhs })
}
