//! Sampled checks of the analytic properties every oracle claims.

use super::{gaussian, seeded_rng, ObjectiveOracle};
use crate::numkit::{NumError, Vector};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct AuditSummary<T> {
    pub samples: usize,
    /// Smallest normalized slack (or largest normalized error, for the
    /// gradient check) seen.
    pub worst: T,
    pub worst_index: usize,
    pub passed: bool,
}

/// `f(y) − f(x) − ⟨∇f(x), y − x⟩ − ‖∇f(x) − ∇f(y)‖⋆²/(2L)`, which is `≥ 0`
/// for convex L-smooth `f`.
pub fn cocoercivity_slack<T: Scalar>(oracle: &ObjectiveOracle<T>, x: &Vector<T>, y: &Vector<T>) -> Result<T, NumError> {
    let (fx, fy) = (oracle.value(x)?, oracle.value(y)?);
    let (gx, gy) = (oracle.gradient(x)?, oracle.gradient(y)?);
    cocoercivity_slack_from(oracle, x, y, fx, fy, &gx, &gy)
}

/// As [`cocoercivity_slack`], reusing known values and gradients.
pub(crate) fn cocoercivity_slack_from<T: Scalar>(
    oracle: &ObjectiveOracle<T>,
    x: &Vector<T>,
    y: &Vector<T>,
    fx: T,
    fy: T,
    gx: &Vector<T>,
    gy: &Vector<T>,
) -> Result<T, NumError> {
    let lin = gx.dot(&y.sub(x)?)?;
    let dg = oracle.norm().dual_norm_sq(&gx.sub(gy)?)?;
    Ok(fy - fx - lin - dg / (T::lit(2.0) * oracle.smoothness()))
}

/// Points around the reference (or the origin) at mixed radii.
fn sample_points<T: Scalar>(oracle: &ObjectiveOracle<T>, count: usize, seed: u64) -> Vec<Vector<T>> {
    let n = oracle.dim();
    let center = oracle
        .reference()
        .map(|r| r.point.clone())
        .unwrap_or_else(|| Vector::zeros(n));
    let mut rng = seeded_rng(seed);
    let radii = [0.1, 1.0, 3.0];
    (0..count)
        .map(|i| {
            let r = radii[i % radii.len()];
            let v: Vec<T> = (0..n).map(|_| T::lit(r * gaussian(&mut rng))).collect();
            center.add(&Vector::new(v).expect("n ≥ 1")).expect("same dimension")
        })
        .collect()
}

/// Cocoercivity on `pairs` seeded pairs; passes when every slack is
/// `≥ −1e-8·L·(1 + ‖x − y‖²)`.
pub fn sample_cocoercivity<T: Scalar>(oracle: &ObjectiveOracle<T>, pairs: usize, seed: u64) -> Result<AuditSummary<T>, NumError> {
    let pts = sample_points(oracle, 2 * pairs, seed);
    let mut worst = (T::infinity(), 0);
    for i in 0..pairs {
        let (x, y) = (&pts[2 * i], &pts[2 * i + 1]);
        let slack = cocoercivity_slack(oracle, x, y)?;
        let scale = oracle.smoothness() * (T::one() + oracle.norm().distance_sq(x, y)?);
        let normalized = slack / scale;
        if normalized < worst.0 {
            worst = (normalized, i);
        }
    }
    Ok(AuditSummary {
        samples: pairs,
        worst: worst.0,
        worst_index: worst.1,
        passed: worst.0 >= T::lit(-1e-8),
    })
}

/// Central differences against the analytic gradient; passes when
/// `‖g_fd − g‖ ≤ 1e-5·(‖g‖ + 1e-3·L·(1 + ‖x‖))` at every point. The second
/// term keeps the relative test meaningful near stationary points.
pub fn sample_gradient_check<T: Scalar>(oracle: &ObjectiveOracle<T>, points: usize, seed: u64) -> Result<AuditSummary<T>, NumError> {
    let pts = sample_points(oracle, points, seed);
    let n = oracle.dim();
    let step = T::epsilon().cbrt();
    let mut worst = (T::zero(), 0);
    for (p, x) in pts.iter().enumerate() {
        let g = oracle.gradient(x)?;
        let mut fd = Vector::zeros(n);
        for i in 0..n {
            let h = step * (T::one() + x[i].abs());
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[i] += h;
            xm[i] -= h;
            fd[i] = (oracle.value(&xp)? - oracle.value(&xm)?) / (xp[i] - xm[i]);
        }
        let err = fd.sub(&g)?.norm2();
        let scale = g.norm2() + T::lit(1e-3) * oracle.smoothness() * (T::one() + x.norm2());
        let rel = err / scale;
        if rel > worst.0 {
            worst = (rel, p);
        }
    }
    Ok(AuditSummary {
        samples: points,
        worst: worst.0,
        worst_index: worst.1,
        passed: worst.0 <= T::lit(1e-5),
    })
}

/// `f(y) − f(x) − ⟨∇f(x), y − x⟩ − (μ/2)‖y − x‖² ≥ −1e-8` on seeded pairs.
pub fn sample_strong_convexity<T: Scalar>(oracle: &ObjectiveOracle<T>, pairs: usize, seed: u64) -> Result<AuditSummary<T>, NumError> {
    let pts = sample_points(oracle, 2 * pairs, seed);
    let mu = oracle.strong_convexity();
    let mut worst = (T::infinity(), 0);
    for i in 0..pairs {
        let (x, y) = (&pts[2 * i], &pts[2 * i + 1]);
        let gx = oracle.gradient(x)?;
        let slack = oracle.value(y)? - oracle.value(x)? - gx.dot(&y.sub(x)?)?
            - T::lit(0.5) * mu * oracle.norm().distance_sq(x, y)?;
        if slack < worst.0 {
            worst = (slack, i);
        }
    }
    Ok(AuditSummary {
        samples: pairs,
        worst: worst.0,
        worst_index: worst.1,
        passed: worst.0 >= T::lit(-1e-8),
    })
}
