use super::lyapunov::effective_t;
use super::{
    bound_agm, bound_ogm_primary, bound_ogm_secondary, bound_ogm_secondary_simple, bound_sc_agm,
    bound_sc_ogm, gap, gap_term, initial_distance_sq, lyapunov_agm, lyapunov_lc, lyapunov_lc_tilde,
    lyapunov_ogm, lyapunov_ogm_tilde, lyapunov_sc, lyapunov_sc_ogm_tilde, reference, row, CertError,
};
use crate::methods::{Algorithm, Trace};
use crate::problems::audit::cocoercivity_slack_from;
use crate::schedules::gamma_sc;
use crate::scalar::Scalar;

/// Tolerance model shared by every certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    /// Relative to `1 + |U₀|`.
    pub base: T,
    /// Per-iteration drift relative to `|U₀|`.
    pub drift: T,
    /// Reference error in function-value units; zero for exact references.
    pub eps_ref: T,
    /// Evaluation roundoff in function-value units.
    pub eps_round: T,
}

impl<T: Scalar> Tolerance<T> {
    /// Default model for `trace`. A refined reference with stationarity
    /// residual `r` contributes `ε_ref = r·(1 + ‖x_ref‖)`, which bounds
    /// `f(x_ref) − f⋆` whenever `‖x_ref − x⋆‖ ≤ 1 + ‖x_ref‖`.
    pub fn for_trace(trace: &Trace<T>) -> Result<Self, CertError> {
        let r = reference(trace)?;
        let o = &trace.oracle;
        let eps_ref = if r.exact {
            T::zero()
        } else {
            r.residual * (T::one() + o.norm().primal_norm(&r.point)?)
        };
        let scale = T::one() + r.value.abs() + o.smoothness() * o.norm().primal_norm_sq(&r.point)?;
        Ok(Self {
            base: T::lit(1e-9),
            drift: T::lit(1e-12),
            eps_ref,
            eps_round: T::lit(64.0) * T::epsilon() * scale,
        })
    }

    /// `tol_k` for a potential with initial value `u0` that weights `f − f⋆`
    /// by `weight` at step `k`.
    pub fn at(&self, k: usize, u0: T, weight: T) -> T {
        let u = u0.abs();
        self.base * (T::one() + u)
            + T::from_usize_lossy(k) * self.drift * u
            + (T::one() + weight.abs()) * (self.eps_ref + self.eps_round)
    }

    /// Tolerance for a single function-value gap `f − f⋆` of size `gap`.
    pub fn gap(&self, gap: T) -> T {
        self.base * (T::one() + gap.abs()) + self.eps_ref + self.eps_round
    }
}

/// One certificate row. Fields a method's analysis does not define are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertRow<T> {
    pub k: i64,
    /// Primary potential `U_k` (for linear coupling, `Φ_k`).
    pub lyap: Option<T>,
    /// `U_k − U_{k−1}`; for linear coupling, left minus right side of the
    /// per-step inequality.
    pub dlyap: Option<T>,
    pub bound: Option<T>,
    pub gap: Option<T>,
    pub slack: Option<T>,
    /// Secondary potential `Ũ_k`.
    pub lyap_tilde: Option<T>,
    /// `Ũ_k − U_{k−1}` (or the secondary per-step inequality).
    pub chain: Option<T>,
    pub bound_secondary: Option<T>,
    pub gap_secondary: Option<T>,
    pub slack_secondary: Option<T>,
    /// `h(x_k)`
    pub h: Option<T>,
    /// Tolerance on potential differences.
    pub tol: T,
    /// Tolerance on slacks and `h`.
    pub tol_gap: T,
    pub violated: bool,
}

impl<T: Scalar> CertRow<T> {
    fn empty(k: i64) -> Self {
        Self {
            k,
            lyap: None,
            dlyap: None,
            bound: None,
            gap: None,
            slack: None,
            lyap_tilde: None,
            chain: None,
            bound_secondary: None,
            gap_secondary: None,
            slack_secondary: None,
            h: None,
            tol: T::zero(),
            tol_gap: T::zero(),
            violated: false,
        }
    }

    fn with_bound(mut self, bound: T, gap: T) -> Self {
        self.bound = Some(bound);
        self.gap = Some(gap);
        self.slack = Some(bound - gap);
        self
    }

    fn with_secondary(mut self, bound: T, gap: T) -> Self {
        self.bound_secondary = Some(bound);
        self.gap_secondary = Some(gap);
        self.slack_secondary = Some(bound - gap);
        self
    }

    fn judge(&mut self) {
        let neg = |v: Option<T>, tol: T| v.is_some_and(|s| s < -tol || s.is_nan());
        let pos = |v: Option<T>, tol: T| v.is_some_and(|s| s > tol || s.is_nan());
        self.violated = neg(self.slack, self.tol_gap)
            || neg(self.slack_secondary, self.tol_gap)
            || neg(self.h, self.tol_gap)
            || pos(self.dlyap, self.tol)
            || pos(self.chain, self.tol);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport<T> {
    pub name: String,
    pub rows: Vec<CertRow<T>>,
    pub tolerance: Tolerance<T>,
    /// Initial potential `U₀` the tolerances are scaled by.
    pub u0: T,
    /// Smallest slack over all rows, primary and secondary.
    pub worst_slack: Option<T>,
    /// Largest `U_k − U_{k−1}` (or chain/per-step defect) over all rows.
    pub worst_increase: Option<T>,
    pub first_violation: Option<i64>,
    /// Strongly convex OGM: largest one-step ratio of the unscaled potential,
    /// to compare with `1/(1+γ)`.
    pub contraction_max: Option<T>,
    /// Strongly convex OGM: `(U₀, (μ+2L)/2·‖x₀ − x⋆‖²)`.
    pub u0_check: Option<(T, T)>,
}

impl<T: Scalar> CertificateReport<T> {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }

    fn finish(name: String, mut rows: Vec<CertRow<T>>, tolerance: Tolerance<T>, u0: T) -> Self {
        rows.iter_mut().for_each(CertRow::judge);
        let fold_min = |acc: Option<T>, v: Option<T>| match (acc, v) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let worst_slack = rows
            .iter()
            .flat_map(|r| [r.slack, r.slack_secondary])
            .fold(None, fold_min);
        let worst_increase = rows
            .iter()
            .flat_map(|r| [r.dlyap, r.chain])
            .map(|v| v.map(|x| -x))
            .fold(None, fold_min)
            .map(|x| -x);
        let first_violation = rows.iter().find(|r| r.violated).map(|r| r.k);
        Self {
            name,
            rows,
            tolerance,
            u0,
            worst_slack,
            worst_increase,
            first_violation,
            contraction_max: None,
            u0_check: None,
        }
    }
}

/// Evaluates the certificate matching the trace's method: every potential,
/// its per-step change, and every applicable rate bound against the measured
/// gap.
pub fn certify<T: Scalar>(trace: &Trace<T>) -> Result<CertificateReport<T>, CertError> {
    certify_with(trace, Tolerance::for_trace(trace)?)
}

/// [`certify`] under a caller-supplied tolerance model.
pub fn certify_with<T: Scalar>(trace: &Trace<T>, tol: Tolerance<T>) -> Result<CertificateReport<T>, CertError> {
    if trace.rows.len() < 2 {
        return Err(CertError::Usage("certificates need at least one step".into()));
    }
    let name = format!("{} on {}", trace.config.label(), trace.oracle.name());
    match trace.config.algorithm {
        Algorithm::Agm | Algorithm::AgmZ => certify_agm(trace, tol, name),
        Algorithm::Ogm | Algorithm::OgmZ | Algorithm::SimpleOgm => certify_ogm(trace, tol, name),
        Algorithm::Lc | Algorithm::Unified | Algorithm::UnifiedZ => certify_lc(trace, tol, name),
        Algorithm::ScOgm | Algorithm::LcScOgm => certify_sc_ogm(trace, tol, name),
        Algorithm::ScAgm => certify_sc_agm(trace, tol, name),
    }
}

fn f_gap<T: Scalar>(trace: &Trace<T>, k: usize) -> Result<T, CertError> {
    Ok(row(trace, k)?.f_y - reference(trace)?.value)
}

fn h_at<T: Scalar>(trace: &Trace<T>, k: usize) -> Result<T, CertError> {
    let r = row(trace, k)?;
    gap_term(trace, &r.x, &r.grad_x)
}

fn certify_agm<T: Scalar>(trace: &Trace<T>, tol: Tolerance<T>, name: String) -> Result<CertificateReport<T>, CertError> {
    let (l, r2) = (trace.oracle.smoothness(), initial_distance_sq(trace)?);
    let theta = &trace.config.theta;
    let u0 = lyapunov_agm(trace, 0)?;
    let mut rows = Vec::with_capacity(trace.rows.len());
    let mut prev = u0;
    for k in 0..trace.rows.len() {
        let u = lyapunov_agm(trace, k)?;
        let g = f_gap(trace, k)?;
        let th = theta.get(k as i64 - 1);
        let mut r = CertRow::empty(k as i64);
        r.lyap = Some(u);
        r.h = Some(h_at(trace, k)?);
        r.tol = tol.at(k, u0, th * th);
        r.tol_gap = tol.gap(g);
        if k >= 1 {
            r.dlyap = Some(u - prev);
            r = r.with_bound(bound_agm(k, theta, l, r2)?, g);
        } else {
            r.gap = Some(g);
        }
        prev = u;
        rows.push(r);
    }
    Ok(CertificateReport::finish(name, rows, tol, u0))
}

fn certify_ogm<T: Scalar>(trace: &Trace<T>, tol: Tolerance<T>, name: String) -> Result<CertificateReport<T>, CertError> {
    let (l, r2) = (trace.oracle.smoothness(), initial_distance_sq(trace)?);
    let theta = &trace.config.theta;
    let phi = trace.config.phi.as_ref();
    let u0 = lyapunov_ogm(trace, -1)?;
    let mut rows = Vec::with_capacity(trace.rows.len() + 1);
    let mut start = CertRow::empty(-1);
    start.lyap = Some(u0);
    start.tol = tol.at(0, u0, T::zero());
    rows.push(start);
    let mut prev = u0;
    for k in 0..trace.rows.len() {
        let u = lyapunov_ogm(trace, k as i64)?;
        let g = f_gap(trace, k)?;
        let th = theta.at(k);
        let mut r = CertRow::empty(k as i64);
        r.lyap = Some(u);
        r.dlyap = Some(u - prev);
        r.h = Some(h_at(trace, k)?);
        r.tol = tol.at(k + 1, u0, T::lit(2.0) * th * th);
        r.tol_gap = tol.gap(g);
        r = if k >= 1 {
            r.with_bound(bound_ogm_primary(k, theta, l, r2)?, g)
        } else {
            CertRow { gap: Some(g), ..r }
        };
        if let Some(phi) = phi {
            let ut = lyapunov_ogm_tilde(trace, k)?;
            let gt = row(trace, k)?.f_xtilde.expect("last-step rows carry f(x̃)") - reference(trace)?.value;
            r.lyap_tilde = Some(ut);
            r.chain = Some(ut - prev);
            let p = phi.at(k);
            r.tol = r.tol.max(tol.at(k + 1, u0, p * p));
            r.tol_gap = r.tol_gap.max(tol.gap(gt));
            let b = if phi.is_simple() {
                (k >= 1).then(|| bound_ogm_secondary_simple(k, l, r2)).transpose()?
            } else {
                Some(bound_ogm_secondary(k, phi, l, r2))
            };
            r = match b {
                Some(b) => r.with_secondary(b, gt),
                None => CertRow { gap_secondary: Some(gt), ..r },
            };
        }
        prev = u;
        rows.push(r);
    }
    Ok(CertificateReport::finish(name, rows, tol, u0))
}

fn certify_lc<T: Scalar>(trace: &Trace<T>, tol: Tolerance<T>, name: String) -> Result<CertificateReport<T>, CertError> {
    let (l, r2) = (trace.oracle.smoothness(), initial_distance_sq(trace)?);
    let t = effective_t(trace)?;
    let theta = &trace.config.theta;
    let phi = trace.config.phi.as_ref();
    // V₀ = ‖x₀ − x⋆‖²/(2t)
    let u0 = r2 / (T::lit(2.0) * t);
    let mut rows = Vec::with_capacity(trace.rows.len());
    for k in 0..trace.rows.len() {
        let step = lyapunov_lc(trace, k)?;
        let g = f_gap(trace, k)?;
        let a = T::lit(2.0) * theta.at(k) / l;
        let mut r = CertRow::empty(k as i64);
        r.lyap = Some(step.lhs);
        r.dlyap = Some(step.lhs - step.rhs);
        r.h = Some(h_at(trace, k)?);
        r.tol = tol.at(k, u0, a * a * l);
        r.tol_gap = tol.gap(g);
        r = if k >= 1 {
            let th = theta.at(k - 1);
            // 2V₀/(Lα_k²) with α_k = 2θ_{k−1}/L
            r.with_bound(l * r2 / (T::lit(4.0) * t * th * th), g)
        } else {
            CertRow { gap: Some(g), ..r }
        };
        if let Some(phi) = phi {
            let step = lyapunov_lc_tilde(trace, k)?;
            let gt = row(trace, k)?.f_xtilde.expect("last-step rows carry f(x̃)") - reference(trace)?.value;
            let p = phi.at(k);
            r.lyap_tilde = Some(step.lhs);
            r.chain = Some(step.lhs - step.rhs);
            r.tol = r.tol.max(tol.at(k, u0, p * p / l));
            r.tol_gap = r.tol_gap.max(tol.gap(gt));
            // V₀/(Lα̃_{k+1}²) with α̃_{k+1} = φ_k/L
            r = r.with_secondary(l * r2 / (T::lit(2.0) * t * p * p), gt);
        }
        rows.push(r);
    }
    Ok(CertificateReport::finish(name, rows, tol, u0))
}

fn certify_sc_ogm<T: Scalar>(trace: &Trace<T>, tol: Tolerance<T>, name: String) -> Result<CertificateReport<T>, CertError> {
    let o = &trace.oracle;
    let (l, mu, r2) = (o.smoothness(), o.strong_convexity(), initial_distance_sq(trace)?);
    let gamma = gamma_sc(o.condition_number()).map_err(|e| CertError::Usage(e.to_string()))?;
    let g1 = T::one() + gamma.gamma;
    let v0 = lyapunov_sc(trace, 0)?;
    let u0_bound = (mu + T::lit(2.0) * l) * T::lit(0.5) * r2;
    // The geometric weight (1+γ)^k magnifies roundoff in V_k: once V_{k−1}
    // is at the evaluation floor the step is not checkable, and ratios are
    // only meaningful well above it.
    let noise = tol.eps_round + tol.eps_ref;
    let floor = T::lit(1e6) * noise;
    let mut rows = Vec::with_capacity(trace.rows.len());
    let mut contraction: Option<T> = None;
    let mut prev_v = v0;
    let mut weight = T::one();
    for k in 0..trace.rows.len() {
        let v = lyapunov_sc(trace, k)?;
        let g = f_gap(trace, k)?;
        let mut r = CertRow::empty(k as i64);
        r.lyap = Some(weight * v);
        r.h = Some(h_at(trace, k)?);
        r.tol = tol.at(k, v0, weight);
        r.tol_gap = tol.gap(g);
        if k >= 1 {
            let checkable = prev_v > T::lit(100.0) * noise;
            if checkable {
                r.dlyap = Some(weight * v - weight / g1 * prev_v);
            }
            let gx = gap(trace, &row(trace, k)?.x)?;
            let (b, bx) = bound_sc_ogm(k, &gamma, mu, l, r2)?;
            r = r.with_bound(b, g).with_secondary(bx, gx);
            let ut = lyapunov_sc_ogm_tilde(trace, k)?;
            r.lyap_tilde = Some(ut);
            if checkable {
                r.chain = Some(ut - weight / g1 * prev_v);
            }
            r.tol_gap = r.tol_gap.max(tol.gap(gx));
            if prev_v > floor {
                let ratio = v / prev_v;
                contraction = Some(contraction.map_or(ratio, |c: T| c.max(ratio)));
            }
        } else {
            r.gap = Some(g);
        }
        prev_v = v;
        weight = weight * g1;
        rows.push(r);
    }
    let mut report = CertificateReport::finish(name, rows, tol, v0);
    report.contraction_max = contraction;
    report.u0_check = Some((v0, u0_bound));
    Ok(report)
}

fn certify_sc_agm<T: Scalar>(trace: &Trace<T>, tol: Tolerance<T>, name: String) -> Result<CertificateReport<T>, CertError> {
    let o = &trace.oracle;
    let (l, mu, r2) = (o.smoothness(), o.strong_convexity(), initial_distance_sq(trace)?);
    let u0 = (mu + l) * T::lit(0.5) * r2;
    let mut rows = Vec::with_capacity(trace.rows.len());
    for k in 0..trace.rows.len() {
        let g = f_gap(trace, k)?;
        let mut r = CertRow::empty(k as i64).with_bound(bound_sc_agm(k, mu, l, r2), g);
        r.h = Some(h_at(trace, k)?);
        r.tol = tol.at(k, u0, T::one());
        r.tol_gap = tol.gap(g);
        rows.push(r);
    }
    Ok(CertificateReport::finish(name, rows, tol, u0))
}

/// Smooth-convex interpolation inequality
/// `f(y) ≥ f(x) + ⟨∇f(x), y − x⟩ + ‖∇f(x) − ∇f(y)‖⋆²/(2L)` on every
/// consecutive pair `(x_k, x_{k+1})` and on `(x_k, x⋆)`, in both orders.
/// Row `k` reports the smallest slack among its pairs in `slack`.
pub fn check_cocoercivity_chain<T: Scalar>(trace: &Trace<T>) -> Result<CertificateReport<T>, CertError> {
    let tol = Tolerance::for_trace(trace)?;
    let o = &trace.oracle;
    let reference = reference(trace)?;
    let xs = &reference.point;
    let gs = o.gradient(xs)?;
    let fs = reference.value;
    let l = o.smoothness();
    let pair_tol = |fx: T, fy: T, d2: T, uses_ref: bool| {
        let scale = T::one() + fx.abs() + fy.abs() + l * d2;
        tol.base * scale + tol.eps_round + if uses_ref { tol.eps_ref } else { T::zero() }
    };
    let mut rows = Vec::with_capacity(trace.rows.len());
    for k in 0..trace.rows.len() {
        let a = row(trace, k)?;
        let mut worst: Option<(T, T)> = None;
        let mut push = |s: T, t: T| {
            if worst.is_none_or(|(ws, wt)| s + t < ws + wt || s.is_nan()) {
                worst = Some((s, t));
            }
        };
        if let Some(b) = trace.rows.get(k + 1) {
            let d2 = o.norm().distance_sq(&a.x, &b.x)?;
            let t = pair_tol(a.f_x, b.f_x, d2, false);
            push(cocoercivity_slack_from(o, &a.x, &b.x, a.f_x, b.f_x, &a.grad_x, &b.grad_x)?, t);
            push(cocoercivity_slack_from(o, &b.x, &a.x, b.f_x, a.f_x, &b.grad_x, &a.grad_x)?, t);
        }
        let d2 = o.norm().distance_sq(&a.x, xs)?;
        let t = pair_tol(a.f_x, fs, d2, true);
        push(cocoercivity_slack_from(o, &a.x, xs, a.f_x, fs, &a.grad_x, &gs)?, t);
        push(cocoercivity_slack_from(o, xs, &a.x, fs, a.f_x, &gs, &a.grad_x)?, t);
        let (s, t) = worst.expect("at least one pair per row");
        let mut r = CertRow::empty(k as i64);
        r.slack = Some(s);
        r.tol_gap = t;
        r.tol = t;
        rows.push(r);
    }
    let name = format!("cocoercivity on {}", o.name());
    let u0 = rows.first().map_or(T::zero(), |r| r.tol_gap);
    Ok(CertificateReport::finish(name, rows, tol, u0))
}
