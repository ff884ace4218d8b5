use super::ScheduleError;

/// Summary of θ_k against its expansion `(k + ζ + 1)/2 + (log k)/4` over
/// `1 ≤ k ≤ horizon`.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticScan {
    pub horizon: usize,
    /// `ζ̂(K) = 2θ_K − K − 1 − (log K)/2`
    pub zeta: f64,
    /// `|ζ̂(K) − ζ̂(K/10)|`
    pub residual: f64,
    /// `max c_k` over `2 ≤ k ≤ K`, with `c_k = (θ_k − (k+2)/2)/log k`.
    pub c_max: f64,
    pub c_argmax: usize,
    /// First `k ≥ 2` with `c_k ≥ ¼`.
    pub c_first_violation: Option<usize>,
    /// First `k ≥ 2` with `e_k > e_{k−1}`, where `e_k = ζ̂(k)`.
    pub e_first_increase: Option<usize>,
    pub e_min: f64,
    /// `(k, ζ̂(k))` at `k = 10, 100, …` up to the horizon.
    pub decades: Vec<(usize, f64)>,
}

/// Replays θ_k as the offset `d_k = θ_k − (k+2)/2`, which stays `O(log k)`:
/// with `a = (k+2)/2`,
/// `d_{k+1} = (¼ + 2a·d_k + d_k²)/(√(θ_k² + ¼) + a)`.
/// Carrying the small offset instead of θ_k itself keeps the full relative
/// precision of `f64` in the quantity the estimator needs.
pub fn scan_asymptotics(horizon: usize) -> AsymptoticScan {
    let mut d = 0.0f64; // d_0 = θ₀ − 1
    let mut zeta_prev = f64::NAN;
    let mut scan = AsymptoticScan {
        horizon,
        zeta: f64::NAN,
        residual: f64::NAN,
        c_max: f64::NEG_INFINITY,
        c_argmax: 0,
        c_first_violation: None,
        e_first_increase: None,
        e_min: f64::INFINITY,
        decades: Vec::new(),
    };
    let mut next_decade = 10usize;
    for k in 0..horizon {
        let a = (k as f64 + 2.0) * 0.5;
        let theta = a + d;
        d = (0.25 + 2.0 * a * d + d * d) / ((theta * theta + 0.25).sqrt() + a);
        let k1 = k + 1;
        let ln = (k1 as f64).ln();
        let zeta = 2.0 * d + 1.0 - 0.5 * ln;
        if k1 >= 2 {
            let c = d / ln;
            if c > scan.c_max {
                scan.c_max = c;
                scan.c_argmax = k1;
            }
            if c >= 0.25 && scan.c_first_violation.is_none() {
                scan.c_first_violation = Some(k1);
            }
            if zeta > zeta_prev && scan.e_first_increase.is_none() {
                scan.e_first_increase = Some(k1);
            }
        }
        scan.e_min = scan.e_min.min(zeta);
        zeta_prev = zeta;
        if k1 == next_decade {
            scan.decades.push((k1, zeta));
            next_decade = next_decade.saturating_mul(10);
        }
        if k1 == horizon {
            scan.zeta = zeta;
        }
    }
    let tenth = horizon / 10;
    let zeta_tenth = if tenth >= 1 {
        let mut d = 0.0f64;
        for k in 0..tenth {
            let a = (k as f64 + 2.0) * 0.5;
            let theta = a + d;
            d = (0.25 + 2.0 * a * d + d * d) / ((theta * theta + 0.25).sqrt() + a);
        }
        2.0 * d + 1.0 - 0.5 * (tenth as f64).ln()
    } else {
        f64::NAN
    };
    scan.residual = (scan.zeta - zeta_tenth).abs();
    scan
}

/// `(ζ̂(K), |ζ̂(K) − ζ̂(K/10)|)` for `K ≥ 100`.
pub fn estimate_zeta(horizon: usize) -> Result<(f64, f64), ScheduleError> {
    if horizon < 100 {
        return Err(ScheduleError::Usage(format!(
            "ζ estimation needs K ≥ 100, got {horizon}"
        )));
    }
    let s = scan_asymptotics(horizon);
    Ok((s.zeta, s.residual))
}
