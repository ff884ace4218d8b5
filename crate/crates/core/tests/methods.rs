use std::sync::Arc;

use ogm_lab::methods::{run, Algorithm, MethodConfig, MethodError, MethodState, Stepper, Trace};
use ogm_lab::numkit::{Matrix, QuadraticNorm, Vector};
use ogm_lab::problems::{make_quadratic, ObjectiveOracle, ProblemSpec, Quadratic};
use ogm_lab::schedules::{gamma_sc, sc_agm_momentum, CouplingMode, PhiSchedule, ThetaSchedule};

fn v(x: &[f64]) -> Vector<f64> {
    Vector::from_f64(x).unwrap()
}

fn quad(diag: &[f64], b: &[f64]) -> ObjectiveOracle<f64> {
    Quadratic::new(Matrix::diag_f64(diag).unwrap(), v(b))
        .unwrap()
        .into_oracle(Arc::new(QuadraticNorm::identity(diag.len())), "diag")
        .unwrap()
}

fn seeded(n: usize, kappa: f64, seed: u64) -> ObjectiveOracle<f64> {
    make_quadratic(&ProblemSpec::quadratic(n, kappa, seed), Arc::new(QuadraticNorm::identity(n))).unwrap()
}

fn x0(n: usize) -> Vector<f64> {
    Vector::from_f64(&(0..n).map(|i| 1.0 - 0.3 * i as f64).collect::<Vec<_>>()).unwrap()
}

/// Largest coordinate error between two traces, relative to each row's scale.
fn trajectory_gap(a: &Trace<f64>, b: &Trace<f64>) -> f64 {
    assert_eq!(a.rows.len(), b.rows.len());
    let mut worst = 0.0f64;
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        for (p, q) in [(&ra.x, &rb.x), (&ra.y, &rb.y)] {
            let scale = p.max_abs().max(q.max_abs()).max(f64::MIN_POSITIVE);
            worst = worst.max(p.sub(q).unwrap().max_abs() / scale);
        }
    }
    worst
}

fn cfg(alg: Algorithm) -> MethodConfig<f64> {
    MethodConfig::new(alg)
}

#[test]
fn first_step_examples() {
    // f = (L/2)x², L = 2, x₀ = 1.
    let o = quad(&[2.0], &[0.0]);
    let agm = run(cfg(Algorithm::Agm), &o, &v(&[1.0]), 1).unwrap();
    assert_eq!(agm.rows[1].y.as_slice(), &[0.0]);
    assert_eq!(agm.rows[1].x.as_slice(), &[0.0]);
    let ogm = run(cfg(Algorithm::Ogm), &o, &v(&[1.0]), 1).unwrap();
    assert_eq!(ogm.rows[1].y.as_slice(), &[0.0]);
    let theta1 = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((ogm.rows[1].x[0] + 1.0 / theta1).abs() < 1e-15);
}

#[test]
fn initial_state_collapses_all_sequences() {
    let o = seeded(4, 10.0, 1);
    for alg in Algorithm::ALL {
        let st = Stepper::new(cfg(alg), &o, 10).unwrap();
        let s = st.init(&x0(4)).unwrap();
        assert_eq!(s.k, 0);
        assert_eq!(s.x, x0(4));
        assert_eq!(s.y, s.x);
        assert_eq!(s.z, s.x);
        assert_eq!(s.grad_x, o.gradient(&s.x).unwrap());
    }
}

#[test]
fn minimizer_is_a_fixed_point_of_every_method() {
    let o = quad(&[1.0, 10.0], &[0.5, -3.0]);
    let xs = o.reference().unwrap().point.clone();
    for alg in Algorithm::ALL {
        let tr = run(cfg(alg).with_t(0.75), &o, &xs, 5).unwrap();
        for r in &tr.rows {
            assert!(r.x.sub(&xs).unwrap().max_abs() < 1e-15, "{alg}");
            assert!(r.z.sub(&xs).unwrap().max_abs() < 1e-14, "{alg}");
        }
    }
}

#[test]
fn momentum_and_three_sequence_forms_agree() {
    for seed in 0..6 {
        let n = 2 + seed as usize;
        let o = seeded(n, 10f64.powi(1 + seed as i32 % 3), seed);
        for (m, z) in [
            (cfg(Algorithm::Agm), cfg(Algorithm::AgmZ)),
            (cfg(Algorithm::Ogm), cfg(Algorithm::OgmZ)),
            (cfg(Algorithm::Unified).with_t(0.75), cfg(Algorithm::UnifiedZ).with_t(0.75)),
        ] {
            let label = m.label();
            let a = run(m, &o, &x0(n), 50).unwrap();
            let b = run(z, &o, &x0(n), 50).unwrap();
            let g = trajectory_gap(&a, &b);
            assert!(g <= 1e-8, "{label} seed {seed}: {g:e}");
        }
    }
    let o = quad(&[1.0, 10.0], &[0.0, 0.0]);
    let a = run(cfg(Algorithm::Unified).with_t(0.75), &o, &v(&[1.0, 1.0]), 40).unwrap();
    let b = run(cfg(Algorithm::UnifiedZ).with_t(0.75), &o, &v(&[1.0, 1.0]), 40).unwrap();
    assert!(trajectory_gap(&a, &b) <= 1e-9);
}

#[test]
fn unified_endpoints_reproduce_agm_and_ogm() {
    let o = seeded(6, 100.0, 3);
    for (t, base) in [(0.5, Algorithm::Agm), (1.0, Algorithm::Ogm)] {
        let a = run(cfg(Algorithm::Unified).with_t(t), &o, &x0(6), 50).unwrap();
        let b = run(cfg(base), &o, &x0(6), 50).unwrap();
        assert!(trajectory_gap(&a, &b) <= 1e-12, "t = {t}");
        let a = run(cfg(Algorithm::UnifiedZ).with_t(t), &o, &x0(6), 50).unwrap();
        let b = run(cfg(if t == 1.0 { Algorithm::OgmZ } else { Algorithm::AgmZ }), &o, &x0(6), 50).unwrap();
        assert!(trajectory_gap(&a, &b) <= 1e-12, "z-form t = {t}");
    }
}

#[test]
fn linear_coupling_reduces_to_ogm_and_agm() {
    let o = seeded(5, 10.0, 8);
    let lc = |t: f64, mode| run(cfg(Algorithm::Lc).with_t(t).with_coupling(mode), &o, &x0(5), 50).unwrap();
    let ogm = run(cfg(Algorithm::OgmZ), &o, &x0(5), 50).unwrap();
    let agm = run(cfg(Algorithm::AgmZ), &o, &x0(5), 50).unwrap();
    assert!(trajectory_gap(&lc(1.0, CouplingMode::Ogm), &ogm) <= 1e-8);
    assert!(trajectory_gap(&lc(0.5, CouplingMode::Ogm), &agm) <= 1e-8);
    assert!(trajectory_gap(&lc(1.0, CouplingMode::Agm), &agm) <= 1e-8);
}

#[test]
fn ogm_mirror_step_is_twice_agm() {
    let o = seeded(4, 10.0, 2);
    let s0 = |alg| Stepper::new(cfg(alg), &o, 10).unwrap();
    let (a, b) = (s0(Algorithm::AgmZ), s0(Algorithm::OgmZ));
    let mut sa = a.init(&x0(4)).unwrap();
    let mut sb = b.init(&x0(4)).unwrap();
    for _ in 0..3 {
        a.step(&mut sa).unwrap();
    }
    // Same (x_k, z_k, θ_k) for both: copy AGM's state into the OGM stepper.
    sb.x = sa.x.clone();
    sb.y = sa.y.clone();
    sb.z = sa.z.clone();
    sb.grad_x = sa.grad_x.clone();
    sb.k = sa.k;
    let (pa, pb) = (a.propose(&sa).unwrap(), b.propose(&sb).unwrap());
    let da = pa.z.sub(&sa.z).unwrap();
    let db = pb.z.sub(&sb.z).unwrap();
    let err = db.sub(&da.scaled(2.0)).unwrap().max_abs();
    assert!(err <= 1e-14 * da.max_abs(), "{err:e} vs {:e}", da.max_abs());
}

#[test]
fn last_step_matches_momentum_expression() {
    let o = quad(&[1.0, 10.0], &[0.0, 0.0]);
    let th = ThetaSchedule::<f64>::exact();
    let phi = PhiSchedule::exact(th.clone());
    let st = Stepper::new(cfg(Algorithm::OgmZ).with_phi(phi.clone()), &o, 20).unwrap();
    let mut s = st.init(&v(&[1.0, 1.0])).unwrap();
    let mut prev: Option<MethodState<f64>> = None;
    for _ in 0..11 {
        prev = Some(s.clone());
        st.step(&mut s).unwrap();
    }
    let p = prev.unwrap(); // k = 10
    let (t10, f11) = (th.at(10), phi.at(11));
    let expected = s
        .y
        .add(&s.y.sub(&p.y).unwrap().scaled((t10 - 1.0) / f11))
        .unwrap()
        .add(&s.y.sub(&p.x).unwrap().scaled(t10 / f11))
        .unwrap();
    let got = s.x_tilde.clone().unwrap();
    assert!(got.sub(&expected).unwrap().max_abs() <= 1e-10);

    // Degenerate coefficients: φ = 1 gives z; huge φ approaches y.
    let one = PhiSchedule::exact(ThetaSchedule::custom(|_| 0.0));
    assert_eq!(ogm_lab::methods::last_step_modify(&s, &one).unwrap(), s.z);
    let big = PhiSchedule::exact(ThetaSchedule::custom(|_| 1e12));
    let near_y = ogm_lab::methods::last_step_modify(&s, &big).unwrap();
    assert!(near_y.sub(&s.y).unwrap().max_abs() < 1e-10);
}

#[test]
fn sc_agm_coefficients() {
    assert_eq!(sc_agm_momentum(1.0f64), 0.0);
    assert!((sc_agm_momentum(100.0f64) - 9.0 / 11.0).abs() < 1e-16);
}

#[test]
fn sc_ogm_auxiliary_sequence_recurrence() {
    let o = quad(&[1.0, 2.0], &[0.3, -0.1]);
    let (l, g) = (o.smoothness(), gamma_sc(o.condition_number()).unwrap().gamma);
    let st = Stepper::new(cfg(Algorithm::ScOgm), &o, 30).unwrap();
    let mut s = st.init(&v(&[1.0, 1.0])).unwrap();
    assert_eq!(s.z, s.x);
    for _ in 0..30 {
        let before = s.clone();
        st.step(&mut s).unwrap();
        let expected = before
            .z
            .scaled(1.0 / (g + 1.0))
            .add(&before.x.scaled(g / (g + 1.0)))
            .unwrap()
            .add(&before.grad_x.scaled(-(g + 2.0) / (g * l)))
            .unwrap();
        assert!(s.z.sub(&expected).unwrap().max_abs() <= 1e-10 * (1.0 + expected.max_abs()));
    }
}

#[test]
fn lc_sc_ogm_reduces_to_sc_ogm_with_euclidean_norm() {
    let o = seeded(4, 2.0, 5);
    let a = run(cfg(Algorithm::LcScOgm), &o, &x0(4), 30).unwrap();
    let b = run(cfg(Algorithm::ScOgm), &o, &x0(4), 30).unwrap();
    assert!(trajectory_gap(&a, &b) <= 1e-9);
}

#[test]
fn scale_covariance() {
    let base = seeded(5, 30.0, 4);
    let c = 7.25;
    let xs = base.reference().unwrap().point.clone();
    let a_scaled = {
        let g0 = base.gradient(&Vector::zeros(5)).unwrap();
        let cols: Vec<Vec<f64>> = (0..5)
            .map(|i| (0..5).map(|j| c * (base.gradient(&Vector::basis(5, j)).unwrap()[i] - g0[i])).collect())
            .collect();
        Matrix::from_rows(&cols).unwrap()
    };
    // Symmetrize the finite-difference copy exactly.
    let mut a = a_scaled.clone();
    for i in 0..5 {
        for j in 0..5 {
            a.set(i, j, 0.5 * (a_scaled.get(i, j) + a_scaled.get(j, i)));
        }
    }
    let b = a.matvec(&xs).unwrap();
    let scaled = Quadratic::new(a, b)
        .unwrap()
        .into_oracle(Arc::new(QuadraticNorm::identity(5)), "scaled")
        .unwrap()
        .with_constants(c * base.smoothness(), c * base.strong_convexity())
        .unwrap();
    for alg in Algorithm::ALL {
        let t1 = run(cfg(alg), &base, &x0(5), 60).unwrap();
        let t2 = run(cfg(alg), &scaled, &x0(5), 60).unwrap();
        let g = trajectory_gap(&t1, &t2);
        assert!(g <= 1e-10, "{alg}: {g:e}");
    }
}

#[test]
fn translation_covariance() {
    let diag = [1.0, 4.0, 10.0];
    let b = [0.2, -1.0, 0.5];
    let s = [0.75, -0.5, 0.25];
    let o = quad(&diag, &b);
    // f(x − s) = ½(x−s)ᵀA(x−s) − bᵀ(x−s) has linear term b + As.
    let b2: Vec<f64> = (0..3).map(|i| b[i] + diag[i] * s[i]).collect();
    let shifted = quad(&diag, &b2);
    let start = v(&[1.0, 1.0, 1.0]);
    let moved = start.add(&v(&s)).unwrap();
    for alg in Algorithm::ALL {
        let t1 = run(cfg(alg), &o, &start, 40).unwrap();
        let t2 = run(cfg(alg), &shifted, &moved, 40).unwrap();
        for (r1, r2) in t1.rows.iter().zip(&t2.rows) {
            let d = r2.x.sub(&r1.x.add(&v(&s)).unwrap()).unwrap().max_abs();
            assert!(d <= 1e-12, "{alg}: {d:e}");
        }
    }
}

#[test]
fn descent_bracket_holds_for_every_method() {
    let oracles = [seeded(6, 100.0, 9), ProblemSpec::log_sum_exp(4, 12, 7).build::<f64>(None).unwrap()];
    for o in &oracles {
        let l = o.smoothness();
        for alg in Algorithm::ALL {
            if alg.is_strongly_convex() && o.strong_convexity() == 0.0 {
                continue;
            }
            let tr = run(cfg(alg), o, &Vector::filled(o.dim(), 1.0), 100).unwrap();
            for w in tr.rows.windows(2) {
                let g2 = o.norm().dual_norm_sq(&w[0].grad_x).unwrap();
                let rhs = w[0].f_x - g2 / (2.0 * l);
                let scale = 1.0 + w[0].f_x.abs();
                assert!(w[1].f_y <= rhs + 1e-10 * scale, "{alg} at k = {}", w[1].k);
            }
        }
    }
}

#[test]
fn run_contracts() {
    let o = seeded(3, 10.0, 6);
    let a = run(cfg(Algorithm::Ogm), &o, &x0(3), 25).unwrap();
    let b = run(cfg(Algorithm::Ogm), &o, &x0(3), 25).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.len(), 26);

    let one = run(cfg(Algorithm::Ogm), &o, &x0(3), 1).unwrap();
    let st = Stepper::new(cfg(Algorithm::Ogm), &o, 1).unwrap();
    let mut s = st.init(&x0(3)).unwrap();
    st.step(&mut s).unwrap();
    assert_eq!(one.rows[1].x, s.x);
    assert_eq!(one.rows[1].y, s.y);

    assert!(matches!(run(cfg(Algorithm::Ogm), &o, &x0(3), 0), Err(e) if matches!(e.source, MethodError::Usage(_))));
    assert!(matches!(Stepper::new(cfg(Algorithm::Unified).with_t(1.5), &o, 1), Err(MethodError::Usage(_))));
    assert!(matches!(Stepper::new(cfg(Algorithm::Lc).with_t(0.0), &o, 1), Err(MethodError::Usage(_))));
    let flat = seeded(3, f64::INFINITY, 6);
    assert!(matches!(Stepper::new(cfg(Algorithm::ScOgm), &flat, 1), Err(MethodError::Usage(_))));
}

#[test]
fn understated_smoothness_diverges_with_iteration_index() {
    let o = quad(&[1.0, 10.0], &[0.0, 0.0]).with_constants(1.0, 0.1).unwrap();
    let err = run(cfg(Algorithm::Ogm), &o, &v(&[1.0, 1.0]), 5000).unwrap_err();
    match err.source {
        MethodError::Divergence { k } => {
            let partial = err.trace.expect("partial trace kept");
            assert_eq!(partial.rows.len(), k);
        }
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn algorithm_names_round_trip() {
    for alg in Algorithm::ALL {
        assert_eq!(alg.as_str().parse::<Algorithm>().unwrap(), alg);
    }
    assert!("nesterov".parse::<Algorithm>().is_err());
}

#[test]
fn single_precision_run() {
    let o = make_quadratic::<f32>(&ProblemSpec::quadratic(4, 10.0, 1), Arc::new(QuadraticNorm::identity(4))).unwrap();
    let tr = run(MethodConfig::<f32>::new(Algorithm::Ogm), &o, &Vector::filled(4, 1.0f32), 50).unwrap();
    let gap = o.gap(&tr.rows[50].y).unwrap().unwrap();
    assert!(gap < 1e-3);
}

#[test]
fn last_step_never_changes_the_trajectory() {
    let o = seeded(4, 10.0, 11);
    for mode in [CouplingMode::Ogm, CouplingMode::Agm] {
        for alg in [Algorithm::Lc, Algorithm::Ogm, Algorithm::AgmZ, Algorithm::UnifiedZ] {
            let base = cfg(alg).with_t(0.75).with_coupling(mode);
            let a = run(base.clone(), &o, &x0(4), 30).unwrap();
            let b = run(base.with_last_step(), &o, &x0(4), 30).unwrap();
            for (ra, rb) in a.rows.iter().zip(&b.rows) {
                assert_eq!(ra.x, rb.x, "{alg} {mode:?}");
                assert!(rb.x_tilde.is_some());
            }
        }
    }
}
