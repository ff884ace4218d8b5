use std::sync::Arc;

use ogm_lab::certificates::{
    bound_agm, bound_ogm_primary, certify, check_cocoercivity_chain, initial_distance_sq, lyapunov_agm,
    lyapunov_ogm, lyapunov_ogm_tilde, lyapunov_sc_ogm, CertError,
};
use ogm_lab::methods::{run, Algorithm, MethodConfig};
use ogm_lab::numkit::{Matrix, QuadraticNorm, Vector};
use ogm_lab::problems::{make_quadratic, ObjectiveOracle, ProblemSpec, Quadratic};
use ogm_lab::schedules::{gamma_sc, theta_exact, CouplingMode, PhiSchedule, ThetaSchedule};

fn v(x: &[f64]) -> Vector<f64> {
    Vector::from_f64(x).unwrap()
}

fn quad_with_norm(diag: &[f64], norm: QuadraticNorm<f64>) -> ObjectiveOracle<f64> {
    Quadratic::new(Matrix::diag_f64(diag).unwrap(), Vector::zeros(diag.len()))
        .unwrap()
        .into_oracle(Arc::new(norm), "diag")
        .unwrap()
}

fn quad(diag: &[f64]) -> ObjectiveOracle<f64> {
    quad_with_norm(diag, QuadraticNorm::identity(diag.len()))
}

fn cfg(alg: Algorithm) -> MethodConfig<f64> {
    MethodConfig::new(alg)
}

#[test]
fn initial_potential_is_half_l_r_squared() {
    let o = quad(&[1.0, 10.0]);
    let tr = run(cfg(Algorithm::Ogm), &o, &v(&[1.0, 1.0]), 5).unwrap();
    let r2 = initial_distance_sq(&tr).unwrap();
    assert_eq!(r2, 2.0);
    assert_eq!(lyapunov_ogm(&tr, -1).unwrap(), 10.0);
    // θ₋₁ = 0 leaves only the distance term for AGM as well.
    let tr = run(cfg(Algorithm::AgmZ), &o, &v(&[1.0, 1.0]), 5).unwrap();
    assert_eq!(lyapunov_agm(&tr, 0).unwrap(), 10.0);
}

#[test]
fn potentials_vanish_at_the_minimizer() {
    let o = quad(&[1.0, 10.0]);
    let x = v(&[0.0, 0.0]);
    for alg in [Algorithm::Ogm, Algorithm::Agm, Algorithm::ScOgm] {
        let config = if alg.is_strongly_convex() { cfg(alg) } else { cfg(alg).with_last_step() };
        let tr = run(config, &o, &x, 5).unwrap();
        let rep = certify(&tr).unwrap();
        assert!(rep.passed(), "{alg}");
        for r in &rep.rows {
            if let Some(u) = r.lyap {
                assert_eq!(u, 0.0, "{alg} k = {}", r.k);
            }
        }
    }
}

#[test]
fn ogm_potential_is_monotone_on_a_small_quadratic() {
    let o = quad(&[1.0, 10.0]);
    let tr = run(cfg(Algorithm::Ogm), &o, &v(&[1.0, 1.0]), 100).unwrap();
    let mut prev = lyapunov_ogm(&tr, -1).unwrap();
    for k in 0..=100 {
        let u = lyapunov_ogm(&tr, k).unwrap();
        assert!(u <= prev + 1e-9 * (1.0 + prev), "k = {k}: {u} > {prev}");
        prev = u;
    }
    let rep = certify(&tr).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.rows.first().unwrap().k, -1);
    assert!(rep.worst_slack.unwrap() >= 0.0);
}

#[test]
fn last_step_potential_starts_below_the_initial_one() {
    for seed in 0..5 {
        let o = make_quadratic(&ProblemSpec::quadratic(6, 50.0, seed), Arc::new(QuadraticNorm::identity(6))).unwrap();
        let tr = run(cfg(Algorithm::Ogm).with_last_step(), &o, &Vector::filled(6, 1.0), 60).unwrap();
        let u_minus = lyapunov_ogm(&tr, -1).unwrap();
        assert!(lyapunov_ogm_tilde(&tr, 0).unwrap() <= u_minus * (1.0 + 1e-12));
        for k in 0..=59 {
            assert!(lyapunov_ogm_tilde(&tr, k + 1).unwrap() <= lyapunov_ogm(&tr, k as i64).unwrap() * (1.0 + 1e-12) + 1e-12);
        }
        assert!(certify(&tr).unwrap().passed());
    }
}

#[test]
fn every_method_passes_on_every_family() {
    let oracles: Vec<ObjectiveOracle<f64>> = vec![
        make_quadratic(&ProblemSpec::quadratic(8, 100.0, 2), Arc::new(QuadraticNorm::identity(8))).unwrap(),
        make_quadratic(
            &ProblemSpec::quadratic(3, 20.0, 4),
            Arc::new(QuadraticNorm::diagonal(&[1.0, 4.0, 0.5]).unwrap()),
        )
        .unwrap(),
        ProblemSpec::log_sum_exp(4, 12, 7).build(None).unwrap(),
        logistic().build(None).unwrap(),
    ];
    for o in &oracles {
        let x0 = Vector::filled(o.dim(), 1.0);
        for alg in Algorithm::ALL {
            if alg.is_strongly_convex() && !(o.strong_convexity() > 0.0) {
                continue;
            }
            for config in [cfg(alg).with_t(0.75), cfg(alg).with_t(0.75).with_last_step()] {
                if alg.is_strongly_convex() && config.phi.is_some() {
                    continue;
                }
                let label = config.label();
                let tr = run(config, o, &x0, 80).unwrap();
                let rep = certify(&tr).unwrap();
                assert!(rep.passed(), "{label} on {}: first violation at {:?}", o.name(), rep.first_violation);
            }
        }
    }
}

#[test]
fn linear_coupling_with_a_preconditioner() {
    let norm = QuadraticNorm::diagonal(&[1.0, 4.0]).unwrap();
    let o = quad_with_norm(&[3.0, 8.0], norm);
    for t in [0.5, 0.75, 1.0] {
        for mode in [CouplingMode::Ogm, CouplingMode::Agm] {
            let tr = run(cfg(Algorithm::Lc).with_t(t).with_coupling(mode).with_last_step(), &o, &v(&[1.0, -2.0]), 60)
                .unwrap();
            let rep = certify(&tr).unwrap();
            assert!(rep.passed(), "t = {t}, {mode:?}: {:?}", rep.first_violation);
            assert!(rep.rows.iter().any(|r| r.bound.is_some()));
        }
    }
}

#[test]
fn strongly_convex_ogm_initial_potential_and_contraction() {
    for seed in 0..20 {
        let kappa = [2.0, 10.0, 100.0, 1000.0][seed as usize % 4];
        let o = make_quadratic(&ProblemSpec::quadratic(5, kappa, seed), Arc::new(QuadraticNorm::identity(5))).unwrap();
        let tr = run(cfg(Algorithm::ScOgm), &o, &Vector::filled(5, 1.0), 60).unwrap();
        let (mu, l) = (o.strong_convexity(), o.smoothness());
        let r2 = initial_distance_sq(&tr).unwrap();
        let u0 = lyapunov_sc_ogm(&tr, 0).unwrap();
        assert!(u0 <= (mu + 2.0 * l) / 2.0 * r2 * (1.0 + 1e-12));
        let rep = certify(&tr).unwrap();
        assert!(rep.passed(), "κ = {kappa}, seed {seed}");
        let (got, cap) = rep.u0_check.unwrap();
        assert_eq!(got, u0);
        assert!(got <= cap * (1.0 + 1e-12));
        let g = gamma_sc(o.condition_number()).unwrap();
        if let Some(c) = rep.contraction_max {
            assert!(c <= g.contraction() * (1.0 + 1e-9), "κ = {kappa}: {c} > {}", g.contraction());
        }
    }
}

#[test]
fn cocoercivity_chain() {
    // Isotropic quadratic: the inequality is tight.
    let o = quad(&[2.0, 2.0, 2.0]);
    let tr = run(cfg(Algorithm::Ogm), &o, &v(&[1.0, -1.0, 0.5]), 20).unwrap();
    let rep = check_cocoercivity_chain(&tr).unwrap();
    assert!(rep.passed());
    assert!(rep.worst_slack.unwrap().abs() <= 1e-12);

    let lg = logistic().build::<f64>(None).unwrap();
    for alg in [Algorithm::Ogm, Algorithm::ScOgm, Algorithm::Agm] {
        let tr = run(cfg(alg), &lg, &Vector::filled(5, 1.0), 100).unwrap();
        let rep = check_cocoercivity_chain(&tr).unwrap();
        assert!(rep.passed(), "{alg}");
        assert!(rep.worst_slack.unwrap() >= -rep.rows[0].tol_gap);
    }

    // A trajectory parked at x⋆ has every pair coincide.
    let tr = run(cfg(Algorithm::Ogm), &o, &v(&[0.0, 0.0, 0.0]), 3).unwrap();
    let rep = check_cocoercivity_chain(&tr).unwrap();
    assert!(rep.rows.iter().all(|r| r.slack == Some(0.0)));
}

#[test]
fn ogm_bound_is_half_of_agm() {
    let th = ThetaSchedule::<f64>::exact();
    for k in 1..200 {
        let r = bound_agm(k, &th, 3.0, 2.0).unwrap() / bound_ogm_primary(k, &th, 3.0, 2.0).unwrap();
        assert_eq!(r, 2.0);
    }
}

#[test]
fn simple_schedules_certify() {
    let o = quad(&[1.0, 10.0, 30.0]);
    let th = ThetaSchedule::simple();
    let config = cfg(Algorithm::SimpleOgm).with_theta(th.clone()).with_phi(PhiSchedule::simple(th));
    let tr = run(config, &o, &v(&[1.0, 1.0, 1.0]), 100).unwrap();
    let rep = certify(&tr).unwrap();
    assert!(rep.passed(), "{:?}", rep.first_violation);
    assert!(rep.rows.iter().any(|r| r.bound_secondary.is_some()));
}

#[test]
fn corrupted_schedule_is_caught() {
    let o = quad(&[1.0, 10.0]);
    let mut tr = run(cfg(Algorithm::Ogm), &o, &v(&[1.0, 1.0]), 30).unwrap();
    assert!(certify(&tr).unwrap().passed());
    // Certify the honest trajectory against an inflated θ₅.
    tr.config.theta = ThetaSchedule::custom(|k| {
        let t = theta_exact::<f64>(k as i64);
        if k == 5 {
            t * 1.5
        } else {
            t
        }
    });
    let rep = certify(&tr).unwrap();
    assert!(!rep.passed());
    assert!(rep.first_violation.unwrap() <= 6);
}

#[test]
fn certificate_errors() {
    let o = quad(&[1.0, 10.0]).without_reference();
    let tr = run(cfg(Algorithm::Ogm), &o, &v(&[1.0, 1.0]), 3).unwrap();
    assert!(matches!(certify(&tr), Err(CertError::Unavailable(_))));
    let flat = quad(&[0.0, 1.0]);
    let tr = run(cfg(Algorithm::Ogm), &flat, &v(&[0.0, 1.0]), 3);
    if let Ok(tr) = tr {
        // SC certificates reject a trace whose oracle has μ = 0.
        let mut tr = tr;
        tr.config.algorithm = Algorithm::ScOgm;
        assert!(matches!(certify(&tr), Err(CertError::Usage(_))));
    }
}

fn logistic() -> ProblemSpec {
    ProblemSpec {
        ridge: None,
        kappa: 10.0,
        ..ProblemSpec::logistic(5, 40, 3)
    }
}
