use std::io::Cursor;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use ogm_lab::numkit::{Matrix, QuadraticNorm, Vector};
use ogm_lab::problems::{
    make_logistic_from, make_quadratic, read_dataset_from, refine_reference, sample_cocoercivity,
    sample_gradient_check, sample_strong_convexity, generate_log_sum_exp, ProblemError, ProblemSpec, Quadratic,
};

fn dense(m: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j))
}

/// Extreme eigenvalues of `Q^{-1/2} A Q^{-1/2}` via nalgebra.
fn whitened_extremes(a: &DMatrix<f64>, q: &DMatrix<f64>) -> (f64, f64) {
    let eq = SymmetricEigen::new(q.clone());
    let inv_sqrt = &eq.eigenvectors
        * DMatrix::from_diagonal(&eq.eigenvalues.map(|v| 1.0 / v.sqrt()))
        * eq.eigenvectors.transpose();
    let w = &inv_sqrt * a * &inv_sqrt;
    let e = SymmetricEigen::new((&w + w.transpose()) * 0.5).eigenvalues;
    (e.min(), e.max())
}

#[test]
fn isotropic_quadratic() {
    let a = Matrix::<f64>::diag_f64(&[3.0, 3.0, 3.0]).unwrap();
    let o = Quadratic::new(a, Vector::zeros(3))
        .unwrap()
        .into_oracle(Arc::new(QuadraticNorm::identity(3)), "iso")
        .unwrap();
    assert!((o.smoothness() - 3.0).abs() < 1e-10 * 3.0);
    assert!((o.strong_convexity() - 3.0).abs() < 1e-10 * 3.0);
    let r = o.reference().unwrap();
    assert_eq!(r.point.max_abs(), 0.0);
    assert_eq!(r.value, 0.0);
}

#[test]
fn diagonal_quadratic_constants() {
    let a = || Matrix::<f64>::diag_f64(&[1.0, 10.0]).unwrap();
    let o = Quadratic::new(a(), Vector::zeros(2))
        .unwrap()
        .into_oracle(Arc::new(QuadraticNorm::identity(2)), "d")
        .unwrap();
    assert!((o.smoothness() - 10.0).abs() < 1e-9);
    assert!((o.strong_convexity() - 1.0).abs() < 1e-10);
    assert!((o.condition_number() - 10.0).abs() < 1e-8);

    // In the Q = diag(10, 1) norm the whitened Hessian is diag(1/10, 10).
    let o = Quadratic::new(a(), Vector::zeros(2))
        .unwrap()
        .into_oracle(Arc::new(QuadraticNorm::diagonal(&[10.0, 1.0]).unwrap()), "dq")
        .unwrap();
    assert!((o.smoothness() - 10.0).abs() < 1e-9);
    assert!((o.strong_convexity() - 0.1).abs() < 1e-11);
}

#[test]
fn seeded_quadratic_constants_match_dense_eigensolver() {
    for (seed, n, kappa) in [(1, 5, 10.0), (2, 12, 1e3), (3, 16, 2.0), (4, 3, 100.0)] {
        let diag: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * i as f64).collect();
        let norm = Arc::new(QuadraticNorm::diagonal(&diag).unwrap());
        let o = make_quadratic::<f64>(&ProblemSpec::quadratic(n, kappa, seed), norm.clone()).unwrap();
        let quad = format!("{:?}", o.objective());
        assert!(quad.contains("Quadratic"));
        let a = {
            // Recover A column by column from the gradient: ∇f(eᵢ) − ∇f(0) = Aeᵢ.
            let g0 = o.gradient(&Vector::zeros(n)).unwrap();
            DMatrix::from_fn(n, n, |i, j| o.gradient(&Vector::basis(n, j)).unwrap()[i] - g0[i])
        };
        let (lo, hi) = whitened_extremes(&a, &dense(norm.matrix()));
        assert!((o.smoothness() - hi).abs() <= 1e-10 * hi, "seed {seed}: L {} vs {hi}", o.smoothness());
        assert!((o.strong_convexity() - lo).abs() <= 1e-9 * lo, "seed {seed}: μ {} vs {lo}", o.strong_convexity());
        assert!((o.condition_number() - kappa).abs() <= 1e-8 * kappa);
    }
}

#[test]
fn quadratic_generation_is_deterministic() {
    let spec = ProblemSpec::quadratic(6, 10.0, 42);
    let norm = Arc::new(QuadraticNorm::identity(6));
    let a = make_quadratic::<f64>(&spec, norm.clone()).unwrap();
    let b = make_quadratic::<f64>(&spec, norm).unwrap();
    let x = Vector::filled(6, 0.3);
    assert_eq!(a.value(&x).unwrap().to_bits(), b.value(&x).unwrap().to_bits());
    assert_eq!(a.reference().unwrap().point, b.reference().unwrap().point);
}

#[test]
fn singular_quadratic_without_minimizer_is_rejected() {
    let a = Matrix::<f64>::diag_f64(&[1.0, 0.0]).unwrap();
    let b = Vector::from_f64(&[1.0, 1.0]).unwrap();
    let err = Quadratic::new(a, b)
        .unwrap()
        .into_oracle(Arc::new(QuadraticNorm::identity(2)), "s")
        .unwrap_err();
    assert!(matches!(err, ProblemError::NoMinimizer(_)));
}

#[test]
fn log_sum_exp_smoothness_dominates_hessian() {
    let spec = ProblemSpec::log_sum_exp(4, 8, 7);
    let o = spec.build::<f64>(None).unwrap();
    let l = o.smoothness();
    let lse = format!("{:?}", o.objective());
    assert!(lse.contains("LogSumExp"));
    let f = generate_log_sum_exp::<f64>(&spec).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let normal = StandardNormal;
    for _ in 0..200 {
        let x: Vec<f64> = (0..4).map(|_| { let v: f64 = normal.sample(&mut rng); 3.0 * v }).collect();
        let h = dense(&f.hessian(&Vector::from_f64(&x).unwrap()));
        let top = SymmetricEigen::new(h).eigenvalues.max();
        assert!(top <= l * (1.0 + 1e-12), "Hessian norm {top} exceeds L = {l}");
    }
}

#[test]
fn refined_lse_reference_meets_tolerance() {
    let o = ProblemSpec::log_sum_exp(4, 8, 7).build::<f64>(None).unwrap();
    let r = o.reference().unwrap();
    assert!(!r.exact);
    let g = o.gradient(&r.point).unwrap();
    let res = o.norm().dual_norm(&g).unwrap();
    assert!(res <= 1e-12 * o.smoothness() * (1.0 + o.norm().primal_norm(&r.point).unwrap()));
    assert_eq!(res, r.residual);
}

#[test]
fn refine_agrees_with_linear_solve() {
    let tol = 1e-10;
    let exact = make_quadratic::<f64>(&ProblemSpec::quadratic(6, 50.0, 5), Arc::new(QuadraticNorm::identity(6))).unwrap();
    let x_star = exact.reference().unwrap().point.clone();
    // Unchanged when the reference is exact.
    let same = refine_reference(exact.clone(), tol).unwrap();
    assert!(same.reference().unwrap().exact);
    let refined = refine_reference(exact.without_reference(), tol).unwrap();
    let r = refined.reference().unwrap();
    // ‖x − x⋆‖ ≤ ‖∇f(x)‖⋆/μ.
    let err = refined.norm().primal_norm(&r.point.sub(&x_star).unwrap()).unwrap();
    assert!(err <= 10.0 * tol * refined.condition_number() * (1.0 + x_star.norm2()), "error {err}");
}

#[test]
fn refine_rejects_nonpositive_tol() {
    let o = make_quadratic::<f64>(&ProblemSpec::quadratic(3, 10.0, 1), Arc::new(QuadraticNorm::identity(3))).unwrap();
    assert!(matches!(refine_reference(o, 0.0), Err(ProblemError::Usage(_))));
}

#[test]
fn logistic_examples() {
    // Single sample (+1, e₁), λ = 0: f(0) = log 2, ∇f(0) = −½e₁.
    let data = read_dataset_from(Cursor::new("1,1,0\n")).unwrap();
    let o = make_logistic_from::<f64>(&data, Some(0.0), f64::INFINITY, "one").unwrap();
    assert!((o.value(&Vector::zeros(2)).unwrap() - 2f64.ln()).abs() < 1e-15);
    assert_eq!(o.gradient(&Vector::zeros(2)).unwrap().as_slice(), &[-0.5, 0.0]);
    assert_eq!(o.strong_convexity(), 0.0);

    // Identical labels with a ridge: μ = λ.
    let data = read_dataset_from(Cursor::new("1,1,2\n1,0.5,-1\n1,2,0\n")).unwrap();
    let o = make_logistic_from::<f64>(&data, Some(0.25), f64::INFINITY, "ridge").unwrap();
    assert_eq!(o.strong_convexity(), 0.25);
    assert!(o.smoothness() > 0.25);

    // Symmetric pair: the minimizer has no component along a.
    let data = read_dataset_from(Cursor::new("1,1,0\n-1,1,0\n")).unwrap();
    let o = make_logistic_from::<f64>(&data, Some(0.1), f64::INFINITY, "sym").unwrap();
    let o = refine_reference(o, 1e-12).unwrap();
    assert!(o.reference().unwrap().point[0].abs() < 1e-10);
}

#[test]
fn dataset_errors_carry_line_numbers() {
    match read_dataset_from(Cursor::new("1,0.5\n2,0.1\n")) {
        Err(ProblemError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected parse error, got {other:?}"),
    }
    match read_dataset_from(Cursor::new("1,0.5\r\n-1,abc\r\n")) {
        Err(ProblemError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected parse error, got {other:?}"),
    }
    match read_dataset_from(Cursor::new("1,0.5\r\n\r\n-1, x \r\n")) {
        Err(ProblemError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected parse error, got {other:?}"),
    }
    assert!(matches!(read_dataset_from(Cursor::new("")), Err(ProblemError::Usage(_))));
    let crlf = read_dataset_from(Cursor::new("1,0.5,1\r\n-1,0.25,2\r\n")).unwrap();
    assert_eq!(crlf.samples(), 2);
}

#[test]
fn audits_pass_on_every_family() {
    let oracles = vec![
        make_quadratic::<f64>(&ProblemSpec::quadratic(8, 100.0, 11), Arc::new(QuadraticNorm::diagonal(&[1.0, 4.0, 2.0, 1.0, 1.0, 3.0, 1.0, 1.0]).unwrap())).unwrap(),
        make_quadratic::<f64>(&ProblemSpec::quadratic(5, f64::INFINITY, 12), Arc::new(QuadraticNorm::identity(5))).unwrap(),
        ProblemSpec::log_sum_exp(4, 8, 7).build::<f64>(None).unwrap(),
        ProblemSpec { kappa: 10.0, ..ProblemSpec::logistic(5, 40, 3) }.build::<f64>(None).unwrap(),
    ];
    for o in &oracles {
        let c = sample_cocoercivity(o, 200, 1).unwrap();
        assert!(c.passed, "{}: cocoercivity worst {:e}", o.name(), c.worst);
        let g = sample_gradient_check(o, 50, 2).unwrap();
        assert!(g.passed, "{}: gradient check worst {:e}", o.name(), g.worst);
        if o.strong_convexity() > 0.0 {
            let s = sample_strong_convexity(o, 200, 3).unwrap();
            assert!(s.passed, "{}: strong convexity worst {:e}", o.name(), s.worst);
        }
    }
}

#[test]
fn single_precision_quadratic() {
    let o = make_quadratic::<f32>(&ProblemSpec::quadratic(4, 10.0, 1), Arc::new(QuadraticNorm::identity(4))).unwrap();
    assert!((o.condition_number() - 10.0).abs() < 1e-3);
}
