use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use ogm_lab::numkit::{bregman, BregmanGenerator, Matrix, QuadraticNorm, Vector};
use proptest::prelude::*;

fn spd(n: usize, entries: &[f64]) -> (Matrix<f64>, DMatrix<f64>) {
    // B·Bᵀ + n·I from raw entries in [-1, 1].
    let b = DMatrix::from_fn(n, n, |i, j| entries[i * n + j]);
    let q = &b * b.transpose() + DMatrix::identity(n, n) * n as f64;
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| q[(i, j)]).collect()).collect();
    (Matrix::from_rows(&rows).unwrap(), q)
}

fn vec_of(v: &[f64]) -> Vector<f64> {
    Vector::from_f64(v).unwrap()
}

#[test]
fn norm_examples() {
    let id = QuadraticNorm::<f64>::identity(2);
    assert_eq!(id.primal_norm(&vec_of(&[3.0, 4.0])).unwrap(), 5.0);
    assert_eq!(id.dual_norm(&vec_of(&[3.0, 4.0])).unwrap(), 5.0);
    assert_eq!(id.primal_norm(&Vector::zeros(2)).unwrap(), 0.0);

    let q = QuadraticNorm::<f64>::diagonal(&[2.0, 1.0]).unwrap();
    assert!((q.primal_norm(&vec_of(&[1.0, 1.0])).unwrap() - 3f64.sqrt()).abs() < 1e-15);
    assert!((q.dual_norm(&vec_of(&[2.0, 0.0])).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(q.dual_norm(&Vector::zeros(2)).unwrap(), 0.0);

    let q = QuadraticNorm::<f64>::diagonal(&[2.0, 4.0]).unwrap();
    let v = q.apply_inverse(&vec_of(&[2.0, 4.0])).unwrap();
    assert!(v.sub(&vec_of(&[1.0, 1.0])).unwrap().max_abs() <= 1e-15);
    assert_eq!(id.apply_inverse(&vec_of(&[1.0, 2.0])).unwrap().as_slice(), &[1.0, 2.0]);
}

#[test]
fn dimension_mismatch_is_an_error() {
    let id = QuadraticNorm::<f64>::identity(3);
    assert!(id.primal_norm(&Vector::zeros(2)).is_err());
    assert!(id.dual_norm(&Vector::zeros(4)).is_err());
    assert!(id.apply_inverse(&Vector::zeros(2)).is_err());
}

#[test]
fn rejects_indefinite_and_asymmetric() {
    let m = Matrix::<f64>::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
    assert!(QuadraticNorm::new(m).is_err());
    let m = Matrix::<f64>::from_rows(&[vec![2.0, 0.5], vec![0.0, 2.0]]).unwrap();
    assert!(QuadraticNorm::new(m).is_err());
}

#[test]
fn bregman_examples() {
    let id = Arc::new(QuadraticNorm::<f64>::identity(2));
    let g1 = BregmanGenerator::new(id.clone(), 1.0).unwrap();
    let gh = BregmanGenerator::new(id.clone(), 0.5).unwrap();
    let (o, p) = (Vector::zeros(2), vec_of(&[3.0, 4.0]));
    assert_eq!(bregman(&o, &o, &g1).unwrap(), 0.0);
    assert_eq!(bregman(&o, &p, &g1).unwrap(), 12.5);
    assert_eq!(bregman(&o, &vec_of(&[1.0, 0.0]), &gh).unwrap(), 1.0);
    assert!(BregmanGenerator::new(id.clone(), 0.0).is_err());
    assert!(BregmanGenerator::new(id, 1.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_norm_matches_dense_inverse(
        n in 1usize..=16,
        raw in prop::collection::vec(-1.0f64..1.0, 16 * 16),
        u in prop::collection::vec(-10.0f64..10.0, 16),
    ) {
        let (m, q) = spd(n, &raw);
        let norm = QuadraticNorm::new(m).unwrap();
        let u = &u[..n];
        let expected = {
            let uv = DVector::from_column_slice(u);
            let inv = q.clone().try_inverse().unwrap();
            (uv.transpose() * inv * &uv)[(0, 0)].sqrt()
        };
        let got = norm.dual_norm(&vec_of(u)).unwrap();
        prop_assert!((got - expected).abs() <= 1e-9 * expected.max(1e-300));

        let v = norm.apply_inverse(&vec_of(u)).unwrap();
        let residual = &q * DVector::from_column_slice(v.as_slice()) - DVector::from_column_slice(u);
        prop_assert!(residual.norm() <= 1e-10 * DVector::from_column_slice(u).norm().max(1e-300));
    }

    #[test]
    fn generalized_cauchy_schwarz(
        n in 1usize..=8,
        raw in prop::collection::vec(-1.0f64..1.0, 64),
        x in prop::collection::vec(-5.0f64..5.0, 8),
        u in prop::collection::vec(-5.0f64..5.0, 8),
    ) {
        let (m, _) = spd(n, &raw);
        let norm = QuadraticNorm::new(m).unwrap();
        let (x, u) = (vec_of(&x[..n]), vec_of(&u[..n]));
        let lhs = u.dot(&x).unwrap();
        prop_assert!(lhs <= norm.primal_norm(&x).unwrap() * norm.dual_norm(&u).unwrap() + 1e-10);

        // Aligned pair u = Qx is tight.
        let qx = norm.apply(&x).unwrap();
        let prod = norm.primal_norm(&x).unwrap() * norm.dual_norm(&qx).unwrap();
        let quad = x.dot(&qx).unwrap();
        prop_assert!((prod - quad).abs() <= 1e-10 * (1.0 + quad.abs()));
    }

    #[test]
    fn bregman_symmetric_and_dominates_half_norm(
        t in 0.05f64..=1.0,
        d in prop::collection::vec(0.1f64..10.0, 3),
        x in prop::collection::vec(-5.0f64..5.0, 3),
        y in prop::collection::vec(-5.0f64..5.0, 3),
    ) {
        let norm = Arc::new(QuadraticNorm::diagonal(&d).unwrap());
        let g = BregmanGenerator::new(norm.clone(), t).unwrap();
        let (x, y) = (vec_of(&x), vec_of(&y));
        let a = bregman(&x, &y, &g).unwrap();
        prop_assert_eq!(a, bregman(&y, &x, &g).unwrap());
        prop_assert!(a >= 0.5 * norm.distance_sq(&x, &y).unwrap() - 1e-12);
    }
}

#[test]
fn works_in_single_precision() {
    let q = QuadraticNorm::<f32>::diagonal(&[2.0, 1.0]).unwrap();
    let x = Vector::<f32>::from_f64(&[1.0, 1.0]).unwrap();
    assert!((q.primal_norm(&x).unwrap() - 3f32.sqrt()).abs() < 1e-6);
}
