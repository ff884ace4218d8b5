use std::sync::Arc;

use super::{
    gaussian, refine_reference, seeded_rng, spectral_norm_sq, Objective, ObjectiveOracle,
    ProblemError, ProblemKind, ProblemSpec,
};
use crate::numkit::{Matrix, NumError, QuadraticNorm, Vector};
use crate::scalar::Scalar;

/// `f(x) = ρ·log Σᵢ exp((aᵢᵀx − bᵢ)/ρ)`, a smooth max with Hessian
/// `(1/ρ)Aᵀ(diag p − ppᵀ)A ⪯ (1/ρ)AᵀA`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogSumExp<T> {
    a: Matrix<T>,
    b: Vector<T>,
    rho: T,
}

impl<T: Scalar> LogSumExp<T> {
    pub fn new(a: Matrix<T>, b: Vector<T>, rho: T) -> Result<Self, ProblemError> {
        if a.rows() != b.dim() {
            return Err(NumError::DimensionMismatch {
                expected: a.rows(),
                found: b.dim(),
            }
            .into());
        }
        if !(rho > T::zero()) || !rho.is_finite() {
            return Err(ProblemError::Usage(format!("rho must be positive, got {rho}")));
        }
        Ok(Self { a, b, rho })
    }

    /// Recorded smoothness bound `‖A‖₂²/ρ`.
    pub fn smoothness_bound(&self) -> Result<T, NumError> {
        Ok(spectral_norm_sq(&self.a)? / self.rho)
    }

    /// Oracle without a reference; callers refine one when a minimizer exists.
    pub fn into_oracle(self, name: impl Into<String>) -> Result<ObjectiveOracle<T>, ProblemError> {
        let l = self.smoothness_bound()?;
        let n = self.a.cols();
        ObjectiveOracle::new(Arc::new(self), l, T::zero(), Arc::new(QuadraticNorm::identity(n)), name)
    }

    fn scores(&self, x: &Vector<T>) -> Vector<T> {
        let ax = self.a.matvec(x).expect("dimension checked by oracle");
        ax.zip_with(&self.b, |s, b| (s - b) / self.rho)
            .expect("dimension checked by oracle")
    }

    /// Softmax weights of the scores.
    pub fn weights(&self, x: &Vector<T>) -> Vector<T> {
        let s = self.scores(x);
        let top = s.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
        let e = s.map(|v| (v - top).exp());
        let total: T = e.iter().copied().sum();
        e.scaled(T::one() / total)
    }

    /// `(1/ρ)Aᵀ(diag p − ppᵀ)A` at `x`.
    pub fn hessian(&self, x: &Vector<T>) -> Matrix<T> {
        let p = self.weights(x);
        let (m, n) = (self.a.rows(), self.a.cols());
        let mean = self.a.tmatvec(&p).expect("dimension checked by oracle");
        let mut h = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = T::zero();
                for r in 0..m {
                    s += p[r] * self.a.get(r, i) * self.a.get(r, j);
                }
                h.set(i, j, (s - mean[i] * mean[j]) / self.rho);
            }
        }
        h
    }
}

impl<T: Scalar> Objective<T> for LogSumExp<T> {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &Vector<T>) -> T {
        let s = self.scores(x);
        let top = s.iter().fold(T::neg_infinity(), |m, &v| m.max(v));
        let total: T = s.iter().map(|&v| (v - top).exp()).sum();
        self.rho * (top + total.ln())
    }

    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        self.a
            .tmatvec(&self.weights(x))
            .expect("dimension checked by oracle")
    }
}

/// Seeded instance with Gaussian rows centered to sum to zero, so that with
/// `samples ≥ dimension + 1` the function is coercive and has a minimizer.
/// The reference is refined numerically.
pub fn make_log_sum_exp<T: Scalar>(spec: &ProblemSpec) -> Result<ObjectiveOracle<T>, ProblemError> {
    let lse = generate_log_sum_exp::<T>(spec)?;
    refine_reference(lse.into_oracle(spec.label())?, T::lit(1e-12))
}

/// The function [`make_log_sum_exp`] wraps, without constants or reference.
pub fn generate_log_sum_exp<T: Scalar>(spec: &ProblemSpec) -> Result<LogSumExp<T>, ProblemError> {
    if spec.kind != ProblemKind::LogSumExp {
        return Err(ProblemError::Usage(format!("expected a log_sum_exp spec, got {}", spec.kind)));
    }
    spec.validate()?;
    let (n, m) = (spec.dimension, spec.samples);
    if m < n + 1 {
        return Err(ProblemError::NoMinimizer(format!(
            "{m} centered terms cannot bound a function on ℝ^{n}; need at least {}",
            n + 1
        )));
    }
    let mut rng = seeded_rng(spec.seed);
    let mut rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| gaussian(&mut rng)).collect()).collect();
    for j in 0..n {
        let mean = rows.iter().map(|r| r[j]).sum::<f64>() / m as f64;
        rows.iter_mut().for_each(|r| r[j] -= mean);
    }
    let offsets: Vec<f64> = (0..m).map(|_| gaussian(&mut rng)).collect();
    LogSumExp::new(Matrix::from_rows(&rows)?, Vector::from_f64(&offsets)?, T::lit(spec.rho))
}
