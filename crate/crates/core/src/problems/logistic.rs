use std::sync::Arc;

use super::{
    gaussian, read_dataset, seeded_rng, spectral_norm_sq, Dataset, Objective, ObjectiveOracle,
    ProblemError, ProblemKind, ProblemSpec,
};
use crate::numkit::{Matrix, QuadraticNorm, Vector};
use crate::scalar::Scalar;

/// Ridge-regularized logistic loss
/// `f(x) = (1/m)Σ log(1 + exp(−lᵢaᵢᵀx)) + (λ/2)‖x‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Logistic<T> {
    a: Matrix<T>,
    labels: Vector<T>,
    ridge: T,
}

/// `log(1 + eᵘ)` without overflow.
fn softplus<T: Scalar>(u: T) -> T {
    u.max(T::zero()) + (-u.abs()).exp().ln_1p()
}

/// `1/(1 + e⁻ᵘ)` without overflow.
fn sigmoid<T: Scalar>(u: T) -> T {
    if u >= T::zero() {
        T::one() / (T::one() + (-u).exp())
    } else {
        let e = u.exp();
        e / (T::one() + e)
    }
}

impl<T: Scalar> Logistic<T> {
    pub fn new(data: &Dataset, ridge: T) -> Result<Self, ProblemError> {
        if data.samples() == 0 {
            return Err(ProblemError::Usage("dataset has no samples".into()));
        }
        if !(ridge >= T::zero()) || !ridge.is_finite() {
            return Err(ProblemError::Usage(format!("ridge must be ≥ 0, got {ridge}")));
        }
        Ok(Self {
            a: Matrix::from_rows(&data.features)?,
            labels: Vector::from_f64(&data.labels)?,
            ridge,
        })
    }

    fn samples(&self) -> T {
        T::from_usize_lossy(self.a.rows())
    }

    /// Smoothness of the data term alone, `‖A‖₂²/(4m)`.
    pub fn loss_smoothness(&self) -> Result<T, ProblemError> {
        Ok(spectral_norm_sq(&self.a)? / (T::lit(4.0) * self.samples()))
    }

    pub fn into_oracle(self, name: impl Into<String>) -> Result<ObjectiveOracle<T>, ProblemError> {
        let l = self.loss_smoothness()? + self.ridge;
        let mu = self.ridge;
        let n = self.a.cols();
        ObjectiveOracle::new(Arc::new(self), l, mu, Arc::new(QuadraticNorm::identity(n)), name)
    }

    fn margins(&self, x: &Vector<T>) -> Vector<T> {
        let s = self.a.matvec(x).expect("dimension checked by oracle");
        s.zip_with(&self.labels, |s, l| l * s)
            .expect("dimension checked by oracle")
    }
}

impl<T: Scalar> Objective<T> for Logistic<T> {
    fn dim(&self) -> usize {
        self.a.cols()
    }

    fn value(&self, x: &Vector<T>) -> T {
        let loss: T = self.margins(x).iter().map(|&m| softplus(-m)).sum();
        let reg = T::lit(0.5) * self.ridge * x.dot(x).expect("same vector");
        loss / self.samples() + reg
    }

    fn gradient(&self, x: &Vector<T>) -> Vector<T> {
        let m = self.margins(x);
        let inv_m = T::one() / self.samples();
        let w = m
            .zip_with(&self.labels, |mi, l| -l * sigmoid(-mi) * inv_m)
            .expect("dimension checked by oracle");
        let g = self.a.tmatvec(&w).expect("dimension checked by oracle");
        g.add_scaled(self.ridge, x).expect("same dimension")
    }
}

/// Builds the logistic oracle from `spec.data_path`, or from a seeded
/// synthetic dataset (noisy linear labels) when no path is given. No
/// reference is attached.
pub fn make_logistic<T: Scalar>(spec: &ProblemSpec) -> Result<ObjectiveOracle<T>, ProblemError> {
    if spec.kind != ProblemKind::Logistic {
        return Err(ProblemError::Usage(format!("expected a logistic spec, got {}", spec.kind)));
    }
    spec.validate()?;
    let data = match &spec.data_path {
        Some(path) => read_dataset(path)?,
        None => synthetic(spec.dimension, spec.samples, spec.seed),
    };
    make_logistic_from(&data, spec.ridge, spec.kappa, spec.label())
}

/// Ridge is `ridge` when given; otherwise chosen so that `L/μ = kappa`
/// (zero when `kappa` is infinite).
pub fn make_logistic_from<T: Scalar>(
    data: &Dataset,
    ridge: Option<f64>,
    kappa: f64,
    name: impl Into<String>,
) -> Result<ObjectiveOracle<T>, ProblemError> {
    let probe = Logistic::<T>::new(data, T::zero())?;
    let lambda = match ridge {
        Some(r) => T::lit(r),
        None if kappa.is_finite() => probe.loss_smoothness()? / T::lit(kappa - 1.0),
        None => T::zero(),
    };
    Logistic::new(data, lambda)?.into_oracle(name)
}

fn synthetic(n: usize, m: usize, seed: u64) -> Dataset {
    let mut rng = seeded_rng(seed);
    let w: Vec<f64> = (0..n).map(|_| gaussian(&mut rng)).collect();
    let mut labels = Vec::with_capacity(m);
    let mut features = Vec::with_capacity(m);
    for _ in 0..m {
        let a: Vec<f64> = (0..n).map(|_| gaussian(&mut rng)).collect();
        let s: f64 = a.iter().zip(&w).map(|(p, q)| p * q).sum::<f64>() + gaussian(&mut rng);
        labels.push(if s >= 0.0 { 1.0 } else { -1.0 });
        features.push(a);
    }
    Dataset { labels, features }
}
