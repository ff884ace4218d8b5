//! Smooth convex objectives with known (or refined) constants and reference
//! solutions.

pub(crate) mod audit;
mod dataset;
mod logistic;
mod logsumexp;
mod quadratic;
mod refine;
mod spec;

pub use audit::{
    cocoercivity_slack, sample_cocoercivity, sample_gradient_check, sample_strong_convexity,
    AuditSummary,
};
pub use dataset::{read_dataset, read_dataset_from, Dataset};
pub use logistic::{make_logistic, make_logistic_from, Logistic};
pub use logsumexp::{generate_log_sum_exp, make_log_sum_exp, LogSumExp};
pub use quadratic::{make_quadratic, Quadratic};
pub use refine::{refine_reference, REFINE_ITERATION_CAP};
pub use spec::{ProblemKind, ProblemSpec};

use std::fmt::Debug;
use std::sync::Arc;

use thiserror::Error;

use crate::numkit::{NumError, QuadraticNorm, Vector};
use crate::scalar::Scalar;

/// Reference stationarity accepted at construction: `‖∇f(x⋆)‖⋆ ≤ 1e-8·L·(1 + ‖x⋆‖)`,
/// loosened to `64·ε` for scalars whose machine epsilon makes `1e-8` unreachable.
pub const REFERENCE_STATIONARITY_RTOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("objective has no minimizer: {0}")]
    NoMinimizer(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("reference unavailable after {iterations} iterations (residual {residual:e})")]
    ReferenceUnavailable { iterations: usize, residual: f64 },
    #[error("reference point is not stationary (residual {residual:e})")]
    ReferenceNotStationary { residual: f64 },
    #[error(transparent)]
    Num(#[from] NumError),
}

/// A differentiable function `ℝⁿ → ℝ`. Inputs are assumed to have the
/// right dimension; [`ObjectiveOracle`] checks before delegating.
pub trait Objective<T: Scalar>: Send + Sync + Debug {
    fn dim(&self) -> usize;
    fn value(&self, x: &Vector<T>) -> T;
    fn gradient(&self, x: &Vector<T>) -> Vector<T>;

    /// `f(x) − f(x_ref)`. Implementations override this when a
    /// cancellation-free form exists.
    fn excess(&self, x: &Vector<T>, reference: &Reference<T>) -> T {
        self.value(x) - reference.value
    }
}

/// A minimizer `x⋆` and `f⋆ = f(x⋆)`, either exact (closed form / linear
/// solve) or refined numerically with the recorded gradient residual.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference<T> {
    pub point: Vector<T>,
    pub value: T,
    /// `‖∇f(x⋆)‖⋆` at the installed point.
    pub residual: T,
    pub exact: bool,
}

/// Objective plus the constants every certificate needs: smoothness `L` and
/// strong convexity `μ` with respect to `norm`, and an optional reference
/// solution.
#[derive(Debug, Clone)]
pub struct ObjectiveOracle<T: Scalar> {
    func: Arc<dyn Objective<T>>,
    smoothness: T,
    strong_convexity: T,
    norm: Arc<QuadraticNorm<T>>,
    reference: Option<Reference<T>>,
    name: String,
}

impl<T: Scalar> ObjectiveOracle<T> {
    pub fn new(
        func: Arc<dyn Objective<T>>,
        smoothness: T,
        strong_convexity: T,
        norm: Arc<QuadraticNorm<T>>,
        name: impl Into<String>,
    ) -> Result<Self, ProblemError> {
        if func.dim() != norm.dim() {
            return Err(NumError::DimensionMismatch {
                expected: norm.dim(),
                found: func.dim(),
            }
            .into());
        }
        check_constants(smoothness, strong_convexity)?;
        Ok(Self {
            func,
            smoothness,
            strong_convexity,
            norm,
            reference: None,
            name: name.into(),
        })
    }

    /// Installs a reference after checking approximate stationarity.
    pub fn with_reference(mut self, reference: Reference<T>) -> Result<Self, ProblemError> {
        self.check_vector(&reference.point)?;
        let g = self.func.gradient(&reference.point);
        let residual = self.norm.dual_norm(&g)?;
        let radius = self.norm.primal_norm(&reference.point)?;
        let rtol = T::lit(REFERENCE_STATIONARITY_RTOL).max(T::lit(64.0) * T::epsilon());
        let limit = rtol * self.smoothness * (T::one() + radius);
        if !(residual <= limit) {
            return Err(ProblemError::ReferenceNotStationary {
                residual: residual.to_f64_lossy(),
            });
        }
        self.reference = Some(reference);
        Ok(self)
    }

    /// Overrides the declared constants, e.g. to study a misconfigured `L`.
    pub fn with_constants(mut self, smoothness: T, strong_convexity: T) -> Result<Self, ProblemError> {
        check_constants(smoothness, strong_convexity)?;
        self.smoothness = smoothness;
        self.strong_convexity = strong_convexity;
        Ok(self)
    }

    /// Installs a numerically refined reference whose residual was measured
    /// by the caller.
    pub(crate) fn with_refined_reference(mut self, reference: Reference<T>) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn without_reference(mut self) -> Self {
        self.reference = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.func.dim()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `L`
    pub fn smoothness(&self) -> T {
        self.smoothness
    }

    /// `μ`
    pub fn strong_convexity(&self) -> T {
        self.strong_convexity
    }

    /// `κ = L/μ`, infinite when `μ = 0`.
    pub fn condition_number(&self) -> T {
        if self.strong_convexity > T::zero() {
            self.smoothness / self.strong_convexity
        } else {
            T::infinity()
        }
    }

    pub fn norm(&self) -> &QuadraticNorm<T> {
        &self.norm
    }

    pub fn norm_handle(&self) -> Arc<QuadraticNorm<T>> {
        Arc::clone(&self.norm)
    }

    pub fn objective(&self) -> &Arc<dyn Objective<T>> {
        &self.func
    }

    pub fn reference(&self) -> Option<&Reference<T>> {
        self.reference.as_ref()
    }

    fn check_vector(&self, x: &Vector<T>) -> Result<(), NumError> {
        if x.dim() != self.dim() {
            return Err(NumError::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        Ok(())
    }

    pub fn value(&self, x: &Vector<T>) -> Result<T, NumError> {
        self.check_vector(x)?;
        Ok(self.func.value(x))
    }

    pub fn gradient(&self, x: &Vector<T>) -> Result<Vector<T>, NumError> {
        self.check_vector(x)?;
        Ok(self.func.gradient(x))
    }

    /// `f(x) − f⋆`, or `None` without a reference.
    pub fn gap(&self, x: &Vector<T>) -> Result<Option<T>, NumError> {
        self.check_vector(x)?;
        Ok(self.reference.as_ref().map(|r| self.func.excess(x, r)))
    }
}

fn check_constants<T: Scalar>(smoothness: T, strong_convexity: T) -> Result<(), ProblemError> {
    if !(smoothness > T::zero()) || !smoothness.is_finite() {
        return Err(ProblemError::Usage(format!(
            "smoothness constant must be positive, got {smoothness}"
        )));
    }
    if !(strong_convexity >= T::zero()) || strong_convexity > smoothness {
        return Err(ProblemError::Usage(format!(
            "need L ≥ μ ≥ 0, got L = {smoothness}, μ = {strong_convexity}"
        )));
    }
    Ok(())
}

pub(crate) fn seeded_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn gaussian(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    use rand::Rng;
    rng.sample(rand_distr::StandardNormal)
}

/// Largest eigenvalue of `AᵀA` (squared spectral norm), via a dense
/// symmetric eigen-decomposition of the Gram matrix.
pub(crate) fn spectral_norm_sq<T: Scalar>(a: &crate::numkit::Matrix<T>) -> Result<T, NumError> {
    let gram = a.transpose().matmul(a)?;
    let (vals, _) = gram.symmetric_eigen()?;
    Ok(vals.last().copied().unwrap_or(T::zero()).max(T::zero()))
}
