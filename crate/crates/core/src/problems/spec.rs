use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use super::{make_log_sum_exp, make_logistic, make_quadratic, ObjectiveOracle, ProblemError};
use crate::numkit::QuadraticNorm;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Quadratic,
    LogSumExp,
    Logistic,
}

impl ProblemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Quadratic => "quadratic",
            Self::LogSumExp => "log_sum_exp",
            Self::Logistic => "logistic",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemKind {
    type Err = ProblemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quadratic" => Ok(Self::Quadratic),
            "log_sum_exp" | "logsumexp" => Ok(Self::LogSumExp),
            "logistic" => Ok(Self::Logistic),
            other => Err(ProblemError::Usage(format!("unknown problem kind `{other}`"))),
        }
    }
}

/// Everything needed to rebuild a problem instance bit-for-bit.
///
/// Which fields matter depends on `kind`:
/// - quadratic: `dimension`, `kappa` (`∞` for a singular Hessian), `smoothness`
/// - log-sum-exp: `dimension`, `samples`, `rho`
/// - logistic: `data_path`, or a synthetic set from `dimension`/`samples`;
///   ridge from `ridge`, or chosen so that `L/μ = kappa` when `ridge` is unset
///   and `kappa` is finite
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    pub dimension: usize,
    pub seed: u64,
    pub kappa: f64,
    pub smoothness: f64,
    pub samples: usize,
    pub rho: f64,
    pub ridge: Option<f64>,
    pub data_path: Option<PathBuf>,
}

impl ProblemSpec {
    pub fn quadratic(dimension: usize, kappa: f64, seed: u64) -> Self {
        Self {
            kind: ProblemKind::Quadratic,
            dimension,
            seed,
            kappa,
            smoothness: 1.0,
            samples: 0,
            rho: 1.0,
            ridge: None,
            data_path: None,
        }
    }

    pub fn log_sum_exp(dimension: usize, samples: usize, seed: u64) -> Self {
        Self {
            kind: ProblemKind::LogSumExp,
            samples,
            kappa: f64::INFINITY,
            ..Self::quadratic(dimension, f64::INFINITY, seed)
        }
    }

    pub fn logistic(dimension: usize, samples: usize, seed: u64) -> Self {
        Self {
            kind: ProblemKind::Logistic,
            samples,
            kappa: f64::INFINITY,
            ..Self::quadratic(dimension, f64::INFINITY, seed)
        }
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        let usage = |m: String| Err(ProblemError::Usage(m));
        if self.dimension == 0 && self.data_path.is_none() {
            return usage("dimension must be ≥ 1".into());
        }
        match self.kind {
            ProblemKind::Quadratic => {
                if !(self.kappa >= 1.0) {
                    return usage(format!("kappa must be ≥ 1, got {}", self.kappa));
                }
                if !(self.smoothness > 0.0 && self.smoothness.is_finite()) {
                    return usage(format!("smoothness must be positive, got {}", self.smoothness));
                }
            }
            ProblemKind::LogSumExp => {
                if !(self.rho > 0.0 && self.rho.is_finite()) {
                    return usage(format!("rho must be positive, got {}", self.rho));
                }
                if self.samples == 0 {
                    return usage("log_sum_exp needs at least one term".into());
                }
            }
            ProblemKind::Logistic => {
                if let Some(r) = self.ridge {
                    if !(r >= 0.0 && r.is_finite()) {
                        return usage(format!("ridge must be ≥ 0, got {r}"));
                    }
                }
                if !(self.kappa > 1.0) {
                    return usage(format!("kappa must be > 1, got {}", self.kappa));
                }
                if self.data_path.is_none() && self.samples == 0 {
                    return usage("logistic needs data_path or samples ≥ 1".into());
                }
            }
        }
        Ok(())
    }

    /// Stable human-readable identifier, e.g. `quadratic-n8-k1e1-s3`.
    pub fn label(&self) -> String {
        match self.kind {
            ProblemKind::Quadratic => format!(
                "quadratic-n{}-k{}-s{}",
                self.dimension,
                short(self.kappa),
                self.seed
            ),
            ProblemKind::LogSumExp => format!(
                "log_sum_exp-n{}-m{}-s{}",
                self.dimension, self.samples, self.seed
            ),
            ProblemKind::Logistic => match &self.data_path {
                Some(p) => format!("logistic-{}", p.display()),
                None => format!("logistic-n{}-m{}-s{}", self.dimension, self.samples, self.seed),
            },
        }
    }

    /// Builds the oracle. Non-quadratic families always use the Euclidean
    /// norm; their references come from a refinement run.
    pub fn build<T: Scalar>(&self, norm: Option<Arc<QuadraticNorm<T>>>) -> Result<ObjectiveOracle<T>, ProblemError> {
        match self.kind {
            ProblemKind::Quadratic => {
                let norm = norm.unwrap_or_else(|| Arc::new(QuadraticNorm::identity(self.dimension)));
                make_quadratic(self, norm)
            }
            ProblemKind::LogSumExp => {
                reject_norm(&norm)?;
                make_log_sum_exp(self)
            }
            ProblemKind::Logistic => {
                reject_norm(&norm)?;
                let oracle = make_logistic(self)?;
                super::refine_reference(oracle, T::lit(1e-12))
            }
        }
    }
}

fn reject_norm<T: Scalar>(norm: &Option<Arc<QuadraticNorm<T>>>) -> Result<(), ProblemError> {
    match norm {
        Some(n) if !n.is_identity() => Err(ProblemError::Usage(
            "only quadratic problems accept a non-Euclidean norm".into(),
        )),
        _ => Ok(()),
    }
}

fn short(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v:e}")
    }
}
