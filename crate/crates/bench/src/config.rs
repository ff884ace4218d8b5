//! Experiment configuration.
//!
//! ```toml
//! seed = 7            # default problem seed
//! plots = true
//!
//! [tolerance]         # optional overrides of the certificate model
//! base = 1e-9
//! drift = 1e-12
//!
//! [[run]]
//! name = "ogm-quad"
//! method = "ogm"
//! iterations = 100
//! last_step = true    # or phi = "simple"
//! [run.problem]
//! kind = "quadratic"
//! dimension = 8
//! kappa = 10.0
//! ```

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ogm_lab::methods::{Algorithm, MethodConfig};
use ogm_lab::numkit::{Matrix, QuadraticNorm, Vector};
use ogm_lab::problems::{ObjectiveOracle, ProblemKind, ProblemSpec, Quadratic};
use ogm_lab::schedules::{CouplingMode, PhiSchedule, ThetaSchedule};
use serde::Deserialize;

use crate::BenchError;

/// Parses configuration text. TOML is the only format shipped; anything that
/// produces an [`ExperimentConfig`] can stand in.
pub trait ConfigFormat {
    fn parse(&self, text: &str) -> Result<ExperimentConfig, BenchError>;
}

pub struct Toml;

impl ConfigFormat for Toml {
    fn parse(&self, text: &str) -> Result<ExperimentConfig, BenchError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig, BenchError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| BenchError::Config(format!("cannot read {}: {e}", path.display())))?;
    Toml.parse(&text)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub plots: bool,
    #[serde(default)]
    pub tolerance: ToleranceOverride,
    #[serde(rename = "run", default)]
    pub runs: Vec<RunConfig>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverride {
    pub base: Option<f64>,
    pub drift: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub method: String,
    pub iterations: usize,
    pub problem: ProblemConfig,
    /// File prefix; defaults to `name`.
    pub output: Option<String>,
    /// `"exact"` (default) or `"simple"`.
    pub theta: Option<String>,
    /// Last-step schedule, `"exact"` or `"simple"`.
    pub phi: Option<String>,
    /// Shorthand for `phi = "exact"`.
    #[serde(default)]
    pub last_step: bool,
    pub t: Option<f64>,
    /// Linear-coupling mode, `"ogm"` (default) or `"agm"`.
    pub coupling: Option<String>,
    /// Starting point; all ones when absent.
    pub x0: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub kind: String,
    pub dimension: Option<usize>,
    pub kappa: Option<f64>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub rho: Option<f64>,
    pub ridge: Option<f64>,
    pub data: Option<PathBuf>,
    /// Explicit Hessian `diag(d)` with minimizer 0 (quadratic only).
    pub diagonal: Option<Vec<f64>>,
    /// Preconditioner `Q = diag(q)` (quadratic only).
    pub norm_diagonal: Option<Vec<f64>>,
    /// Smoothness constant handed to the methods instead of the true one.
    pub assumed_smoothness: Option<f64>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::Config(m));
        if self.runs.is_empty() {
            return bad("config defines no [[run]]".into());
        }
        let mut names = BTreeSet::new();
        let mut prefixes = BTreeSet::new();
        for r in &self.runs {
            if !names.insert(r.name.as_str()) {
                return bad(format!("duplicate run name `{}`", r.name));
            }
            if !prefixes.insert(r.prefix()) {
                return bad(format!("duplicate output prefix `{}`", r.prefix()));
            }
            if r.iterations == 0 {
                return bad(format!("run `{}`: iterations must be ≥ 1", r.name));
            }
            r.method_config().map_err(|e| BenchError::Config(format!("run `{}`: {e}", r.name)))?;
        }
        for v in [self.tolerance.base, self.tolerance.drift].into_iter().flatten() {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("tolerance overrides must be finite and ≥ 0, got {v}"));
            }
        }
        Ok(())
    }
}

impl RunConfig {
    pub fn prefix(&self) -> String {
        self.output.clone().unwrap_or_else(|| self.name.clone())
    }

    pub fn method_config(&self) -> Result<MethodConfig<f64>, String> {
        let alg: Algorithm = self.method.parse().map_err(|e: ogm_lab::methods::MethodError| e.to_string())?;
        let mut cfg = MethodConfig::new(alg);
        match self.theta.as_deref() {
            None => {}
            Some("exact") => cfg = cfg.with_theta(ThetaSchedule::exact()),
            Some("simple") => cfg = cfg.with_theta(ThetaSchedule::simple()),
            Some(other) => return Err(format!("unknown theta schedule `{other}`")),
        }
        let phi = match (self.phi.as_deref(), self.last_step) {
            (None, false) => None,
            (None, true) | (Some("exact"), _) => Some(PhiSchedule::exact(cfg.theta.clone())),
            (Some("simple"), _) => Some(PhiSchedule::simple(cfg.theta.clone())),
            (Some(other), _) => return Err(format!("unknown phi schedule `{other}`")),
        };
        if let Some(p) = phi {
            cfg = cfg.with_phi(p);
        }
        if let Some(t) = self.t {
            cfg = cfg.with_t(t);
        }
        match self.coupling.as_deref() {
            None | Some("ogm") => {}
            Some("agm") => cfg = cfg.with_coupling(CouplingMode::Agm),
            Some(other) => return Err(format!("unknown coupling mode `{other}`")),
        }
        Ok(cfg)
    }

    pub fn start(&self, dim: usize) -> Result<Vector<f64>, BenchError> {
        match &self.x0 {
            None => Ok(Vector::filled(dim, 1.0)),
            Some(v) if v.len() == dim => Ok(Vector::from_f64(v)?),
            Some(v) => Err(BenchError::Config(format!(
                "run `{}`: x0 has {} entries, problem has dimension {dim}",
                self.name,
                v.len()
            ))),
        }
    }
}

impl ProblemConfig {
    /// The generator spec, with `default_seed` filling an absent seed.
    pub fn spec(&self, default_seed: u64) -> Result<ProblemSpec, BenchError> {
        let kind: ProblemKind = self.kind.parse()?;
        let seed = self.seed.unwrap_or(default_seed);
        let dim = self.dimension.or(self.diagonal.as_ref().map(Vec::len)).unwrap_or(0);
        let mut spec = match kind {
            ProblemKind::Quadratic => ProblemSpec::quadratic(dim, self.kappa.unwrap_or(10.0), seed),
            ProblemKind::LogSumExp => ProblemSpec::log_sum_exp(dim, self.samples.unwrap_or(0), seed),
            ProblemKind::Logistic => ProblemSpec::logistic(dim, self.samples.unwrap_or(0), seed),
        };
        if kind != ProblemKind::Quadratic {
            if let Some(k) = self.kappa {
                spec.kappa = k;
            }
        }
        if let Some(r) = self.rho {
            spec.rho = r;
        }
        spec.ridge = self.ridge;
        spec.data_path = self.data.clone();
        Ok(spec)
    }

    pub fn build(&self, default_seed: u64) -> Result<(ProblemSpec, ObjectiveOracle<f64>), BenchError> {
        let spec = self.spec(default_seed)?;
        let norm = match &self.norm_diagonal {
            Some(q) => Some(Arc::new(QuadraticNorm::<f64>::diagonal(q)?)),
            None => None,
        };
        let oracle = match (&self.diagonal, spec.kind) {
            (Some(d), ProblemKind::Quadratic) => {
                let norm = norm.unwrap_or_else(|| Arc::new(QuadraticNorm::identity(d.len())));
                Quadratic::new(Matrix::diag_f64(d)?, Vector::zeros(d.len()))?.into_oracle(norm, "diag")?
            }
            (Some(_), _) => return Err(BenchError::Config("`diagonal` only applies to quadratics".into())),
            (None, _) => spec.build(norm)?,
        };
        let oracle = match self.assumed_smoothness {
            Some(l) => {
                let mu = oracle.strong_convexity().min(l);
                oracle.with_constants(l, mu)?
            }
            None => oracle,
        };
        Ok((spec, oracle))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_RUN: &str = r#"
        [[run]]
        name = "a"
        method = "ogm"
        iterations = 10
        [run.problem]
        kind = "quadratic"
        dimension = 3
    "#;

    #[test]
    fn parses_minimal_run() {
        let c = Toml.parse(ONE_RUN).unwrap();
        assert_eq!(c.runs.len(), 1);
        assert_eq!(c.runs[0].prefix(), "a");
        let (_, o) = c.runs[0].problem.build(c.seed).unwrap();
        assert_eq!(o.dim(), 3);
    }

    #[test]
    fn rejects_bad_configs() {
        let dup = format!("{ONE_RUN}{ONE_RUN}");
        assert!(Toml.parse(&dup).is_err());
        assert!(Toml.parse(&ONE_RUN.replace("10", "0")).is_err());
        assert!(Toml.parse(&ONE_RUN.replace("\"ogm\"", "\"heavy_ball\"")).is_err());
        assert!(Toml.parse("seed = 1").is_err());
        assert!(Toml.parse(&ONE_RUN.replace("iterations", "iters")).is_err());
    }
}
