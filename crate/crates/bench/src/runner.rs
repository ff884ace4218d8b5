//! Executes the runs of an [`ExperimentConfig`] and writes their files.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use ogm_lab::certificates::{certify_with, CertError, CertificateReport, Tolerance};
use ogm_lab::methods::{run, MethodError, Trace};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, RunConfig, ToleranceOverride};
use crate::plot::emit_plot;
use crate::table::{cert_records, write_cert, write_trace, TraceMeta, TraceTable};
use crate::BenchError;

pub const THREADS_ENV: &str = "OGM_LAB_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Clean,
    /// Iterations whose certificate rows were violated.
    Violated(Vec<i64>),
    Diverged { k: usize },
    /// No reference solution, so nothing was certified.
    Uncertified,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub name: String,
    pub rows: usize,
    pub files: Vec<PathBuf>,
    pub status: RunStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    /// Sorted by run name.
    pub outcomes: Vec<RunOutcome>,
}

impl ExperimentReport {
    /// 0 when clean, 1 if any run could not be set up, else 2 on any
    /// violation or divergence.
    pub fn exit_code(&self) -> i32 {
        if self.outcomes.iter().any(|o| matches!(o.status, RunStatus::Failed(_))) {
            1
        } else if self
            .outcomes
            .iter()
            .any(|o| matches!(o.status, RunStatus::Violated(_) | RunStatus::Diverged { .. }))
        {
            2
        } else {
            0
        }
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            let line = match &o.status {
                RunStatus::Clean => format!("{}: ok ({} rows)", o.name, o.rows),
                RunStatus::Uncertified => format!("{}: ok, not certified (no reference) ({} rows)", o.name, o.rows),
                RunStatus::Violated(ks) => {
                    let shown: Vec<String> = ks.iter().take(10).map(|k| k.to_string()).collect();
                    let more = if ks.len() > 10 { format!(" … ({} total)", ks.len()) } else { String::new() };
                    format!("{}: certificate violated at k = {}{more}", o.name, shown.join(", "))
                }
                RunStatus::Diverged { k } => format!("{}: diverged at k = {k}", o.name),
                RunStatus::Failed(m) => format!("{}: error: {m}", o.name),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

/// Thread pool sized by `OGM_LAB_THREADS`, or by the number of logical cores.
pub fn thread_pool() -> Result<rayon::ThreadPool, BenchError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| BenchError::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
        b = b.num_threads(n);
    }
    b.build().map_err(|e| BenchError::Config(e.to_string()))
}

pub fn execute(cfg: &ExperimentConfig, out_dir: &Path, plots: bool) -> Result<ExperimentReport, BenchError> {
    std::fs::create_dir_all(out_dir)?;
    let plots = plots || cfg.plots;
    let pool = thread_pool()?;
    let mut outcomes: Vec<RunOutcome> =
        pool.install(|| cfg.runs.par_iter().map(|r| execute_one(cfg, r, out_dir, plots)).collect());
    outcomes.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(ExperimentReport { outcomes })
}

fn execute_one(cfg: &ExperimentConfig, r: &RunConfig, out_dir: &Path, plots: bool) -> RunOutcome {
    let mut outcome = RunOutcome {
        name: r.name.clone(),
        rows: 0,
        files: Vec::new(),
        status: RunStatus::Clean,
    };
    if let Err(e) = execute_inner(cfg, r, out_dir, plots, &mut outcome) {
        outcome.status = RunStatus::Failed(e.to_string());
    }
    outcome
}

fn execute_inner(
    cfg: &ExperimentConfig,
    r: &RunConfig,
    out_dir: &Path,
    plots: bool,
    outcome: &mut RunOutcome,
) -> Result<(), BenchError> {
    let (spec, oracle) = r.problem.build(cfg.seed)?;
    let method = r.method_config().map_err(BenchError::Config)?;
    let x0 = r.start(oracle.dim())?;
    let (trace, diverged) = match run(method, &oracle, &x0, r.iterations) {
        Ok(t) => (t, None),
        Err(e) => match (e.source, e.trace) {
            (MethodError::Divergence { k }, Some(t)) => (t, Some(k)),
            (MethodError::Divergence { k }, None) => {
                outcome.status = RunStatus::Diverged { k };
                return Ok(());
            }
            (other, _) => return Err(BenchError::Method(other)),
        },
    };
    let report = match diverged {
        Some(_) => None,
        None => certify_trace(&trace, cfg.tolerance)?,
    };
    let meta = TraceMeta {
        run: r.name.clone(),
        method: trace.config.label(),
        problem: spec.label(),
        smoothness: oracle.smoothness(),
        strong_convexity: oracle.strong_convexity(),
        seed: spec.seed,
        f_star: oracle.reference().map(|x| x.value),
        reference_residual: oracle.reference().map(|x| x.residual),
    };
    let table = TraceTable::build(meta, &trace, report.as_ref())?;
    outcome.rows = table.rows.len();

    let prefix = r.prefix();
    let trace_path = out_dir.join(format!("{prefix}.trace.csv"));
    write_trace(BufWriter::new(File::create(&trace_path)?), &table)?;
    outcome.files.push(trace_path);
    let cert_path = out_dir.join(format!("{prefix}.cert.csv"));
    let cert_rows = report.as_ref().map(cert_records).unwrap_or_default();
    write_cert(BufWriter::new(File::create(&cert_path)?), &cert_rows)?;
    outcome.files.push(cert_path);
    if plots && !table.rows.is_empty() {
        let svg = out_dir.join(format!("{prefix}.svg"));
        emit_plot(&table, &svg)?;
        outcome.files.push(svg);
    }

    outcome.status = match (diverged, &report) {
        (Some(k), _) => RunStatus::Diverged { k },
        (None, None) => RunStatus::Uncertified,
        (None, Some(rep)) => {
            let bad: Vec<i64> = rep.rows.iter().filter(|c| c.violated).map(|c| c.k).collect();
            if bad.is_empty() {
                RunStatus::Clean
            } else {
                RunStatus::Violated(bad)
            }
        }
    };
    Ok(())
}

/// Certificate under the default tolerance model with `ovr` applied; `None`
/// when the problem has no reference solution.
pub fn certify_trace(trace: &Trace<f64>, ovr: ToleranceOverride) -> Result<Option<CertificateReport<f64>>, BenchError> {
    let mut tol = match Tolerance::for_trace(trace) {
        Ok(t) => t,
        Err(CertError::Unavailable(_)) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    if let Some(b) = ovr.base {
        tol.base = b;
    }
    if let Some(d) = ovr.drift {
        tol.drift = d;
    }
    Ok(Some(certify_with(trace, tol)?))
}
