//! Experiment harness for `ogm-lab`: TOML-configured runs, versioned CSV
//! traces, SVG convergence plots, and the acceptance suite.

pub mod cli;
pub mod config;
pub mod plot;
pub mod runner;
pub mod suite;
pub mod table;

use thiserror::Error;

use ogm_lab::certificates::CertError;
use ogm_lab::methods::MethodError;
use ogm_lab::numkit::NumError;
use ogm_lab::problems::ProblemError;
use ogm_lab::schedules::ScheduleError;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Method(MethodError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Num(#[from] NumError),
}

impl From<csv::Error> for BenchError {
    fn from(e: csv::Error) -> Self {
        Self::Csv(e.to_string())
    }
}
