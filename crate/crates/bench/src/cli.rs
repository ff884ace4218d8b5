//! `ogm-lab run | schedule | verify`.
//!
//! Exit codes: 0 clean, 1 configuration or usage error, 2 certificate
//! violation, divergence, or failed acceptance criterion.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use ogm_lab::schedules::{estimate_zeta, gamma_sc, PhiSchedule, ThetaSchedule};

use crate::config::load_config;
use crate::runner::{execute, thread_pool};
use crate::suite::{run_suite, Mutation, SuiteOptions};
use crate::table::fmt_f64;
use crate::BenchError;

#[derive(Parser)]
#[command(name = "ogm-lab", version, about = "Optimized gradient methods with checked convergence certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute the runs of a TOML experiment file
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory for CSV and SVG files
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also write an SVG plot per run
        #[arg(long)]
        plots: bool,
    },
    /// Print a schedule table as CSV: theta, phi, gamma, or zeta
    Schedule {
        #[arg(long)]
        kind: String,
        /// Rows for theta/phi, decades of κ for gamma, horizon K for zeta
        #[arg(long)]
        count: usize,
    },
    /// Run the acceptance suite
    Verify {
        /// Fewer instances and a shorter ζ scan
        #[arg(long)]
        quick: bool,
        /// Inject a known defect; the suite must then fail
        #[arg(long, hide = true, value_name = "DEFECT")]
        mutate: Option<String>,
    },
}

pub fn main_with<I, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator,
    I::Item: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run { config, out: dir, plots } => cmd_run(&config, &dir, plots, out, err),
        Command::Schedule { kind, count } => cmd_schedule(&kind, count, out),
        Command::Verify { quick, mutate } => cmd_verify(quick, mutate.as_deref(), out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn cmd_run(config: &std::path::Path, dir: &std::path::Path, plots: bool, out: &mut impl Write, err: &mut impl Write) -> Result<i32, BenchError> {
    let cfg = load_config(config)?;
    let report = execute(&cfg, dir, plots)?;
    let code = report.exit_code();
    let summary = report.summary();
    if code == 0 {
        write!(out, "{summary}")?;
    } else {
        write!(err, "{summary}")?;
    }
    Ok(code)
}

fn cmd_schedule(kind: &str, count: usize, out: &mut impl Write) -> Result<i32, BenchError> {
    let need_rows = || {
        if count == 0 {
            Err(BenchError::Usage("--count must be ≥ 1".into()))
        } else {
            Ok(())
        }
    };
    let mut s = String::new();
    match kind {
        "theta" => {
            need_rows()?;
            let th = ThetaSchedule::<f64>::exact();
            s.push_str("k,theta\n");
            for k in 0..count {
                s.push_str(&format!("{k},{}\n", fmt_f64(th.at(k))));
            }
        }
        "phi" => {
            need_rows()?;
            let phi = PhiSchedule::<f64>::exact(ThetaSchedule::exact());
            s.push_str("k,phi\n");
            for k in 0..count {
                s.push_str(&format!("{k},{}\n", fmt_f64(phi.at(k))));
            }
        }
        "gamma" => {
            need_rows()?;
            s.push_str("kappa,gamma,momentum,contraction\n");
            for j in 1..=count.min(300) {
                let kappa = 10f64.powi(j as i32);
                let g = gamma_sc(kappa)?;
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt_f64(kappa),
                    fmt_f64(g.gamma),
                    fmt_f64(g.momentum()),
                    fmt_f64(g.contraction())
                ));
            }
        }
        "zeta" => {
            let (z, r) = estimate_zeta(count)?;
            s.push_str("K,zeta,residual\n");
            s.push_str(&format!("{count},{},{}\n", fmt_f64(z), fmt_f64(r)));
        }
        other => {
            return Err(BenchError::Usage(format!(
                "unknown schedule kind `{other}` (expected theta, phi, gamma or zeta)"
            )))
        }
    }
    out.write_all(s.as_bytes())?;
    Ok(0)
}

fn cmd_verify(quick: bool, mutate: Option<&str>, out: &mut impl Write, err: &mut impl Write) -> Result<i32, BenchError> {
    let mutation = match mutate {
        None => None,
        Some("theta-recurrence") => Some(Mutation::ThetaRecurrence),
        Some(other) => return Err(BenchError::Usage(format!("unknown mutation `{other}`"))),
    };
    let pool = thread_pool()?;
    let report = pool.install(|| run_suite(SuiteOptions { quick, mutation }));
    write!(out, "{}", report.render())?;
    write!(err, "{}", report.timings())?;
    Ok(if report.passed() { 0 } else { 2 })
}
