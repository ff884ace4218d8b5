//! Versioned CSV files for traces and certificate reports.
//!
//! Layout: a `schema=1` line, `# key=value` metadata lines, a header row,
//! then data. Floats are written with 17 significant digits so a file
//! re-parses to identical values; missing values are empty fields.

use std::io::{BufRead, Write};

use ogm_lab::certificates::CertificateReport;
use ogm_lab::methods::Trace;

use crate::BenchError;

pub const SCHEMA: &str = "schema=1";

pub const TRACE_COLUMNS: [&str; 11] = [
    "k",
    "f_x",
    "f_y",
    "f_xtilde",
    "grad_dual_norm",
    "bound_primary",
    "bound_secondary",
    "lyap",
    "lyap_tilde",
    "primary_violated",
    "secondary_violated",
];

pub const CERT_COLUMNS: [&str; 7] = ["k", "lyap", "dlyap", "bound", "gap", "slack", "violated"];

#[derive(Debug, Clone, PartialEq)]
pub struct TraceMeta {
    pub run: String,
    pub method: String,
    pub problem: String,
    pub smoothness: f64,
    pub strong_convexity: f64,
    pub seed: u64,
    pub f_star: Option<f64>,
    pub reference_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub k: usize,
    pub f_x: f64,
    pub f_y: f64,
    pub f_xtilde: Option<f64>,
    pub grad_dual_norm: f64,
    pub bound_primary: Option<f64>,
    pub bound_secondary: Option<f64>,
    pub lyap: Option<f64>,
    pub lyap_tilde: Option<f64>,
    pub primary_violated: bool,
    pub secondary_violated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    pub meta: TraceMeta,
    pub rows: Vec<TraceRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertRecord {
    pub k: i64,
    pub lyap: Option<f64>,
    pub dlyap: Option<f64>,
    pub bound: Option<f64>,
    pub gap: Option<f64>,
    pub slack: Option<f64>,
    pub violated: bool,
}

impl TraceTable {
    /// Joins a trajectory with its certificate (when one was computed) by `k`.
    pub fn build(meta: TraceMeta, trace: &Trace<f64>, report: Option<&CertificateReport<f64>>) -> Result<Self, BenchError> {
        let norm = trace.oracle.norm();
        let mut rows = Vec::with_capacity(trace.rows.len());
        for s in &trace.rows {
            let c = report.and_then(|r| r.rows.iter().find(|c| c.k == s.k as i64));
            let below = |v: Option<f64>, tol: f64| v.is_some_and(|x| x < -tol || x.is_nan());
            rows.push(TraceRecord {
                k: s.k,
                f_x: s.f_x,
                f_y: s.f_y,
                f_xtilde: s.f_xtilde,
                grad_dual_norm: norm.dual_norm(&s.grad_x)?,
                bound_primary: c.and_then(|c| c.bound),
                bound_secondary: c.and_then(|c| c.bound_secondary),
                lyap: c.and_then(|c| c.lyap),
                lyap_tilde: c.and_then(|c| c.lyap_tilde),
                primary_violated: c.is_some_and(|c| below(c.slack, c.tol_gap)),
                secondary_violated: c.is_some_and(|c| below(c.slack_secondary, c.tol_gap)),
            });
        }
        Ok(Self { meta, rows })
    }
}

/// Certificate rows for `k ≥ 0`; the OGM potential's `k = −1` row carries no
/// check of its own and is folded into row 0's `dlyap`.
pub fn cert_records(report: &CertificateReport<f64>) -> Vec<CertRecord> {
    report
        .rows
        .iter()
        .filter(|r| r.k >= 0)
        .map(|r| CertRecord {
            k: r.k,
            lyap: r.lyap,
            dlyap: r.dlyap,
            bound: r.bound,
            gap: r.gap,
            slack: r.slack,
            violated: r.violated,
        })
        .collect()
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn fmt_flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn write_trace<W: Write>(mut w: W, t: &TraceTable) -> Result<(), BenchError> {
    writeln!(w, "{SCHEMA}")?;
    let m = &t.meta;
    writeln!(w, "# run={}", m.run)?;
    writeln!(w, "# method={}", m.method)?;
    writeln!(w, "# problem={}", m.problem)?;
    writeln!(w, "# L={}", fmt_f64(m.smoothness))?;
    writeln!(w, "# mu={}", fmt_f64(m.strong_convexity))?;
    writeln!(w, "# seed={}", m.seed)?;
    writeln!(w, "# f_star={}", fmt_opt(m.f_star))?;
    writeln!(w, "# reference_residual={}", fmt_opt(m.reference_residual))?;
    let mut c = writer(w);
    c.write_record(TRACE_COLUMNS)?;
    for r in &t.rows {
        c.write_record([
            r.k.to_string(),
            fmt_f64(r.f_x),
            fmt_f64(r.f_y),
            fmt_opt(r.f_xtilde),
            fmt_f64(r.grad_dual_norm),
            fmt_opt(r.bound_primary),
            fmt_opt(r.bound_secondary),
            fmt_opt(r.lyap),
            fmt_opt(r.lyap_tilde),
            fmt_flag(r.primary_violated).into(),
            fmt_flag(r.secondary_violated).into(),
        ])?;
    }
    c.flush()?;
    Ok(())
}

pub fn write_cert<W: Write>(mut w: W, rows: &[CertRecord]) -> Result<(), BenchError> {
    writeln!(w, "{SCHEMA}")?;
    let mut c = writer(w);
    c.write_record(CERT_COLUMNS)?;
    for r in rows {
        c.write_record([
            r.k.to_string(),
            fmt_opt(r.lyap),
            fmt_opt(r.dlyap),
            fmt_opt(r.bound),
            fmt_opt(r.gap),
            fmt_opt(r.slack),
            fmt_flag(r.violated).into(),
        ])?;
    }
    c.flush()?;
    Ok(())
}

/// Splits off the schema line and `# key=value` metadata; returns the
/// metadata and the remaining CSV text.
fn prelude<R: BufRead>(r: R) -> Result<(Vec<(String, String)>, String), BenchError> {
    let mut lines = r.lines();
    match lines.next().transpose()? {
        Some(l) if l == SCHEMA => {}
        Some(l) => return Err(BenchError::Csv(format!("unsupported schema line `{l}`"))),
        None => return Err(BenchError::Csv("empty file".into())),
    }
    let mut meta = Vec::new();
    let mut body = String::new();
    for line in lines {
        let line = line?;
        match line.strip_prefix("# ") {
            Some(kv) if body.is_empty() => {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| BenchError::Csv(format!("malformed metadata `{line}`")))?;
                meta.push((k.to_string(), v.to_string()));
            }
            _ => {
                body.push_str(&line);
                body.push('\n');
            }
        }
    }
    Ok((meta, body))
}

fn parse_f64(s: &str) -> Result<f64, BenchError> {
    s.parse().map_err(|_| BenchError::Csv(format!("bad number `{s}`")))
}

fn parse_opt(s: &str) -> Result<Option<f64>, BenchError> {
    if s.is_empty() {
        Ok(None)
    } else {
        parse_f64(s).map(Some)
    }
}

fn parse_flag(s: &str) -> Result<bool, BenchError> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(BenchError::Csv(format!("bad flag `{s}`"))),
    }
}

fn records(body: &str, columns: &[&str]) -> Result<Vec<csv::StringRecord>, BenchError> {
    let mut rd = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let header = rd.headers()?.clone();
    if header.iter().ne(columns.iter().copied()) {
        return Err(BenchError::Csv(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    Ok(rd.records().collect::<Result<_, _>>()?)
}

pub fn read_trace<R: BufRead>(r: R) -> Result<TraceTable, BenchError> {
    let (meta, body) = prelude(r)?;
    let get = |key: &str| -> Result<&str, BenchError> {
        meta.iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| BenchError::Csv(format!("missing metadata `{key}`")))
    };
    let meta = TraceMeta {
        run: get("run")?.to_string(),
        method: get("method")?.to_string(),
        problem: get("problem")?.to_string(),
        smoothness: parse_f64(get("L")?)?,
        strong_convexity: parse_f64(get("mu")?)?,
        seed: get("seed")?.parse().map_err(|_| BenchError::Csv("bad seed".into()))?,
        f_star: parse_opt(get("f_star")?)?,
        reference_residual: parse_opt(get("reference_residual")?)?,
    };
    let mut rows = Vec::new();
    for rec in records(&body, &TRACE_COLUMNS)? {
        let f = |i: usize| &rec[i];
        rows.push(TraceRecord {
            k: f(0).parse().map_err(|_| BenchError::Csv(format!("bad k `{}`", f(0))))?,
            f_x: parse_f64(f(1))?,
            f_y: parse_f64(f(2))?,
            f_xtilde: parse_opt(f(3))?,
            grad_dual_norm: parse_f64(f(4))?,
            bound_primary: parse_opt(f(5))?,
            bound_secondary: parse_opt(f(6))?,
            lyap: parse_opt(f(7))?,
            lyap_tilde: parse_opt(f(8))?,
            primary_violated: parse_flag(f(9))?,
            secondary_violated: parse_flag(f(10))?,
        });
    }
    Ok(TraceTable { meta, rows })
}

pub fn read_cert<R: BufRead>(r: R) -> Result<Vec<CertRecord>, BenchError> {
    let (_, body) = prelude(r)?;
    records(&body, &CERT_COLUMNS)?
        .into_iter()
        .map(|rec| {
            Ok(CertRecord {
                k: rec[0].parse().map_err(|_| BenchError::Csv(format!("bad k `{}`", &rec[0])))?,
                lyap: parse_opt(&rec[1])?,
                dlyap: parse_opt(&rec[2])?,
                bound: parse_opt(&rec[3])?,
                gap: parse_opt(&rec[4])?,
                slack: parse_opt(&rec[5])?,
                violated: parse_flag(&rec[6])?,
            })
        })
        .collect()
}
