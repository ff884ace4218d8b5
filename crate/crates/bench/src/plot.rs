//! Standalone SVG convergence plots on a log-scale y axis.

use std::fmt::Write as _;
use std::path::Path;

use crate::table::TraceTable;
use crate::BenchError;

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 48.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub dashed: bool,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
            dashed: false,
        }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }
}

/// Gap and bound curves of one trace: `f(y_k) − f⋆`, `f(x̃_k) − f⋆` and the
/// bounds that were certified. Without a reference the gradient norm is
/// plotted instead.
pub fn trace_series(t: &TraceTable) -> Vec<Series> {
    let pts = |f: &dyn Fn(&crate::table::TraceRecord) -> Option<f64>| -> Vec<(f64, f64)> {
        t.rows.iter().filter_map(|r| f(r).map(|v| (r.k as f64, v))).collect()
    };
    let mut out = Vec::new();
    match t.meta.f_star {
        Some(fs) => {
            out.push(Series::new("f(y_k) − f⋆", pts(&|r| Some(r.f_y - fs))));
            let xt = pts(&|r| r.f_xtilde.map(|v| v - fs));
            if !xt.is_empty() {
                out.push(Series::new("f(x̃_k) − f⋆", xt));
            }
        }
        None => out.push(Series::new("‖∇f(x_k)‖⋆", pts(&|r| Some(r.grad_dual_norm)))),
    }
    for (label, s) in [
        ("bound (y)", pts(&|r| r.bound_primary)),
        ("bound (x̃)", pts(&|r| r.bound_secondary)),
    ] {
        if !s.is_empty() {
            out.push(Series::new(label, s).dashed());
        }
    }
    out
}

pub fn emit_plot(t: &TraceTable, path: &Path) -> Result<(), BenchError> {
    if t.rows.is_empty() {
        return Err(BenchError::Usage("cannot plot an empty trace".into()));
    }
    let title = format!("{} — {}", t.meta.method, t.meta.problem);
    std::fs::write(path, render_svg(&title, &trace_series(t)))?;
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders `series` with `log10` on the y axis. Nonpositive and non-finite
/// values have no logarithm and are left out.
pub fn render_svg(title: &str, series: &[Series]) -> String {
    let visible: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            s.points
                .iter()
                .filter(|(x, y)| x.is_finite() && *y > 0.0 && y.is_finite())
                .map(|&(x, y)| (x, y.log10()))
                .collect()
        })
        .collect();
    let all = visible.iter().flatten();
    let (mut x0, mut x1) = all.clone().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (mut y0, mut y1) = all.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, -16.0, 0.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    (y0, y1) = (y0.floor(), y1.ceil());
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, LEFT + pw / 2.0, escape(title));

    // Decade grid on y, up to ~8 labelled ticks.
    let span = (y1 - y0) as i64;
    let step = (span / 8).max(1);
    let mut e = y0 as i64;
    while e <= y1 as i64 {
        let y = sy(e as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e0e0e0"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{e}</text>"##,
            LEFT + pw,
            LEFT - 6.0,
            y + 4.0
        );
        e += step;
    }
    for i in 0..=5 {
        let x = x0 + (x1 - x0) * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(x),
            TOP + ph + 18.0,
            fmt_tick(x)
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="middle">k</text>"#,
        LEFT + pw / 2.0,
        H - 10.0
    );

    for (i, (ser, pts)) in series.iter().zip(&visible).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let dash = if ser.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        match pts.len() {
            0 => {}
            1 => {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, sx(pts[0].0), sy(pts[0].1));
            }
            _ => {
                let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
                let _ = writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                    path.join(" ")
                );
            }
        }
        let ly = TOP + 12.0 + 18.0 * i as f64;
        let lx = W - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"{dash}/><text x="{}" y="{}">{}</text>"#,
            lx + 22.0,
            lx + 28.0,
            ly + 4.0,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{x:.0}")
    } else {
        format!("{x:.1}")
    }
}
