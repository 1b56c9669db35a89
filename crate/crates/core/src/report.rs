//! CSV and SVG output for SNR sweeps.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linear_model::to_db;
use crate::montecarlo::SweepPoint;

pub const CSV_HEADER: &str = "snr_db,noise_scale,mse_mmse_db,stderr_mmse,mse_lmmse_db,stderr_lmmse,lower_db,upper_db";

/// Trailing metadata lines appended after the data rows.
pub const CSV_NOTES: [&str; 3] = [
    "# mse_*_db, lower_db, upper_db: 10*log10 of the linear MSE (unit reference); stderr_* are linear",
    "# noise_scale: factor a applied to the configured noise mixture (means by a, covariances by a^2)",
    "# paired sampling: at each point every estimator is scored on the same (x, n) draws",
];

/// 17 significant digits, enough to recover any `f64` exactly.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub fn write_csv(points: &[SweepPoint<f64>]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, p) in points.iter().enumerate() {
        if let Some(msg) = &p.failure {
            let _ = writeln!(out, "# point {i} (snr_db {}) failed: {}", p.snr_db, msg.replace('\n', " "));
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            p.snr_db,
            opt(p.noise_scale),
            opt(p.mmse.map(|e| to_db(e.mse))),
            opt(p.mmse.map(|e| e.stderr)),
            opt(p.lmmse.map(|e| to_db(e.mse))),
            opt(p.lmmse.map(|e| e.stderr)),
            opt(p.bounds.map(|b| b.lower_db())),
            opt(p.bounds.map(|b| b.upper_db())),
        );
    }
    for note in CSV_NOTES {
        out.push_str(note);
        out.push('\n');
    }
    out
}

/// One parsed CSV data row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub snr_db: f64,
    pub noise_scale: Option<f64>,
    pub mse_mmse_db: Option<f64>,
    pub stderr_mmse: Option<f64>,
    pub mse_lmmse_db: Option<f64>,
    pub stderr_lmmse: Option<f64>,
    pub lower_db: Option<f64>,
    pub upper_db: Option<f64>,
}

/// Parses output of [`write_csv`]; `#` lines are skipped.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Config(format!("unexpected CSV header {other:?}"))),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(Error::Config(format!("CSV row {i}: expected 8 fields, found {}", fields.len())));
            }
            let parse = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse()
                        .map(Some)
                        .map_err(|e| Error::Config(format!("CSV row {i}: {s:?}: {e}")))
                }
            };
            Ok(CsvRow {
                snr_db: parse(fields[0])?.ok_or_else(|| Error::Config(format!("CSV row {i}: missing snr_db")))?,
                noise_scale: parse(fields[1])?,
                mse_mmse_db: parse(fields[2])?,
                stderr_mmse: parse(fields[3])?,
                mse_lmmse_db: parse(fields[4])?,
                stderr_lmmse: parse(fields[5])?,
                lower_db: parse(fields[6])?,
                upper_db: parse(fields[7])?,
            })
        })
        .collect()
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let raw = (hi - lo) / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

/// Single-panel chart of the four curves (MMSE, LMMSE, lower, upper) in dB
/// against SNR, on a fixed 800×600 viewBox.
pub fn write_svg(points: &[SweepPoint<f64>]) -> String {
    let series: [(&str, &str, &str, Vec<(f64, f64)>); 4] = [
        (
            "empirical MMSE",
            "#d62728",
            "",
            points
                .iter()
                .filter_map(|p| p.mmse.map(|e| (p.snr_db, to_db(e.mse))))
                .collect(),
        ),
        (
            "empirical LMMSE",
            "#2ca02c",
            "",
            points
                .iter()
                .filter_map(|p| p.lmmse.map(|e| (p.snr_db, to_db(e.mse))))
                .collect(),
        ),
        (
            "lower bound",
            "#1f77b4",
            " stroke-dasharray=\"6 4\"",
            points
                .iter()
                .filter_map(|p| p.bounds.map(|b| (p.snr_db, b.lower_db())))
                .collect(),
        ),
        (
            "upper bound",
            "#000000",
            " stroke-dasharray=\"2 3\"",
            points
                .iter()
                .filter_map(|p| p.bounds.map(|b| (p.snr_db, b.upper_db())))
                .collect(),
        ),
    ];
    let all = series
        .iter()
        .flat_map(|s| s.3.iter())
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-9 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-9 {
        y1 = y0 + 1.0;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(svg, "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"#444\"/>"
    );
    for t in nice_ticks(x0, x1, 10) {
        let x = sx(t);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{MARGIN_TOP}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#ddd\"/><text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{t}</text>",
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 18.0
        );
    }
    for t in nice_ticks(y0, y1, 8) {
        let y = sy(t);
        let _ = writeln!(
            svg,
            "<line x1=\"{MARGIN_LEFT}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#ddd\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{t}</text>",
            MARGIN_LEFT + plot_w,
            MARGIN_LEFT - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">SNR [dB]</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.2})\">MSE [dB]</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );
    for (i, (label, color, dash, pts)) in series.iter().enumerate() {
        if !pts.is_empty() {
            let coords: Vec<String> = pts
                .iter()
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                svg,
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash} points=\"{}\"/>",
                coords.join(" ")
            );
        }
        let ly = MARGIN_TOP + 18.0 + 18.0 * i as f64;
        let lx = MARGIN_LEFT + plot_w - 170.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"1.5\"{dash}/><text x=\"{:.2}\" y=\"{:.2}\">{label}</text>",
            lx + 30.0,
            lx + 38.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}
