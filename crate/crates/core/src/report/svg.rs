use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::sweep::RunRecord;

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 320.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const MARKER: &str = "#ff7f0e";

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub x_label: String,
    pub log_x: bool,
    /// Top of the y axis, `log2(s)` bits.
    pub y_max: f64,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn fmt_tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Scatter plot of entropy against the swept value: one marker per record,
/// y axis fixed to `[0, y_max]` bits.
pub fn render_svg(records: &[RunRecord], spec: &PlotSpec) -> Result<String> {
    if records.is_empty() {
        return Err(Error::InvalidInput("no records to plot".into()));
    }
    if !(spec.y_max > 0.0 && spec.y_max.is_finite()) {
        return Err(Error::InvalidInput(format!("y range must be positive, got {}", spec.y_max)));
    }
    let tx = |v: f64| if spec.log_x { v.log10() } else { v };
    if spec.log_x {
        if let Some(r) = records.iter().find(|r| r.param_value.is_nan() || r.param_value <= 0.0) {
            return Err(Error::InvalidInput(format!(
                "log x axis needs positive values, got {}",
                r.param_value
            )));
        }
    }
    let (mut lo, mut hi) = records.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
        let x = tx(r.param_value);
        (lo.min(x), hi.max(x))
    });
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |v: f64| LEFT + (tx(v) - lo) / (hi - lo) * plot_w;
    let py = |h: f64| TOP + (1.0 - h / spec.y_max) * plot_h;

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();

    // horizontal gridlines at whole bits, plus the top of the range
    let mut y_ticks: Vec<f64> = (0..=spec.y_max.floor() as u64).map(|b| b as f64).collect();
    if spec.y_max.fract() != 0.0 {
        y_ticks.push(spec.y_max);
    }
    s.push_str(r##"<g class="y-grid" stroke="#dddddd" stroke-width="1">"##);
    s.push('\n');
    for &b in &y_ticks {
        let y = py(b);
        writeln!(s, r#"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#, LEFT + plot_w).unwrap();
    }
    s.push_str("</g>\n");

    let x_ticks: Vec<f64> = if spec.log_x {
        (lo.ceil() as i32..=hi.floor() as i32).map(|e| 10f64.powi(e)).collect()
    } else {
        (0..=4).map(|k| lo + (hi - lo) * k as f64 / 4.0).collect()
    };

    s.push_str(r#"<g class="axes" stroke="black" stroke-width="1" fill="none">"#);
    s.push('\n');
    writeln!(
        s,
        r#"<polyline points="{LEFT:.2},{TOP:.2} {LEFT:.2},{:.2} {:.2},{:.2}"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    )
    .unwrap();
    for &t in &x_ticks {
        let x = px(t);
        writeln!(s, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#, TOP + plot_h, TOP + plot_h + 5.0).unwrap();
    }
    s.push_str("</g>\n");

    s.push_str(r#"<g class="labels" font-family="sans-serif" font-size="11" fill="black">"#);
    s.push('\n');
    for &t in &x_ticks {
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            px(t),
            TOP + plot_h + 18.0,
            escape(&fmt_tick(t))
        )
        .unwrap();
    }
    for &b in &y_ticks {
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py(b) + 4.0,
            escape(&fmt_tick(b))
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="13">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0,
        escape(&spec.x_label)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" font-size="13" transform="rotate(-90 16 {:.2})">entropy (bits)</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    )
    .unwrap();
    s.push_str("</g>\n");

    writeln!(s, r#"<g class="markers" fill="{MARKER}" fill-opacity="0.7">"#).unwrap();
    for r in records {
        let h = r.entropy_bits.clamp(0.0, spec.y_max);
        writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5"/>"#, px(r.param_value), py(h)).unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}
