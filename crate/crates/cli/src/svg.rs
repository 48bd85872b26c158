//! Static SVG line and scatter plots.

use std::fmt::Write as _;
use std::path::Path;

use jetsplit::RunRecord;

use crate::convergence::ConvergenceTable;
use crate::error::{LabError, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Line,
    Markers,
    LineMarkers,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

struct Axis {
    log: bool,
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        if log {
            (lo, hi) = (lo.floor(), hi.ceil());
        }
        if hi - lo < 1e-12 {
            (lo, hi) = (lo - 0.5, hi + 0.5);
        } else if !log {
            let pad = 0.05 * (hi - lo);
            (lo, hi) = (lo - pad, hi + pad);
        }
        Self { log, lo, hi }
    }

    fn frac(&self, v: f64) -> Option<f64> {
        let v = if self.log {
            if v <= 0.0 {
                return None;
            }
            v.log10()
        } else {
            v
        };
        v.is_finite().then(|| (v - self.lo) / (self.hi - self.lo))
    }

    /// Tick positions (in data units) and labels.
    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let step = ((self.hi - self.lo) / 8.0).ceil().max(1.0) as i64;
            (self.lo as i64..=self.hi as i64)
                .step_by(step as usize)
                .map(|e| (10f64.powi(e as i32), format!("1e{e}")))
                .collect()
        } else {
            let raw = (self.hi - self.lo) / 5.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0]
                .iter()
                .map(|m| m * mag)
                .find(|s| *s >= raw)
                .unwrap_or(10.0 * mag);
            let decimals = (-step.log10().floor()).max(0.0) as usize;
            let first = (self.lo / step).ceil() as i64;
            let last = (self.hi / step).floor() as i64;
            (first..=last)
                .map(|k| {
                    let v = k as f64 * step;
                    (v, format!("{v:.decimals$}"))
                })
                .collect()
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            log_x: false,
            log_y: false,
            series: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        let xs = Axis::fit(
            self.series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.0)),
            self.log_x,
        );
        let ys = Axis::fit(
            self.series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.1)),
            self.log_y,
        );
        let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
        let px = |f: f64| LEFT + f * pw;
        let py = |f: f64| TOP + (1.0 - f) * ph;
        let scale = |log: bool| if log { "log" } else { "linear" };

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text class="title" x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );

        let _ = writeln!(
            s,
            r#"<g class="x-axis" data-scale="{}">"#,
            scale(self.log_x)
        );
        for (v, label) in xs.ticks() {
            if let Some(f) = xs.frac(v) {
                let x = px(f);
                let _ = writeln!(
                    s,
                    r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{}" stroke="#ddd"/><text x="{x:.2}" y="{}" text-anchor="middle">{label}</text>"##,
                    TOP + ph,
                    TOP + ph + 16.0
                );
            }
        }
        let _ = writeln!(
            s,
            r#"<text class="label" x="{}" y="{}" text-anchor="middle">{}</text></g>"#,
            px(0.5),
            HEIGHT - 12.0,
            escape(&self.x_label)
        );

        let _ = writeln!(
            s,
            r#"<g class="y-axis" data-scale="{}">"#,
            scale(self.log_y)
        );
        for (v, label) in ys.ticks() {
            if let Some(f) = ys.frac(v) {
                let y = py(f);
                let _ = writeln!(
                    s,
                    r##"<line x1="{LEFT}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">{label}</text>"##,
                    LEFT + pw,
                    LEFT - 6.0,
                    y + 4.0
                );
            }
        }
        let _ = writeln!(
            s,
            r#"<text class="label" x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text></g>"#,
            py(0.5),
            py(0.5),
            escape(&self.y_label)
        );

        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pts: Vec<(f64, f64)> = series
                .points
                .iter()
                .filter_map(|&(x, y)| Some((px(xs.frac(x)?), py(ys.frac(y)?))))
                .collect();
            let _ = writeln!(
                s,
                r#"<g class="series" data-label="{}">"#,
                escape(&series.label)
            );
            if matches!(series.style, Style::Line | Style::LineMarkers) && pts.len() > 1 {
                let mut d = String::new();
                for (k, (x, y)) in pts.iter().enumerate() {
                    let _ = write!(d, "{}{x:.2},{y:.2} ", if k == 0 { "M" } else { "L" });
                }
                let _ = writeln!(
                    s,
                    r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.2"/>"#,
                    d.trim_end()
                );
            }
            if matches!(series.style, Style::Markers | Style::LineMarkers) {
                let r = if series.style == Style::Markers {
                    1.2
                } else {
                    3.0
                };
                for (x, y) in &pts {
                    let _ = writeln!(
                        s,
                        r#"<circle cx="{x:.2}" cy="{y:.2}" r="{r}" fill="{color}"/>"#
                    );
                }
            }
            let ly = TOP + 16.0 + 16.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<text class="legend" x="{}" y="{ly}" fill="{color}">{}</text></g>"#,
                LEFT + 10.0,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|source| LabError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
        std::fs::write(path, self.render()).map_err(|source| LabError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Log–log error plot of one or more studies; each legend entry carries the
/// fitted slope.
pub fn convergence_plot(title: &str, tables: &[&ConvergenceTable]) -> Plot {
    let mut plot = Plot::new(title, "step size h", "error");
    plot.log_x = true;
    plot.log_y = true;
    for t in tables {
        plot.series.push(Series {
            label: format!("{} (slope {:.2})", t.label, t.fitted_slope),
            points: t.rows.iter().map(|r| (r.h, r.error(t.norm))).collect(),
            style: Style::LineMarkers,
        });
    }
    plot
}

/// Pair of coordinates shown in a phase portrait (first components for
/// `n > 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    XU,
    XP,
}

impl Projection {
    pub fn axes(self) -> (&'static str, &'static str) {
        match self {
            Projection::XU => ("x", "u"),
            Projection::XP => ("x", "p"),
        }
    }
}

/// Projected states of `rec` from time `t0 + transient` on.
pub fn phase_points(rec: &RunRecord, proj: Projection, transient: f64) -> Vec<(f64, f64)> {
    let start = rec.times[0] + transient;
    rec.times
        .iter()
        .zip(&rec.states)
        .filter(|(t, _)| **t >= start)
        .map(|(_, z)| match proj {
            Projection::XU => (z.x[0], z.u),
            Projection::XP => (z.x[0], z.p[0]),
        })
        .collect()
}

/// Phase portrait of several runs with the first `transient` time units of
/// each dropped.
pub fn phase_plot(
    title: &str,
    runs: &[(&str, &RunRecord)],
    proj: Projection,
    transient: f64,
) -> Plot {
    let (xl, yl) = proj.axes();
    let mut plot = Plot::new(title, xl, yl);
    for (label, rec) in runs {
        plot.series.push(Series {
            label: label.to_string(),
            points: phase_points(rec, proj, transient),
            style: Style::Line,
        });
    }
    plot
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convergence::{ConvergenceRow, ErrorNorm};
    use jetsplit::JetPoint;

    #[test]
    fn phase_points_skip_the_transient() {
        let rec = RunRecord {
            label: "r".into(),
            times: vec![0.0, 1.0, 2.0, 3.0],
            states: (0..4)
                .map(|k| JetPoint::scalar(k as f64, -(k as f64), 2.0 * k as f64))
                .collect(),
            h_values: vec![0.0; 4],
            sigma_cum: vec![0.0; 4],
            failure: None,
        };
        assert_eq!(
            phase_points(&rec, Projection::XU, 1.0),
            vec![(1.0, -1.0), (2.0, -2.0), (3.0, -3.0)]
        );
        assert_eq!(phase_points(&rec, Projection::XP, 2.5), vec![(3.0, 6.0)]);
        let svg = phase_plot("p", &[("a", &rec)], Projection::XP, 0.0).render();
        assert!(svg.contains(r#"class="x-axis" data-scale="linear""#));
    }

    #[test]
    fn convergence_plot_is_log_log_with_slopes() {
        let table = ConvergenceTable {
            label: "strang".into(),
            norm: ErrorNorm::Endpoint,
            rows: [0.1, 0.05, 0.025]
                .iter()
                .map(|&h| ConvergenceRow {
                    h,
                    steps: 1,
                    endpoint_error: h * h,
                    sup_error: h * h,
                })
                .collect(),
            fitted_slope: 2.0,
            fit_r2: 1.0,
        };
        let svg = convergence_plot("DHO", &[&table]).render();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(r#"class="x-axis" data-scale="log""#));
        assert!(svg.contains(r#"class="y-axis" data-scale="log""#));
        assert!(svg.contains("strang (slope 2.00)"));
        assert!(svg.contains(">1e-2<"));
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn linear_ticks_are_round() {
        let ax = Axis::fit([0.0, 9.7].into_iter(), false);
        let labels: Vec<String> = ax.ticks().into_iter().map(|t| t.1).collect();
        assert_eq!(labels, ["0", "5", "10"]);
        let ax = Axis::fit([0.0, 0.9].into_iter(), false);
        let labels: Vec<String> = ax.ticks().into_iter().map(|t| t.1).collect();
        assert_eq!(labels, ["0.0", "0.2", "0.4", "0.6", "0.8"]);
    }
}
