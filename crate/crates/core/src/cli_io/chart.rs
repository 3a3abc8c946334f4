//! Two-panel SVG line chart: success rate and mean attempts against N on a
//! log-2 axis. One polyline per `(policy, source)`; simulated series are solid
//! with markers, analytic series dashed.

use std::fmt::Write as _;
use std::path::Path;

use crate::engine::GENERATOR;
use crate::error::{Error, Result};
use crate::model::PolicyKind;
use crate::stats::{AnalyticRow, PointSummary};

const WIDTH: f64 = 760.0;
const PANEL_HEIGHT: f64 = 380.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

/// One drawn series.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub policy: PolicyKind,
    pub simulated: bool,
    /// `(N, value)` sorted by N.
    pub points: Vec<(u32, f64)>,
}

impl Series {
    pub fn label(&self) -> String {
        let source = if self.simulated {
            "simulated"
        } else {
            "analytic"
        };
        let policy = match self.policy {
            PolicyKind::NaiveSequential => "Naive sequential",
            PolicyKind::OrchestratedParallel => "Orchestrated",
        };
        format!("{policy} ({source})")
    }

    fn colour(&self) -> &'static str {
        match self.policy {
            PolicyKind::NaiveSequential => "#d62728",
            PolicyKind::OrchestratedParallel => "#1f77b4",
        }
    }
}

/// Splits rows into `(success, attempts)` series for the two panels.
pub fn collect_series(
    summaries: &[PointSummary],
    analytic: &[AnalyticRow],
) -> (Vec<Series>, Vec<Series>) {
    let mut success = Vec::new();
    let mut attempts = Vec::new();
    for policy in PolicyKind::ALL {
        for simulated in [true, false] {
            let mut rows: Vec<(u32, f64, f64)> = if simulated {
                summaries
                    .iter()
                    .filter(|s| s.policy == policy)
                    .map(|s| (s.n, s.success_rate, s.mean_attempts))
                    .collect()
            } else {
                analytic
                    .iter()
                    .filter(|a| a.policy == policy)
                    .map(|a| (a.n, a.success_rate, a.mean_attempts))
                    .collect()
            };
            if rows.is_empty() {
                continue;
            }
            rows.sort_by_key(|r| r.0);
            success.push(Series {
                policy,
                simulated,
                points: rows.iter().map(|r| (r.0, r.1)).collect(),
            });
            attempts.push(Series {
                policy,
                simulated,
                points: rows.iter().map(|r| (r.0, r.2)).collect(),
            });
        }
    }
    (success, attempts)
}

/// Round `v` up to a "nice" axis maximum (1, 2 or 5 times a power of ten).
fn nice_ceiling(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    let mag = 10f64.powf(v.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&c| c >= v)
        .unwrap_or(10.0 * mag)
}

struct Panel<'a> {
    title: &'a str,
    y_label: &'a str,
    top: f64,
    y_max: f64,
    x_min: f64,
    x_max: f64,
}

impl Panel<'_> {
    fn plot_width(&self) -> f64 {
        WIDTH - LEFT - RIGHT
    }

    fn plot_height(&self) -> f64 {
        PANEL_HEIGHT - TOP - BOTTOM
    }

    fn x(&self, n: u32) -> f64 {
        let t = (f64::from(n).log2() - self.x_min) / (self.x_max - self.x_min);
        LEFT + t * self.plot_width()
    }

    fn y(&self, v: f64) -> f64 {
        self.top + TOP + (1.0 - v / self.y_max) * self.plot_height()
    }

    fn draw(&self, out: &mut String, series: &[Series]) {
        let (x0, x1) = (LEFT, LEFT + self.plot_width());
        let (y0, y1) = (self.top + TOP, self.top + TOP + self.plot_height());
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="15" text-anchor="middle" font-weight="bold">{}</text>"#,
            (x0 + x1) / 2.0,
            self.top + 24.0,
            self.title
        );
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.1}" y="{y0:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#333"/>"##,
            x1 - x0,
            y1 - y0
        );

        // Horizontal grid and y ticks.
        for i in 0..=5 {
            let v = self.y_max * f64::from(i) / 5.0;
            let y = self.y(v);
            let _ = writeln!(
                out,
                r##"<line x1="{x0:.1}" y1="{y:.1}" x2="{x1:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{}</text>"##,
                x0 - 6.0,
                y + 4.0,
                format_tick(v)
            );
        }
        // Power-of-two x ticks.
        let first = self.x_min.ceil() as i32;
        let last = self.x_max.floor() as i32;
        for e in first..=last {
            let n = 2f64.powi(e);
            let x =
                LEFT + (f64::from(e) - self.x_min) / (self.x_max - self.x_min) * self.plot_width();
            let _ = writeln!(
                out,
                r##"<line x1="{x:.1}" y1="{y0:.1}" x2="{x:.1}" y2="{y1:.1}" stroke="#eee"/><text x="{x:.1}" y="{:.1}" font-size="11" text-anchor="middle">{n}</text>"##,
                y1 + 16.0
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">Number of QPUs (N, log2 scale)</text>"#,
            (x0 + x1) / 2.0,
            y1 + 38.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">{}</text>"#,
            LEFT - 50.0,
            (y0 + y1) / 2.0,
            LEFT - 50.0,
            (y0 + y1) / 2.0,
            self.y_label
        );

        for s in series {
            let coords: Vec<String> = s
                .points
                .iter()
                .map(|&(n, v)| format!("{:.2},{:.2}", self.x(n), self.y(v)))
                .collect();
            let dash = if s.simulated {
                ""
            } else {
                r#" stroke-dasharray="6 4""#
            };
            if coords.len() > 1 {
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{}" stroke-width="2"{dash} points="{}"/>"#,
                    s.colour(),
                    coords.join(" ")
                );
            }
            if s.simulated || coords.len() == 1 {
                for &(n, v) in &s.points {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{}"><title>N={n}: {v:.4}</title></circle>"#,
                        self.x(n),
                        self.y(v),
                        s.colour()
                    );
                }
            }
        }

        // Legend.
        for (i, s) in series.iter().enumerate() {
            let ly = y0 + 14.0 + 20.0 * i as f64;
            let lx = x1 + 14.0;
            let dash = if s.simulated {
                ""
            } else {
                r#" stroke-dasharray="6 4""#
            };
            let _ = writeln!(
                out,
                r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}" stroke-width="2"{dash}/><text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
                lx + 24.0,
                s.colour(),
                lx + 30.0,
                ly + 4.0,
                s.label()
            );
        }
    }
}

fn format_tick(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').to_string()
    }
}

/// Renders the chart as an SVG document.
pub fn render_chart(summaries: &[PointSummary], analytic: &[AnalyticRow]) -> Result<String> {
    if summaries.is_empty() && analytic.is_empty() {
        return Err(Error::NothingToWrite);
    }
    let (success, attempts) = collect_series(summaries, analytic);
    let ns = summaries
        .iter()
        .map(|s| s.n)
        .chain(analytic.iter().map(|a| a.n));
    let (lo, hi) = ns.fold((u32::MAX, 0), |(lo, hi), n| (lo.min(n), hi.max(n)));
    let (mut x_min, mut x_max) = (f64::from(lo).log2(), f64::from(hi).log2());
    if x_max - x_min < 1e-9 {
        x_min -= 1.0;
        x_max += 1.0;
    }
    let max_attempts = attempts
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .fold(0.0, f64::max);

    let panels = [
        Panel {
            title: "(a) Teleportation success rate vs. number of QPUs",
            y_label: "Teleportation success rate",
            top: 0.0,
            y_max: 1.0,
            x_min,
            x_max,
        },
        Panel {
            title: "(b) Average entanglement attempts per teleportation",
            y_label: "Attempts per teleportation",
            top: PANEL_HEIGHT,
            y_max: nice_ceiling(max_attempts * 1.05),
            x_min,
            x_max,
        },
    ];

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{}" viewBox="0 0 {WIDTH} {}" font-family="sans-serif">"#,
        2.0 * PANEL_HEIGHT,
        2.0 * PANEL_HEIGHT
    );
    let _ = writeln!(
        out,
        "<title>Teleportation success and cost versus network size</title>"
    );
    let _ = writeln!(out, "<desc>random stream: {GENERATOR}</desc>");
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    panels[0].draw(&mut out, &success);
    panels[1].draw(&mut out, &attempts);
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_chart(summaries: &[PointSummary], analytic: &[AnalyticRow], path: &Path) -> Result<()> {
    let svg = render_chart(summaries, analytic)?;
    std::fs::write(path, svg).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
