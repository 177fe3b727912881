//! SVG line plots of sweep columns against `p`.
//!
//! Each plotted point is also emitted as a marker carrying the exact CSV
//! strings of its coordinates (`data-p`, `data-value`), so figures can be
//! checked against the data they were drawn from.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, Result};
use crate::sweep::{format_number, write_atomically, SweepResult, SweepRow, CSV_HEADER};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Figure {
    /// Tighter lower bound `l1`, one curve per noise level.
    Fig1,
    /// Tighter upper bound `u1`, one curve per noise level.
    Fig2,
    /// Gap of the noisy model per noise level, against the noiseless gap.
    Fig3,
    /// Any single column per noise level.
    Custom(String),
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "fig1" => Ok(Figure::Fig1),
            "fig2" => Ok(Figure::Fig2),
            "fig3" => Ok(Figure::Fig3),
            "custom" => Ok(Figure::Custom("l1".into())),
            other => match other.strip_prefix("custom:") {
                Some(col) if CSV_HEADER[3..].contains(&col) => Ok(Figure::Custom(col.to_string())),
                _ => Err(format!("unknown figure {other:?} (fig1, fig2, fig3, custom or custom:<column>)")),
            },
        }
    }
}

impl Figure {
    pub fn name(&self) -> String {
        match self {
            Figure::Fig1 => "fig1".into(),
            Figure::Fig2 => "fig2".into(),
            Figure::Fig3 => "fig3".into(),
            Figure::Custom(c) => format!("custom:{c}"),
        }
    }

    fn column(&self) -> &str {
        match self {
            Figure::Fig1 => "l1",
            Figure::Fig2 => "u1",
            Figure::Fig3 => "gap_new",
            Figure::Custom(c) => c,
        }
    }

    fn y_label(&self) -> String {
        match self {
            Figure::Fig1 => "lower bound L1 (bits/symbol)".into(),
            Figure::Fig2 => "upper bound U1 (bits/symbol)".into(),
            Figure::Fig3 => "gap U1 - L1 (bits/symbol)".into(),
            Figure::Custom(c) => format!("{c} (bits/symbol)"),
        }
    }
}

/// One curve of the figure.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub column: &'static str,
    pub dashed: bool,
    /// `(p, value)` in ascending `p`.
    pub points: Vec<(f64, f64)>,
}

fn static_column(name: &str) -> &'static str {
    CSV_HEADER.iter().find(|&&h| h == name).copied().expect("known column")
}

fn series_key(row: &SweepRow) -> (u64, u64) {
    // NaN sorts after every beta and marks "no beta".
    (row.alpha.to_bits(), row.beta.unwrap_or(f64::NAN).to_bits())
}

fn series_label(alpha: f64, beta: Option<f64>) -> String {
    let base = if alpha == 0.0 {
        "alpha = 0 (noiseless model)".to_string()
    } else {
        format!("alpha = {}", format_number(alpha))
    };
    match beta {
        Some(b) => format!("{base}, beta = {}", format_number(b)),
        None => base,
    }
}

/// Groups the rows into the curves `figure` shows.
pub fn figure_series(result: &SweepResult, figure: &Figure) -> Result<Vec<Series>> {
    if result.rows.is_empty() {
        return Err(CliError::EmptyPlot);
    }
    let column = static_column(figure.column());
    let needed: &[&'static str] = match figure {
        Figure::Fig3 => &["gap_new", "gap_old"],
        _ => std::slice::from_ref(&column),
    };
    for &col in needed {
        if result.rows.iter().any(|r| r.column(col).is_none()) {
            return Err(CliError::IncompatibleFigure {
                figure: figure.name(),
                column: col,
            });
        }
    }

    let mut groups: BTreeMap<(u64, u64), Vec<&SweepRow>> = BTreeMap::new();
    for row in &result.rows {
        groups.entry(series_key(row)).or_default().push(row);
    }
    let mut ordered: Vec<Vec<&SweepRow>> = groups.into_values().collect();
    ordered.sort_by(|a, b| {
        (a[0].alpha, a[0].beta.unwrap_or(-1.0))
            .partial_cmp(&(b[0].alpha, b[0].beta.unwrap_or(-1.0)))
            .expect("grid values are finite")
    });

    let curve = |rows: &[&SweepRow], col: &'static str| -> Vec<(f64, f64)> {
        let mut pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.p, r.column(col).expect("checked"))).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts
    };

    let mut series = Vec::new();
    let mut baselines = Vec::new();
    for rows in &ordered {
        let (alpha, beta) = (rows[0].alpha, rows[0].beta);
        let noiseless = alpha == 0.0;
        if matches!(figure, Figure::Fig3) {
            // The noiseless model's gap is its own column.
            if noiseless {
                continue;
            }
            if baselines.iter().all(|(b, _): &(Option<f64>, Series)| *b != beta) {
                let label = match beta {
                    Some(b) => format!("noiseless model, beta = {}", format_number(b)),
                    None => "noiseless model".to_string(),
                };
                baselines.push((
                    beta,
                    Series {
                        label,
                        column: "gap_old",
                        dashed: true,
                        points: curve(rows, "gap_old"),
                    },
                ));
            }
        }
        series.push(Series {
            label: series_label(alpha, beta),
            column,
            dashed: noiseless,
            points: curve(rows, column),
        });
    }
    series.extend(baselines.into_iter().map(|(_, s)| s));
    if series.is_empty() {
        // fig3 of a noiseless-only sweep: show the noiseless gap alone.
        series.push(Series {
            label: "noiseless model".into(),
            column: "gap_old",
            dashed: true,
            points: curve(&ordered[0], "gap_old"),
        });
    }
    Ok(series)
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if hi - lo < 1e-12 {
        let pad = if lo.abs() > 1e-12 { lo.abs() * 0.1 } else { 0.5 };
        (lo - pad, hi + pad)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(result: &SweepResult, figure: &Figure) -> Result<String> {
    let series = figure_series(result, figure)?;
    let all = || series.iter().flat_map(|s| s.points.iter());
    let (x0, x1) = padded_range(all().map(|p| p.0));
    let (y0, y1) = padded_range(all().map(|p| p.1));
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for k in 0..=5 {
        let t = k as f64 / 5.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let (px, py) = (sx(xv), sy(yv));
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="#000"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{xv:.3}</text>"##,
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 20.0
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="#000"/><text x="{:.2}" y="{:.2}" text-anchor="end">{yv:.4}</text>"##,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">p (state probability)</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text transform="translate(20 {:.2}) rotate(-90)" text-anchor="middle">{}</text>"#,
        TOP + plot_h / 2.0,
        escape(&figure.y_label())
    );

    for (i, s) in series.iter().enumerate() {
        let color = if s.dashed { "#444444" } else { PALETTE[i % PALETTE.len()] };
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let label = escape(&s.label);
        let _ = writeln!(svg, r#"<g class="series" data-label="{label}" data-column="{}">"#, s.column);
        if s.points.len() > 1 {
            let path: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#,
                path.join(" ")
            );
        }
        for &(x, y) in &s.points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}" data-p="{}" data-value="{}"/>"#,
                sx(x),
                sy(y),
                format_number(x),
                format_number(y)
            );
        }
        let _ = writeln!(svg, "</g>");
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.5"{dash}/><text x="{}" y="{}">{label}</text>"#,
            lx + 25.0,
            lx + 30.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn render_plot(result: &SweepResult, figure: &Figure, path: &Path) -> Result<()> {
    let svg = render_svg(result, figure)?;
    write_atomically(path, svg.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Output, SweepConfig};
    use crate::sweep::run_sweep;

    fn bounds_sweep(p: &[f64], alpha: &[f64]) -> SweepResult {
        run_sweep(&SweepConfig {
            p_grid: p.to_vec(),
            alpha_grid: alpha.to_vec(),
            outputs: [Output::Bounds, Output::Gap].into_iter().collect(),
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn fig1_has_baseline_and_four_noisy_curves() {
        let result = bounds_sweep(&[0.0, 0.1, 0.2, 0.3], &[0.0, 0.05, 0.1, 0.15, 0.2]);
        let series = figure_series(&result, &Figure::Fig1).unwrap();
        assert_eq!(series.len(), 5);
        assert_eq!(series.iter().filter(|s| s.dashed).count(), 1);
        assert!(series[0].dashed && series[0].label.contains("noiseless"));
        let svg = render_svg(&result, &Figure::Fig1).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 5);
        assert!(svg.contains("p (state probability)") && svg.contains("lower bound L1"));
    }

    #[test]
    fn fig3_has_gap_curves_and_noiseless_gap() {
        let result = bounds_sweep(&[0.0, 0.25, 0.5], &[0.0, 0.1, 0.2]);
        let series = figure_series(&result, &Figure::Fig3).unwrap();
        let labels: Vec<&str> = series.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, vec!["alpha = 0.1", "alpha = 0.2", "noiseless model"]);
        assert_eq!(series[2].column, "gap_old");
    }

    #[test]
    fn single_point_custom_plot() {
        let result = bounds_sweep(&[0.2], &[0.1]);
        let svg = render_svg(&result, &"custom".parse().unwrap()).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg.matches("<polyline").count(), 0);
    }

    #[test]
    fn missing_column_is_reported() {
        let result = bounds_sweep(&[0.2], &[0.1]);
        let err = render_svg(&result, &"custom:est_rate".parse().unwrap()).unwrap_err();
        assert!(matches!(err, CliError::IncompatibleFigure { column: "est_rate", .. }));
        assert!(matches!(render_svg(&SweepResult::default(), &Figure::Fig1), Err(CliError::EmptyPlot)));
        assert!("fig9".parse::<Figure>().is_err());
        assert!("custom:nope".parse::<Figure>().is_err());
    }
}
