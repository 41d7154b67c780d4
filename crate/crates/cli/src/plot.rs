//! Line charts rendered from result CSV files.

use std::fmt::Write as _;

use serde::Deserialize;

use crate::error::CliResult;

#[derive(Debug, Deserialize)]
struct CsvRow {
    variant: String,
    signal_cycles: Option<u32>,
    noise_sigma: Option<f64>,
    sample_size: usize,
    mean_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

/// One chart per (signal, noise) panel, keyed by a file stem: `bound` for tables without
/// signals, `mse_s<cycles>_noise<sigma>` otherwise.
pub fn charts_from_csv(csv_text: &str, y_label: &str, log_y: bool) -> CliResult<Vec<(String, Chart)>> {
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let mut charts: Vec<(String, Chart)> = Vec::new();
    for row in reader.deserialize::<CsvRow>() {
        let row = row?;
        let (stem, title) = match (row.signal_cycles, row.noise_sigma) {
            (Some(c), Some(s)) => {
                (format!("mse_s{c}_noise{s}"), format!("signal {c} cycles, noise sigma {s}"))
            }
            _ => ("bound".to_owned(), "smallest singular value".to_owned()),
        };
        let idx = match charts.iter().position(|(k, _)| *k == stem) {
            Some(i) => i,
            None => {
                charts.push((
                    stem,
                    Chart {
                        title,
                        x_label: "|S|".into(),
                        y_label: y_label.into(),
                        log_y,
                        series: Vec::new(),
                    },
                ));
                charts.len() - 1
            }
        };
        let chart = &mut charts[idx].1;
        let series = match chart.series.iter().position(|s| s.label == row.variant) {
            Some(i) => &mut chart.series[i],
            None => {
                chart.series.push(Series { label: row.variant.clone(), points: Vec::new() });
                chart.series.last_mut().expect("just pushed")
            }
        };
        series.points.push((row.sample_size as f64, row.mean_value));
    }
    Ok(charts)
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 130.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Round step of roughly `span / 5`.
fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let unit = raw / mag;
    let nice = if unit < 1.5 {
        1.0
    } else if unit < 3.0 {
        2.0
    } else if unit < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn tick_label(t: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    format!("{t:.decimals$}")
}

fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

/// Data range padded so flat or single-point series still get an axis.
fn range(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return None;
    }
    if hi > lo {
        Some((lo, hi))
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        Some((lo - pad, hi + pad))
    }
}

pub fn render(chart: &Chart) -> String {
    let usable = |y: f64| y.is_finite() && (!chart.log_y || y > 0.0);
    let points = || chart.series.iter().flat_map(|s| s.points.iter()).filter(|p| usable(p.1));
    let tx = |y: f64| if chart.log_y { y.log10() } else { y };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        escape(&chart.title)
    );

    let (Some((x0, x1)), Some((y0, y1))) = (range(points().map(|p| p.0)), range(points().map(|p| tx(p.1))))
    else {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">no finite values</text>"#,
            WIDTH / 2.0,
            HEIGHT / 2.0
        );
        svg.push_str("</svg>\n");
        return svg;
    };
    let (y0, y1) = if chart.log_y { (y0.floor(), y1.ceil()) } else { (y0, y1) };
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let _ = writeln!(
        svg,
        r##"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>"##
    );
    let x_step = nice_step(x1 - x0);
    for t in linear_ticks(x0, x1) {
        let x = px(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="#444"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"##,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0,
            tick_label(t, x_step)
        );
    }
    let y_ticks: Vec<f64> =
        if chart.log_y { (y0 as i64..=y1 as i64).map(|e| e as f64).collect() } else { linear_ticks(y0, y1) };
    for t in y_ticks {
        let y = py(t);
        let label = if chart.log_y { format!("1e{t}") } else { tick_label(t, nice_step(y1 - y0)) };
        let _ = writeln!(
            svg,
            r##"<line x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="#444"/><line x1="{LEFT}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#eee"/><text x="{}" y="{:.2}" text-anchor="end">{label}</text>"##,
            LEFT - 5.0,
            LEFT + pw,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0,
        escape(&chart.x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
        TOP + ph / 2.0,
        escape(&chart.y_label)
    );

    for (i, s) in chart.series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = s
            .points
            .iter()
            .filter(|p| usable(p.1))
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(tx(y))))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            coords.join(" ")
        );
        let ly = TOP + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
