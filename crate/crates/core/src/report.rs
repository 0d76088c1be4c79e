//! Sweep evaluation and report emission.
//!
//! A sweep walks one variable (vulnerability, cost ratio, or hardening
//! level), evaluates the requested blocks at every grid point in parallel,
//! and returns a record table plus plottable series and vertical markers.
//! Emission is deterministic: the same config yields byte-identical CSV and
//! SVG output, row order included.
//!
//! Rows that fail to solve record the error in the last column and leave
//! their cells empty instead of aborting the sweep.

use std::path::Path;

use rayon::prelude::*;

use crate::baseline::solve_gordon_loeb;
use crate::config::{Config, SweepVariable};
use crate::defender::{DefenderParams, Scenario};
use crate::error::{Error, Result};
use crate::fixed_point::solve_fpe;

/// One table cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

/// Rectangular sweep output.
#[derive(Debug, Clone)]
pub struct RecordTable {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// Named curve extracted from the table; NaN points break the line.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: &'static str,
    pub points: Vec<(f64, f64)>,
}

/// Vertical reference line on the sweep axis.
#[derive(Debug, Clone)]
pub struct Marker {
    pub name: &'static str,
    pub x: f64,
    pub in_range: bool,
}

/// Everything a sweep produces.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub title: Option<String>,
    pub x_label: &'static str,
    pub table: RecordTable,
    pub series: Vec<Series>,
    pub markers: Vec<Marker>,
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn cell_num(cell: &Cell) -> f64 {
    match cell {
        Cell::Num(x) => *x,
        _ => f64::NAN,
    }
}

fn column_series(table: &RecordTable, y: usize, name: &'static str) -> Series {
    let points =
        table.rows.iter().map(|row| (cell_num(&row[0]), cell_num(&row[y]))).collect();
    Series { name, points }
}

fn error_row(width: usize, x: f64, err: &Error) -> Vec<Cell> {
    let mut row = vec![Cell::Num(x)];
    row.resize(width - 1, Cell::Empty);
    row.push(Cell::Text(err.to_string()));
    row
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config { line: 0, msg: msg.into() }
}

/// Evaluate the sweep a config describes.
pub fn run_sweep(config: &Config) -> Result<SweepResult> {
    let variable = config
        .variable
        .ok_or_else(|| config_err("missing key `variable`"))?;
    let (lo, hi, n) = config.range.ok_or_else(|| config_err("missing key `range`"))?;
    match variable {
        SweepVariable::Vulnerability => {
            if lo <= 0.0 || hi >= 1.0 {
                return Err(config_err("range: v sweeps must stay inside (0, 1)"));
            }
            vulnerability_sweep(config, linspace(lo, hi, n))
        }
        SweepVariable::Hardening => {
            if lo <= 0.0 || hi >= 1.0 {
                return Err(config_err("range: s sweeps must stay inside (0, 1)"));
            }
            hardening_sweep(config, linspace(lo, hi, n))
        }
        SweepVariable::CostRatio => {
            if lo <= 0.0 {
                return Err(config_err("range: R sweeps need positive ratios"));
            }
            ratio_sweep(config, linspace(lo, hi, n))
        }
    }
}

fn vulnerability_sweep(config: &Config, grid: Vec<f64>) -> Result<SweepResult> {
    let scenario = config.build_scenario()?;
    let out = config.outputs;

    let mut columns = vec!["v"];
    if out.policy {
        columns.extend(["interval", "decision", "s_star", "z_star", "cost", "s1", "s2"]);
    }
    if out.attacker {
        columns.extend(["attack_effort", "breach_chance"]);
    }
    if out.baseline {
        columns.extend(["z_gl", "gl_cost", "investment_gap"]);
    }
    columns.push("error");
    let width = columns.len();

    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&v| {
            let sol = match scenario.solve_defender(v) {
                Ok(sol) => sol,
                Err(e) => return error_row(width, v, &e),
            };
            let mut row = vec![Cell::Num(v)];
            if out.policy {
                row.push(Cell::Text(sol.interval.to_string()));
                row.push(Cell::Text(sol.decision.to_string()));
                row.push(Cell::Num(sol.s_star));
                row.push(Cell::Num(sol.z_star));
                row.push(Cell::Num(sol.expected_cost));
                row.push(sol.s1.map_or(Cell::Empty, Cell::Num));
                row.push(sol.s2.map_or(Cell::Empty, Cell::Num));
            }
            if out.attacker {
                match scenario.attacker().best_response(sol.s_star) {
                    Ok(resp) => {
                        row.push(Cell::Num(resp.effort));
                        row.push(Cell::Num(resp.breach_chance));
                    }
                    Err(e) => return error_row(width, v, &e),
                }
            }
            if out.baseline {
                match solve_gordon_loeb(&scenario, v) {
                    Ok(gl) => {
                        row.push(Cell::Num(gl.z_gl));
                        row.push(Cell::Num(gl.total_cost));
                        row.push(Cell::Num(sol.z_star - gl.z_gl));
                    }
                    Err(e) => return error_row(width, v, &e),
                }
            }
            row.push(Cell::Empty);
            row
        })
        .collect();

    let table = RecordTable { columns, rows };
    let mut series = Vec::new();
    if out.policy {
        series.push(column_series(&table, col(&table, "z_star"), "z_star"));
    }
    if out.baseline {
        series.push(column_series(&table, col(&table, "z_gl"), "z_gl"));
    }

    let lo = grid[0];
    let hi = *grid.last().unwrap();
    let mut markers = Vec::new();
    let s_p = scenario.attacker().deterrence_threshold();
    markers.push(marker("deterrence_threshold", s_p, lo, hi));
    if out.fixed_points {
        let report = solve_fpe(&scenario)?;
        markers.push(marker("v_hat", report.v_hat, lo, hi));
        match report.roots.as_slice() {
            [] => {}
            [x] if report.tangent => markers.push(marker("tangent_point", *x, lo, hi)),
            [x] => markers.push(marker("fixed_point", *x, lo, hi)),
            [a, b, ..] => {
                markers.push(marker("v_low", *a, lo, hi));
                markers.push(marker("v_high", *b, lo, hi));
            }
        }
    }

    Ok(SweepResult {
        title: config.title.clone(),
        x_label: "v",
        table,
        series,
        markers,
    })
}

fn hardening_sweep(config: &Config, grid: Vec<f64>) -> Result<SweepResult> {
    let scenario = config.build_scenario()?;
    let v = config
        .fixed_v
        .ok_or_else(|| config_err("sweeps over s require a fixed `v`"))?;

    let columns = vec!["s", "attack_effort", "breach_chance", "net_gain", "z", "error"];
    let width = columns.len();

    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&s| {
            let resp = match scenario.attacker().best_response(s) {
                Ok(resp) => resp,
                Err(e) => return error_row(width, s, &e),
            };
            let mut row = vec![
                Cell::Num(s),
                Cell::Num(resp.effort),
                Cell::Num(resp.breach_chance),
                Cell::Num(resp.net_gain),
            ];
            if s <= v {
                match scenario.model().effort(s, v) {
                    Ok(z) => row.push(Cell::Num(z)),
                    Err(e) => return error_row(width, s, &e),
                }
            } else {
                row.push(Cell::Empty);
            }
            row.push(Cell::Empty);
            row
        })
        .collect();

    let table = RecordTable { columns, rows };
    let series = vec![
        column_series(&table, 1, "attack_effort"),
        column_series(&table, 2, "breach_chance"),
    ];

    let lo = grid[0];
    let hi = *grid.last().unwrap();
    let attacker = scenario.attacker();
    let markers = vec![
        marker("deterrence_threshold", attacker.deterrence_threshold(), lo, hi),
        marker("peak_effort", attacker.peak_effort().0, lo, hi),
        marker("vulnerability", v, lo, hi),
    ];

    Ok(SweepResult {
        title: config.title.clone(),
        x_label: "s",
        table,
        series,
        markers,
    })
}

fn ratio_sweep(config: &Config, grid: Vec<f64>) -> Result<SweepResult> {
    let base = config.build_scenario()?;
    let gain_ratio = config.gain / config.attack_cost;
    let out = config.outputs;

    let mut columns = vec!["R", "count", "v_hat", "v_low", "v_high"];
    if out.policy && config.fixed_v.is_some() {
        columns.extend(["decision", "s_star", "z_star", "cost"]);
    }
    columns.push("error");
    let width = columns.len();
    let fixed_v = config.fixed_v;

    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&r| {
            let defender = match DefenderParams::new(
                r * config.defense_cost * gain_ratio,
                config.defense_cost,
            ) {
                Ok(d) => d,
                Err(e) => return error_row(width, r, &e),
            };
            let scenario = match config.build_model() {
                Ok(model) => Scenario::new(
                    model,
                    *base.attacker(),
                    defender,
                ),
                Err(e) => return error_row(width, r, &e),
            };
            let report = match solve_fpe(&scenario) {
                Ok(rep) => rep,
                Err(e) => return error_row(width, r, &e),
            };
            let count = if report.tangent {
                "tangent"
            } else {
                match report.roots.len() {
                    0 => "none",
                    1 => "one",
                    _ => "two",
                }
            };
            let mut row = vec![
                Cell::Num(r),
                Cell::Text(count.to_string()),
                Cell::Num(report.v_hat),
            ];
            match report.roots.as_slice() {
                [] => {
                    row.push(Cell::Empty);
                    row.push(Cell::Empty);
                }
                [x] => {
                    row.push(Cell::Num(*x));
                    row.push(Cell::Empty);
                }
                [a, b, ..] => {
                    row.push(Cell::Num(*a));
                    row.push(Cell::Num(*b));
                }
            }
            if out.policy {
                if let Some(v) = fixed_v {
                    match scenario.solve_defender(v) {
                        Ok(sol) => {
                            row.push(Cell::Text(sol.decision.to_string()));
                            row.push(Cell::Num(sol.s_star));
                            row.push(Cell::Num(sol.z_star));
                            row.push(Cell::Num(sol.expected_cost));
                        }
                        Err(e) => return error_row(width, r, &e),
                    }
                }
            }
            row.push(Cell::Empty);
            row
        })
        .collect();

    let table = RecordTable { columns, rows };
    let series = vec![
        column_series(&table, 2, "v_hat"),
        column_series(&table, 3, "v_low"),
        column_series(&table, 4, "v_high"),
    ];

    let lo = grid[0];
    let hi = *grid.last().unwrap();
    let crit = crate::fixed_point::critical_ratio(&base)?;
    let markers = vec![marker("critical_ratio", crit.ratio, lo, hi)];

    Ok(SweepResult {
        title: config.title.clone(),
        x_label: "R",
        table,
        series,
        markers,
    })
}

fn marker(name: &'static str, x: f64, lo: f64, hi: f64) -> Marker {
    Marker { name, x, in_range: x >= lo && x <= hi }
}

fn col(table: &RecordTable, name: &str) -> usize {
    table
        .columns
        .iter()
        .position(|&c| c == name)
        .expect("column names are assembled alongside the rows")
}

/// Render the record table as CSV with 12 significant digits.
pub fn emit_csv(result: &SweepResult) -> String {
    let mut text = result.table.columns.join(",");
    text.push('\n');
    for row in &result.table.rows {
        let mut first = true;
        for cell in row {
            if !first {
                text.push(',');
            }
            first = false;
            match cell {
                Cell::Num(x) => text.push_str(&format!("{x:.11e}")),
                Cell::Text(s) => text.push_str(&s.replace(',', ";")),
                Cell::Empty => {}
            }
        }
        text.push('\n');
    }
    text
}

pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, emit_csv(result)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

const SVG_W: f64 = 960.0;
const SVG_H: f64 = 540.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 42.0;
const MARGIN_B: f64 = 52.0;
const PALETTE: [&str; 6] =
    ["#1f6feb", "#d1242f", "#2da44e", "#9a6700", "#8250df", "#57606a"];

fn fmt_tick(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs();
    if !(1e-3..1e5).contains(&mag) {
        return format!("{x:.2e}");
    }
    let mut s = format!("{x:.4}");
    while s.contains('.') && (s.ends_with('0') || s.ends_with('.')) {
        s.pop();
    }
    s
}

/// Render the sweep as a standalone SVG line chart: every series as a
/// polyline (split at gaps), axis ticks, a legend, and dashed vertical
/// markers for the in-range reference points.
pub fn emit_svg(result: &SweepResult) -> String {
    let xs: Vec<f64> = result
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .filter(|x| x.is_finite())
        .collect();
    let ys: Vec<f64> = result
        .series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .filter(|y| y.is_finite())
        .collect();
    let (x_lo, x_hi) = span(&xs);
    let (y_lo, y_hi) = pad_span(span(&ys));

    let round = |p: f64| (p * 100.0).round() / 100.0;
    let px = |x: f64| round(MARGIN_L + (x - x_lo) / (x_hi - x_lo) * (SVG_W - MARGIN_L - MARGIN_R));
    let py = |y: f64| {
        round(SVG_H - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * (SVG_H - MARGIN_T - MARGIN_B))
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SVG_W} {SVG_H}\" \
         font-family=\"system-ui, sans-serif\">\n\
         <rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"#ffffff\"/>\n"
    ));
    if let Some(title) = &result.title {
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
            SVG_W / 2.0,
            escape(title)
        ));
    }

    // Axes and ticks.
    svg.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{}\" height=\"{}\" \
         fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n",
        SVG_W - MARGIN_L - MARGIN_R,
        SVG_H - MARGIN_T - MARGIN_B
    ));
    for i in 0..=5 {
        let t = i as f64 / 5.0;
        let x = x_lo + t * (x_hi - x_lo);
        let y = y_lo + t * (y_hi - y_lo);
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#888\"/>\n\
             <text x=\"{0}\" y=\"{3}\" font-size=\"11\" text-anchor=\"middle\">{4}</text>\n",
            px(x),
            SVG_H - MARGIN_B,
            SVG_H - MARGIN_B + 5.0,
            SVG_H - MARGIN_B + 18.0,
            fmt_tick(x)
        ));
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#888\"/>\n\
             <text x=\"{3}\" y=\"{4}\" font-size=\"11\" text-anchor=\"end\">{5}</text>\n",
            MARGIN_L - 5.0,
            py(y),
            MARGIN_L,
            MARGIN_L - 8.0,
            py(y) + 4.0,
            fmt_tick(y)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + (SVG_W - MARGIN_L - MARGIN_R) / 2.0,
        SVG_H - 10.0,
        result.x_label
    ));

    // Markers first so curves draw over them.
    for m in result.markers.iter().filter(|m| m.in_range) {
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#57606a\" \
             stroke-dasharray=\"4 3\"/>\n\
             <text x=\"{3}\" y=\"{4}\" font-size=\"10\" fill=\"#57606a\" \
             transform=\"rotate(-90 {3} {4})\">{5}</text>\n",
            px(m.x),
            MARGIN_T,
            SVG_H - MARGIN_B,
            px(m.x) - 4.0,
            SVG_H - MARGIN_B - 6.0,
            m.name
        ));
    }

    for (i, series) in result.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut segment = String::new();
        let mut count = 0usize;
        let flush = |segment: &mut String, count: &mut usize, svg: &mut String| {
            if *count >= 2 {
                svg.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" \
                     stroke-width=\"1.8\"/>\n",
                    segment.trim_end()
                ));
            }
            segment.clear();
            *count = 0;
        };
        for &(x, y) in &series.points {
            if x.is_finite() && y.is_finite() {
                segment.push_str(&format!("{:.2},{:.2} ", px(x), py(y)));
                count += 1;
            } else {
                flush(&mut segment, &mut count, &mut svg);
            }
        }
        flush(&mut segment, &mut count, &mut svg);

        let ly = MARGIN_T + 16.0 + 18.0 * i as f64;
        svg.push_str(&format!(
            "<line x1=\"{0}\" y1=\"{ly}\" x2=\"{1}\" y2=\"{ly}\" stroke=\"{color}\" \
             stroke-width=\"1.8\"/>\n\
             <text x=\"{2}\" y=\"{3}\" font-size=\"12\">{4}</text>\n",
            SVG_W - MARGIN_R - 150.0,
            SVG_W - MARGIN_R - 120.0,
            SVG_W - MARGIN_R - 114.0,
            ly + 4.0,
            series.name
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

pub fn write_svg(result: &SweepResult, path: &Path) -> Result<()> {
    std::fs::write(path, emit_svg(result)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn span(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() && hi.is_finite() && lo < hi {
        (lo, hi)
    } else if lo.is_finite() {
        (lo - 0.5, lo + 0.5)
    } else {
        (0.0, 1.0)
    }
}

fn pad_span((lo, hi): (f64, f64)) -> (f64, f64) {
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
