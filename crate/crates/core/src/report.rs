//! Output artifacts: grid CSV, verdict CSV, text summary and SVG heatmap.
//!
//! Floating-point values are written with the shortest representation that
//! parses back to the same `f64`, so output bytes depend only on the inputs.

use std::fmt::Write as _;

use crate::engine::IlluminanceField;
use crate::error::{LightingError, Result};
use crate::photometry::Luminaire;
use crate::radiosity::OracleRun;
use crate::scenario::Scenario;
use crate::validation::{ComparisonReport, Located};

pub const FIELD_HEADER: &str = "i,j,x_m,y_m,direct_lux,diffuse_lux,global_lux";
pub const VERDICT_HEADER: &str =
    "i,j,simulated_lux,measured_lux,li_em_lux,ls_em_lux,li_eg_lux,ls_eg_lux,within_em,within_eg,rel_error_pct,limit_distance_pct";

/// One row of a grid CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRow {
    pub i: usize,
    pub j: usize,
    pub x: f64,
    pub y: f64,
    pub direct: f64,
    pub diffuse: f64,
    pub global: f64,
}

/// A parsed grid CSV: `key=value` metadata plus rows.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldTable {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<FieldRow>,
}

impl FieldTable {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn field_rows(field: &IlluminanceField) -> Vec<FieldRow> {
    field
        .grid
        .points
        .iter()
        .enumerate()
        .map(|(k, p)| FieldRow {
            i: p.i,
            j: p.j,
            x: p.position.x,
            y: p.position.y,
            direct: field.direct[k],
            diffuse: field.diffuse[k],
            global: field.global[k],
        })
        .collect()
}

fn grid_metadata(scenario: &Scenario, field: &IlluminanceField) -> Vec<(String, String)> {
    let grid = &field.grid;
    let mut meta = vec![
        ("scenario".to_string(), scenario.name.clone()),
        ("emission".to_string(), field.model.emission.to_string()),
        ("rho_policy".to_string(), field.model.rho_policy.to_string()),
        ("diffuse".to_string(), field.model.diffuse_mode.to_string()),
        ("rho_moy".to_string(), field.rho_moy.to_string()),
        ("plane_height_m".to_string(), grid.plane_height.to_string()),
        ("row_axis".to_string(), grid.row_axis.as_str().to_string()),
        ("spacing_x_m".to_string(), grid.spacing_x.to_string()),
        ("spacing_y_m".to_string(), grid.spacing_y.to_string()),
    ];
    if let Some(note) = scenario.spacing_note(grid) {
        meta.push(("note".to_string(), note));
    }
    meta
}

fn write_table(metadata: &[(String, String)], rows: &[FieldRow]) -> String {
    let mut out = String::new();
    for (k, v) in metadata {
        let _ = writeln!(out, "# {k}={v}");
    }
    out.push_str(FIELD_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.i, r.j, r.x, r.y, r.direct, r.diffuse, r.global
        );
    }
    out
}

/// Engine field as CSV, tagged `source=engine`.
pub fn field_csv(scenario: &Scenario, field: &IlluminanceField) -> String {
    let mut meta = vec![("source".to_string(), "engine".to_string())];
    meta.extend(grid_metadata(scenario, field));
    write_table(&meta, &field_rows(field))
}

/// Oracle result in the grid CSV layout, tagged `source=oracle`. The
/// diffuse column holds the radiosity interreflection instead of ρ_moy·E_dir.
pub fn oracle_csv(scenario: &Scenario, field: &IlluminanceField, oracle: &OracleRun) -> String {
    let mut meta = vec![("source".to_string(), "oracle".to_string())];
    meta.extend(grid_metadata(scenario, field));
    meta.extend([
        (
            "subdivision".to_string(),
            oracle.mesh.subdivision.to_string(),
        ),
        (
            "iterations".to_string(),
            oracle.solution.iterations.to_string(),
        ),
        ("residual".to_string(), oracle.solution.residual.to_string()),
        (
            "energy_imbalance".to_string(),
            oracle.energy.relative_imbalance().to_string(),
        ),
    ]);
    let rows: Vec<FieldRow> = field_rows(field)
        .into_iter()
        .zip(&oracle.interreflected)
        .map(|(r, inter)| FieldRow {
            diffuse: *inter,
            global: r.direct + inter,
            ..r
        })
        .collect();
    write_table(&meta, &rows)
}

pub fn parse_field_csv(text: &str, source_name: &str) -> Result<FieldTable> {
    let err = |line: usize, message: String| LightingError::Parse {
        source_name: source_name.to_string(),
        line,
        message,
    };
    let mut metadata = Vec::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            if let Some((k, v)) = meta.trim().split_once('=') {
                metadata.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if !seen_header {
            if line != FIELD_HEADER {
                return Err(err(line_no, format!("expected header `{FIELD_HEADER}`")));
            }
            seen_header = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 7 {
            return Err(err(
                line_no,
                format!("expected 7 columns, got {}", cols.len()),
            ));
        }
        let index = |c: &str| c.parse::<usize>().map_err(|e| err(line_no, e.to_string()));
        let value = |c: &str| c.parse::<f64>().map_err(|e| err(line_no, e.to_string()));
        rows.push(FieldRow {
            i: index(cols[0])?,
            j: index(cols[1])?,
            x: value(cols[2])?,
            y: value(cols[3])?,
            direct: value(cols[4])?,
            diffuse: value(cols[5])?,
            global: value(cols[6])?,
        });
    }
    if !seen_header {
        return Err(err(0, "missing header".into()));
    }
    Ok(FieldTable { metadata, rows })
}

pub fn verdict_csv(report: &ComparisonReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# compare={}", report.target);
    out.push_str(VERDICT_HEADER);
    out.push('\n');
    for r in &report.records {
        let l = &r.limits;
        let v = &r.verdict;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.i,
            r.j,
            r.simulated,
            r.measured,
            l.li_em,
            l.ls_em,
            l.li_eg,
            l.ls_eg,
            v.within_em,
            v.within_eg,
            v.rel_error_pct,
            v.limit_distance_pct
        );
    }
    out
}

fn located(l: Option<Located>) -> String {
    match l {
        Some(l) => format!("{:.2} % at ({};{})", l.value_pct, l.at.0, l.at.1),
        None => "none (all points inside E_g band)".to_string(),
    }
}

/// Human-readable summary of a comparison.
pub fn comparison_text(
    scenario: &Scenario,
    field: &IlluminanceField,
    report: &ComparisonReport,
) -> String {
    let mut out = String::new();
    let b = &report.bands;
    let _ = writeln!(out, "Conformance report: {}", scenario.name);
    if !report.provenance.is_empty() {
        let _ = writeln!(out, "reference: {}", report.provenance);
    }
    let _ = writeln!(
        out,
        "model: emission={} rho_policy={} diffuse={} rho_moy={:.4} compare={}",
        field.model.emission,
        field.model.rho_policy,
        field.model.diffuse_mode,
        field.rho_moy,
        report.target
    );
    let _ = writeln!(
        out,
        "grid: {} points, row index along {}, spacing ({:.4}, {:.4}) m",
        field.grid.len(),
        field.grid.row_axis.as_str(),
        field.grid.spacing_x,
        field.grid.spacing_y
    );
    if let Some(note) = scenario.spacing_note(&field.grid) {
        let _ = writeln!(out, "note: {note}");
    }
    let _ = writeln!(
        out,
        "bands: point E_m ±{}%, E_g ±{}%; average E_m ±{}%, E_g ±{}%",
        b.point_measure_pct, b.point_global_pct, b.average_measure_pct, b.average_global_pct
    );
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "points within LI-Em..LS-Em: {} / {}",
        report.n_within_em, report.n_total
    );
    let _ = writeln!(
        out,
        "points within LI-Eg..LS-Eg: {} / {}",
        report.n_within_eg, report.n_total
    );
    let _ = writeln!(out, "reliability: {:.1} %", report.reliability_pct);
    let s = &report.stats;
    let _ = writeln!(
        out,
        "max error vs violated E_g limit: {}",
        located(s.max_error)
    );
    let _ = writeln!(
        out,
        "min error vs violated E_g limit: {}",
        located(s.min_nonzero_error)
    );
    let _ = writeln!(
        out,
        "min distance to nearest E_g limit (all points): {}",
        located(Some(s.min_limit_distance))
    );
    let _ = writeln!(
        out,
        "mean error, out-of-band points: {:.2} %",
        s.mean_error_out_of_band_pct
    );
    let _ = writeln!(
        out,
        "mean error, all points (in-band = 0): {:.2} %",
        s.mean_error_all_pct
    );
    let _ = writeln!(
        out,
        "mean distance to nearest E_g limit, all points: {:.2} %",
        s.mean_limit_distance_pct
    );
    let a = &report.average;
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "average illuminance: simulated {:.1} lx, measured {:.1} lx, E_g band [{:.1}, {:.1}] lx -> {}",
        a.simulated,
        a.measured,
        a.lower,
        a.upper,
        if a.within { "within" } else { "OUTSIDE" }
    );
    out
}

/// Summary of the radiosity cross-check against ρ_moy·E_dir.
pub fn oracle_text(field: &IlluminanceField, oracle: &OracleRun) -> String {
    let n = field.len() as f64;
    let engine_mean = field.diffuse.iter().sum::<f64>() / n;
    let oracle_mean = oracle.interreflected.iter().sum::<f64>() / n;
    let max_rel = field
        .diffuse
        .iter()
        .zip(&oracle.interreflected)
        .filter(|(_, o)| **o > 0.0)
        .map(|(e, o)| ((e - o) / o).abs())
        .fold(0.0, f64::max);
    format!(
        "radiosity oracle: {} patches, {} iterations, residual {:.2e}, energy imbalance {:.2e}\n\
         interreflected mean: oracle {:.2} lx, rho_moy estimate {:.2} lx (ratio {:.3}); max pointwise deviation {:.1} %\n",
        oracle.mesh.len(),
        oracle.solution.iterations,
        oracle.solution.residual,
        oracle.energy.relative_imbalance(),
        oracle_mean,
        engine_mean,
        engine_mean / oracle_mean,
        100.0 * max_rel
    )
}

const RAMP_LOW: (f64, f64, f64) = (30.0, 58.0, 138.0);
const RAMP_HIGH: (f64, f64, f64) = (250.0, 215.0, 40.0);

fn ramp(t: f64) -> (u8, u8, u8) {
    let t = t.clamp(0.0, 1.0);
    let mix = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    (
        mix(RAMP_LOW.0, RAMP_HIGH.0),
        mix(RAMP_LOW.1, RAMP_HIGH.1),
        mix(RAMP_LOW.2, RAMP_HIGH.2),
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Heatmap of per-point values in plan view (y up), one annotated cell per
/// grid point, luminaire nadirs marked with circles.
pub fn heatmap_svg(
    title: &str,
    field: &IlluminanceField,
    values: &[f64],
    luminaires: &[Luminaire],
) -> String {
    const SCALE: f64 = 80.0;
    const MARGIN: f64 = 40.0;
    const TITLE_H: f64 = 30.0;
    const LEGEND_H: f64 = 40.0;

    let grid = &field.grid;
    let (sx, sy) = (grid.spacing_x, grid.spacing_y);
    let x0 = grid
        .points
        .iter()
        .map(|p| p.position.x)
        .fold(f64::INFINITY, f64::min)
        - sx / 2.0;
    let x1 = grid
        .points
        .iter()
        .map(|p| p.position.x)
        .fold(f64::NEG_INFINITY, f64::max)
        + sx / 2.0;
    let y0 = grid
        .points
        .iter()
        .map(|p| p.position.y)
        .fold(f64::INFINITY, f64::min)
        - sy / 2.0;
    let y1 = grid
        .points
        .iter()
        .map(|p| p.position.y)
        .fold(f64::NEG_INFINITY, f64::max)
        + sy / 2.0;
    let width = (x1 - x0) * SCALE + 2.0 * MARGIN;
    let height = (y1 - y0) * SCALE + 2.0 * MARGIN + TITLE_H + LEGEND_H;
    let px = |x: f64| MARGIN + (x - x0) * SCALE;
    let py = |y: f64| MARGIN + TITLE_H + (y1 - y) * SCALE;

    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif">"#,
        w = width,
        h = height
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="16">{}</text>"#,
        MARGIN,
        MARGIN,
        escape(title)
    );
    for (p, v) in grid.points.iter().zip(values) {
        let (r, g, b) = ramp((v - lo) / span);
        let cx = px(p.position.x);
        let cy = py(p.position.y);
        let label = if (r as f64 * 0.299 + g as f64 * 0.587 + b as f64 * 0.114) > 140.0 {
            "black"
        } else {
            "white"
        };
        let _ = writeln!(
            svg,
            r#"<rect class="cell" data-i="{}" data-j="{}" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({},{},{})" stroke="white" stroke-width="1"/>"#,
            p.i,
            p.j,
            cx - sx * SCALE / 2.0,
            cy - sy * SCALE / 2.0,
            sx * SCALE,
            sy * SCALE,
            r,
            g,
            b
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle" dominant-baseline="middle" fill="{}">{:.1}</text>"#,
            cx, cy, label, v
        );
    }
    for l in luminaires {
        let (x, y) = (l.position.x, l.position.y);
        if (x0..=x1).contains(&x) && (y0..=y1).contains(&y) {
            let _ = writeln!(
                svg,
                r#"<circle class="nadir" cx="{:.2}" cy="{:.2}" r="5" fill="none" stroke="black" stroke-width="1.5"/>"#,
                px(x),
                py(y)
            );
        }
    }
    let legend_y = height - LEGEND_H + 10.0;
    let (lr, lg, lb) = ramp(0.0);
    let (hr, hg, hb) = ramp(1.0);
    let _ = writeln!(
        svg,
        r#"<defs><linearGradient id="ramp"><stop offset="0" stop-color="rgb({lr},{lg},{lb})"/><stop offset="1" stop-color="rgb({hr},{hg},{hb})"/></linearGradient></defs>"#
    );
    let legend_w = width - 2.0 * MARGIN - 140.0;
    let _ = writeln!(
        svg,
        r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="12" fill="url(#ramp)"/>"#,
        MARGIN + 70.0,
        legend_y,
        legend_w
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="end">{:.1} lx</text>"#,
        MARGIN + 65.0,
        legend_y + 11.0,
        lo
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="12">{:.1} lx</text>"#,
        MARGIN + 75.0 + legend_w,
        legend_y + 11.0,
        hi
    );
    svg.push_str("</svg>\n");
    svg
}
