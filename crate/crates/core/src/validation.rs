//! Error-band conformance of a simulated grid against measured values.
//!
//! Each measured value `m` carries two symmetric bands: the measurement
//! band `m(1 ± E_m)` and the wider global band `m(1 ± E_g)`. A simulated
//! value inside a band counts as agreeing with the measurement at that
//! level; limits are inclusive. Out-of-band points are scored by their
//! relative distance to the violated global limit curve.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{mean, IlluminanceField};
use crate::error::{LightingError, Result};

/// Tolerable error percentages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBands {
    /// Measurement-only error on a single point.
    pub point_measure_pct: f64,
    /// Measurement plus simulation error on a single point.
    pub point_global_pct: f64,
    pub average_measure_pct: f64,
    pub average_global_pct: f64,
}

impl ErrorBands {
    /// Bands published with the CIE TC3-33 artificial-lighting test cases.
    pub const CIE_TC3_33: ErrorBands = ErrorBands {
        point_measure_pct: 3.8,
        point_global_pct: 6.7,
        average_measure_pct: 6.3,
        average_global_pct: 10.5,
    };

    pub fn new(
        point_measure_pct: f64,
        point_global_pct: f64,
        average_measure_pct: f64,
        average_global_pct: f64,
    ) -> Result<Self> {
        let bands = ErrorBands {
            point_measure_pct,
            point_global_pct,
            average_measure_pct,
            average_global_pct,
        };
        bands.validate()?;
        Ok(bands)
    }

    pub fn validate(&self) -> Result<()> {
        let pairs = [
            ("point", self.point_measure_pct, self.point_global_pct),
            ("average", self.average_measure_pct, self.average_global_pct),
        ];
        for (kind, measure, global) in pairs {
            if !(measure >= 0.0 && measure <= global && global < 100.0) {
                return Err(LightingError::config(
                    format!("{kind}_bands"),
                    format!("need 0 <= measure ({measure}) <= global ({global}) < 100"),
                ));
            }
        }
        Ok(())
    }
}

impl Default for ErrorBands {
    fn default() -> Self {
        ErrorBands::CIE_TC3_33
    }
}

/// Lower (LI) and upper (LS) limits around one measured value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitCurves {
    pub li_em: f64,
    pub ls_em: f64,
    pub li_eg: f64,
    pub ls_eg: f64,
}

impl LimitCurves {
    fn around(measured: f64, measure_pct: f64, global_pct: f64) -> Self {
        LimitCurves {
            li_em: measured * (1.0 - measure_pct / 100.0),
            ls_em: measured * (1.0 + measure_pct / 100.0),
            li_eg: measured * (1.0 - global_pct / 100.0),
            ls_eg: measured * (1.0 + global_pct / 100.0),
        }
    }

    pub fn within_em(&self, value: f64) -> bool {
        self.li_em <= value && value <= self.ls_em
    }

    pub fn within_eg(&self, value: f64) -> bool {
        self.li_eg <= value && value <= self.ls_eg
    }
}

pub fn limit_curves(measured: f64, bands: &ErrorBands) -> LimitCurves {
    LimitCurves::around(measured, bands.point_measure_pct, bands.point_global_pct)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointVerdict {
    pub within_em: bool,
    pub within_eg: bool,
    /// 0 inside the global band, else % distance to the violated global limit.
    pub rel_error_pct: f64,
    /// % distance to the closer global limit, for every point.
    pub limit_distance_pct: f64,
}

fn verdict_against(simulated: f64, limits: &LimitCurves) -> PointVerdict {
    let within_eg = limits.within_eg(simulated);
    let rel_error_pct = if within_eg {
        0.0
    } else if simulated > limits.ls_eg {
        100.0 * (simulated - limits.ls_eg) / limits.ls_eg
    } else {
        100.0 * (limits.li_eg - simulated) / limits.li_eg
    };
    let nearest = if (simulated - limits.li_eg).abs() <= (simulated - limits.ls_eg).abs() {
        limits.li_eg
    } else {
        limits.ls_eg
    };
    PointVerdict {
        within_em: limits.within_em(simulated),
        within_eg,
        rel_error_pct,
        limit_distance_pct: 100.0 * (simulated - nearest).abs() / nearest,
    }
}

pub fn point_verdict(simulated: f64, measured: f64, bands: &ErrorBands) -> Result<PointVerdict> {
    if !(measured > 0.0) {
        return Err(LightingError::Data(format!(
            "measured value must be > 0, got {measured}"
        )));
    }
    Ok(verdict_against(simulated, &limit_curves(measured, bands)))
}

/// Which field component is compared with the measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompareTarget {
    #[default]
    Global,
    Direct,
}

impl CompareTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            CompareTarget::Global => "global",
            CompareTarget::Direct => "direct",
        }
    }
}

impl fmt::Display for CompareTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CompareTarget {
    type Err = LightingError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "global" => Ok(CompareTarget::Global),
            "direct" => Ok(CompareTarget::Direct),
            other => Err(LightingError::config(
                "compare",
                format!("unknown comparison target `{other}` (expected global|direct)"),
            )),
        }
    }
}

pub type PointKey = (usize, usize);

/// Measured illuminance keyed by grid index (i, j).
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceDataset {
    pub points: BTreeMap<PointKey, f64>,
    pub measured_average: Option<f64>,
    pub bands: ErrorBands,
    pub provenance: String,
}

impl ReferenceDataset {
    pub fn new(
        points: BTreeMap<PointKey, f64>,
        measured_average: Option<f64>,
        bands: ErrorBands,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        bands.validate()?;
        if points.is_empty() {
            return Err(LightingError::Data(
                "reference dataset has no points".into(),
            ));
        }
        if let Some(((i, j), v)) = points.iter().find(|(_, v)| !(**v > 0.0 && v.is_finite())) {
            return Err(LightingError::Data(format!(
                "measured value at ({i};{j}) must be > 0, got {v}"
            )));
        }
        if let Some(avg) = measured_average {
            if !(avg > 0.0 && avg.is_finite()) {
                return Err(LightingError::Data(format!(
                    "measured average must be > 0, got {avg}"
                )));
            }
        }
        let provenance = provenance.into();
        if provenance.contains(['\n', '\r']) {
            return Err(LightingError::Data(
                "provenance must be a single line".into(),
            ));
        }
        Ok(ReferenceDataset {
            points,
            measured_average,
            bands,
            provenance,
        })
    }

    /// Stated measured average, or the mean of the point values.
    pub fn average(&self) -> f64 {
        self.measured_average.unwrap_or_else(|| {
            let values: Vec<f64> = self.points.values().copied().collect();
            mean(&values)
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# provenance={}\n", self.provenance));
        out.push_str(&format!(
            "# point_measure_pct={}\n",
            self.bands.point_measure_pct
        ));
        out.push_str(&format!(
            "# point_global_pct={}\n",
            self.bands.point_global_pct
        ));
        out.push_str(&format!(
            "# average_measure_pct={}\n",
            self.bands.average_measure_pct
        ));
        out.push_str(&format!(
            "# average_global_pct={}\n",
            self.bands.average_global_pct
        ));
        if let Some(avg) = self.measured_average {
            out.push_str(&format!("# measured_average_lux={avg}\n"));
        }
        out.push_str("i,j,measured_lux\n");
        for ((i, j), v) in &self.points {
            out.push_str(&format!("{i},{j},{v}\n"));
        }
        out
    }

    /// Parses the `i,j,measured_lux` format. Missing band metadata falls
    /// back to the CIE TC3-33 values.
    pub fn from_csv(text: &str, source_name: &str) -> Result<Self> {
        let parse_err = |line: usize, message: String| LightingError::Parse {
            source_name: source_name.to_string(),
            line,
            message,
        };
        let mut bands = ErrorBands::CIE_TC3_33;
        let mut measured_average = None;
        let mut provenance = String::new();
        let mut points = BTreeMap::new();
        let mut seen_header = false;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let Some((key, value)) = meta.trim().split_once('=') else {
                    continue;
                };
                let key = key.trim();
                if key == "provenance" {
                    provenance = value.trim().to_string();
                    continue;
                }
                let number = || {
                    value
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| parse_err(line_no, format!("`{key}`: {e}")))
                };
                match key {
                    "point_measure_pct" => bands.point_measure_pct = number()?,
                    "point_global_pct" => bands.point_global_pct = number()?,
                    "average_measure_pct" => bands.average_measure_pct = number()?,
                    "average_global_pct" => bands.average_global_pct = number()?,
                    "measured_average_lux" => measured_average = Some(number()?),
                    _ => {}
                }
                continue;
            }
            if !seen_header {
                let cols: Vec<&str> = line.split(',').map(str::trim).collect();
                if cols != ["i", "j", "measured_lux"] {
                    return Err(parse_err(
                        line_no,
                        format!("expected header `i,j,measured_lux`, got `{line}`"),
                    ));
                }
                seen_header = true;
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(parse_err(
                    line_no,
                    format!("expected 3 columns, got {}", cols.len()),
                ));
            }
            let i = cols[0]
                .parse::<usize>()
                .map_err(|e| parse_err(line_no, format!("column i: {e}")))?;
            let j = cols[1]
                .parse::<usize>()
                .map_err(|e| parse_err(line_no, format!("column j: {e}")))?;
            let v = cols[2]
                .parse::<f64>()
                .map_err(|e| parse_err(line_no, format!("column measured_lux: {e}")))?;
            if points.insert((i, j), v).is_some() {
                return Err(parse_err(line_no, format!("duplicate point ({i};{j})")));
            }
        }
        if !seen_header {
            return Err(parse_err(0, "missing header `i,j,measured_lux`".into()));
        }
        ReferenceDataset::new(points, measured_average, bands, provenance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointRecord {
    pub i: usize,
    pub j: usize,
    pub simulated: f64,
    pub measured: f64,
    pub limits: LimitCurves,
    pub verdict: PointVerdict,
}

/// A statistic and the grid index where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Located {
    pub value_pct: f64,
    pub at: PointKey,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorStats {
    /// Largest error over out-of-band points.
    pub max_error: Option<Located>,
    /// Smallest error over out-of-band points.
    pub min_nonzero_error: Option<Located>,
    /// Mean error over out-of-band points (0 when there are none).
    pub mean_error_out_of_band_pct: f64,
    /// Mean error over all points, in-band points counting as 0.
    pub mean_error_all_pct: f64,
    /// Smallest distance to a global limit over all points.
    pub min_limit_distance: Located,
    pub mean_limit_distance_pct: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageCheck {
    pub simulated: f64,
    pub measured: f64,
    pub lower_em: f64,
    pub upper_em: f64,
    pub lower: f64,
    pub upper: f64,
    /// Inside the global average band.
    pub within: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub target: CompareTarget,
    pub records: Vec<PointRecord>,
    pub n_within_em: usize,
    pub n_within_eg: usize,
    pub n_total: usize,
    pub stats: ErrorStats,
    pub average: AverageCheck,
    pub reliability_pct: f64,
    pub bands: ErrorBands,
    pub provenance: String,
}

fn index_mismatch(
    simulated: &BTreeSet<PointKey>,
    reference: &BTreeSet<PointKey>,
) -> Option<String> {
    let fmt_keys = |keys: Vec<&PointKey>| {
        keys.iter()
            .map(|(i, j)| format!("({i};{j})"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let missing: Vec<_> = simulated.difference(reference).collect();
    let extra: Vec<_> = reference.difference(simulated).collect();
    if missing.is_empty() && extra.is_empty() {
        return None;
    }
    Some(format!(
        "reference does not match grid; missing from reference: [{}]; not on grid: [{}]",
        fmt_keys(missing),
        fmt_keys(extra)
    ))
}

/// Compares simulated `(i, j, lux)` triples with the reference.
pub fn compare_points(
    simulated: &[(usize, usize, f64)],
    reference: &ReferenceDataset,
    target: CompareTarget,
) -> Result<ComparisonReport> {
    let sim_keys: BTreeSet<PointKey> = simulated.iter().map(|(i, j, _)| (*i, *j)).collect();
    if sim_keys.len() != simulated.len() {
        return Err(LightingError::Data(
            "duplicate (i, j) in simulated values".into(),
        ));
    }
    let ref_keys: BTreeSet<PointKey> = reference.points.keys().copied().collect();
    if let Some(msg) = index_mismatch(&sim_keys, &ref_keys) {
        return Err(LightingError::Data(msg));
    }
    if simulated.is_empty() {
        return Err(LightingError::Data("nothing to compare".into()));
    }

    let records: Vec<PointRecord> = simulated
        .iter()
        .map(|&(i, j, sim)| {
            let measured = reference.points[&(i, j)];
            let limits = limit_curves(measured, &reference.bands);
            PointRecord {
                i,
                j,
                simulated: sim,
                measured,
                limits,
                verdict: verdict_against(sim, &limits),
            }
        })
        .collect();

    let n_total = records.len();
    let n_within_em = records.iter().filter(|r| r.verdict.within_em).count();
    let n_within_eg = records.iter().filter(|r| r.verdict.within_eg).count();

    let locate = |r: &PointRecord, v: f64| Located {
        value_pct: v,
        at: (r.i, r.j),
    };
    let out_of_band: Vec<&PointRecord> = records.iter().filter(|r| !r.verdict.within_eg).collect();
    let max_error = out_of_band
        .iter()
        .fold(None::<Located>, |best, r| match best {
            Some(b) if b.value_pct >= r.verdict.rel_error_pct => Some(b),
            _ => Some(locate(r, r.verdict.rel_error_pct)),
        });
    let min_nonzero_error = out_of_band
        .iter()
        .fold(None::<Located>, |best, r| match best {
            Some(b) if b.value_pct <= r.verdict.rel_error_pct => Some(b),
            _ => Some(locate(r, r.verdict.rel_error_pct)),
        });
    let sum_error: f64 = records.iter().map(|r| r.verdict.rel_error_pct).sum();
    let mean_error_out_of_band_pct = if out_of_band.is_empty() {
        0.0
    } else {
        sum_error / out_of_band.len() as f64
    };
    let min_limit_distance = records.iter().skip(1).fold(
        locate(&records[0], records[0].verdict.limit_distance_pct),
        |best, r| {
            if r.verdict.limit_distance_pct < best.value_pct {
                locate(r, r.verdict.limit_distance_pct)
            } else {
                best
            }
        },
    );
    let mean_limit_distance_pct = records
        .iter()
        .map(|r| r.verdict.limit_distance_pct)
        .sum::<f64>()
        / n_total as f64;

    let sim_values: Vec<f64> = simulated.iter().map(|(_, _, v)| *v).collect();
    let sim_average = mean(&sim_values);
    let measured_average = reference.average();
    let avg_limits = LimitCurves::around(
        measured_average,
        reference.bands.average_measure_pct,
        reference.bands.average_global_pct,
    );

    Ok(ComparisonReport {
        target,
        n_within_em,
        n_within_eg,
        n_total,
        stats: ErrorStats {
            max_error,
            min_nonzero_error,
            mean_error_out_of_band_pct,
            mean_error_all_pct: sum_error / n_total as f64,
            min_limit_distance,
            mean_limit_distance_pct,
        },
        average: AverageCheck {
            simulated: sim_average,
            measured: measured_average,
            lower_em: avg_limits.li_em,
            upper_em: avg_limits.ls_em,
            lower: avg_limits.li_eg,
            upper: avg_limits.ls_eg,
            within: avg_limits.within_eg(sim_average),
        },
        reliability_pct: 100.0 * n_within_eg as f64 / n_total as f64,
        bands: reference.bands,
        provenance: reference.provenance.clone(),
        records,
    })
}

pub fn compare(
    field: &IlluminanceField,
    reference: &ReferenceDataset,
    target: CompareTarget,
) -> Result<ComparisonReport> {
    let values = match target {
        CompareTarget::Global => &field.global,
        CompareTarget::Direct => &field.direct,
    };
    let simulated: Vec<(usize, usize, f64)> = field
        .grid
        .points
        .iter()
        .zip(values)
        .map(|(p, v)| (p.i, p.j, *v))
        .collect();
    compare_points(&simulated, reference, target)
}
