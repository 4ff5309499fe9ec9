#![allow(dead_code)]

pub mod props;

use std::collections::BTreeMap;
use std::path::PathBuf;

use approx::assert_relative_eq;
use luxgrid::validation::{compare_points, CompareTarget, ErrorBands, ReferenceDataset};
use luxgrid::{load_scenario, IlluminanceField, KeyPolicy, Scenario};

pub const SYNTHETIC_FIXTURE: &str = "synthetic_config1_reference.csv";

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn config1() -> (Scenario, IlluminanceField) {
    let (scenario, _) = load_scenario("cie_config1", KeyPolicy::Strict).unwrap();
    let field = scenario.field().unwrap();
    (scenario, field)
}

/// Smallest-step search for a measured value `m` with `m * factor == target`
/// exactly, starting from `target / factor`.
fn exact_preimage(target: f64, factor: f64) -> Option<f64> {
    let start = target / factor;
    let mut lo = start;
    let mut hi = start;
    for _ in 0..64 {
        if lo * factor == target {
            return Some(lo);
        }
        if hi * factor == target {
            return Some(hi);
        }
        lo = f64::from_bits(lo.to_bits() - 1);
        hi = f64::from_bits(hi.to_bits() + 1);
    }
    None
}

/// Measured values around the default config-1 field such that exactly 29
/// points fall inside the E_m band and 34 inside the E_g band. Includes
/// points sitting exactly on LS_Eg and LI_Em when an exact preimage exists.
///
/// Layout by row-major point index k:
///   k % 10 in {0, 3, 6}  -> 15 points beyond the E_g band
///   k % 10 == 8          -> 5 points between the E_m and E_g bands
///   otherwise            -> 29 points inside the E_m band
pub fn synthetic_reference(field: &IlluminanceField) -> ReferenceDataset {
    let bands = ErrorBands::CIE_TC3_33;
    let mut points = BTreeMap::new();
    let mut boundary_eg_done = false;
    let mut boundary_em_done = false;
    for (k, (p, sim)) in field.grid.points.iter().zip(&field.global).enumerate() {
        let kf = k as f64;
        let measured = match k % 10 {
            0 | 3 | 6 => {
                // 1%..15% beyond the violated limit, alternating sides
                let excess = 0.01 + 0.01 * (k / 3) as f64;
                if k % 2 == 0 {
                    sim / ((1.0 + bands.point_global_pct / 100.0) * (1.0 + excess))
                } else {
                    sim / ((1.0 - bands.point_global_pct / 100.0) * (1.0 - excess))
                }
            }
            8 => {
                let ls_eg = 1.0 + bands.point_global_pct / 100.0;
                let exact = if boundary_eg_done {
                    None
                } else {
                    exact_preimage(*sim, ls_eg)
                };
                match exact {
                    Some(m) => {
                        boundary_eg_done = true;
                        m
                    }
                    None if k % 20 == 8 => sim / 1.05,
                    None => sim / 0.95,
                }
            }
            _ => {
                let li_em = 1.0 - bands.point_measure_pct / 100.0;
                let exact = if boundary_em_done {
                    None
                } else {
                    exact_preimage(*sim, li_em)
                };
                match exact {
                    Some(m) => {
                        boundary_em_done = true;
                        m
                    }
                    None => sim * (1.0 + 0.02 * (0.7 * kf).sin()),
                }
            }
        };
        points.insert((p.i, p.j), measured);
    }
    ReferenceDataset::new(
        points,
        None,
        bands,
        "synthetic fixture around cie_config1 defaults: 29 in E_m, 34 in E_g",
    )
    .unwrap()
}

/// Straightforward per-point statistics, written independently of the
/// library's comparison code.
#[derive(Debug)]
pub struct SheetStats {
    pub n_em: usize,
    pub n_eg: usize,
    pub errors: Vec<f64>,
    pub max_err: f64,
    pub min_err: f64,
    pub mean_err_out: f64,
    pub mean_err_all: f64,
    pub mean_dist_all: f64,
    pub min_dist_all: f64,
    pub avg_sim: f64,
    pub avg_lower: f64,
    pub avg_upper: f64,
}

pub fn spreadsheet(sim: &[f64], meas: &[f64], em: f64, eg: f64, avg_eg: f64) -> SheetStats {
    let n = sim.len();
    let mut n_em = 0;
    let mut n_eg = 0;
    let mut errors = vec![0.0; n];
    let mut dists = vec![0.0; n];
    let mut out = Vec::new();
    for k in 0..n {
        let (s, m) = (sim[k], meas[k]);
        let lo_m = m * (1.0 - em / 100.0);
        let hi_m = m * (1.0 + em / 100.0);
        let lo_g = m * (1.0 - eg / 100.0);
        let hi_g = m * (1.0 + eg / 100.0);
        if s >= lo_m && s <= hi_m {
            n_em += 1;
        }
        if s >= lo_g && s <= hi_g {
            n_eg += 1;
        } else if s > hi_g {
            errors[k] = (s / hi_g - 1.0) * 100.0;
            out.push(errors[k]);
        } else {
            errors[k] = (1.0 - s / lo_g) * 100.0;
            out.push(errors[k]);
        }
        let to_lo = (s - lo_g).abs();
        let to_hi = (s - hi_g).abs();
        dists[k] = if to_lo <= to_hi {
            to_lo / lo_g
        } else {
            to_hi / hi_g
        } * 100.0;
    }
    let avg_meas = meas.iter().sum::<f64>() / n as f64;
    SheetStats {
        n_em,
        n_eg,
        max_err: out.iter().cloned().fold(0.0, f64::max),
        min_err: out.iter().cloned().fold(f64::INFINITY, f64::min),
        mean_err_out: if out.is_empty() {
            0.0
        } else {
            out.iter().sum::<f64>() / out.len() as f64
        },
        mean_err_all: errors.iter().sum::<f64>() / n as f64,
        mean_dist_all: dists.iter().sum::<f64>() / n as f64,
        min_dist_all: dists.iter().cloned().fold(f64::INFINITY, f64::min),
        errors,
        avg_sim: sim.iter().sum::<f64>() / n as f64,
        avg_lower: avg_meas * (1.0 - avg_eg / 100.0),
        avg_upper: avg_meas * (1.0 + avg_eg / 100.0),
    }
}

/// Hand fixture A: every simulated value is 100 lx; 40 measurements agree
/// exactly, 9 are placed so that the violated E_g limit sits at a round
/// value.
pub fn hand_fixture_a() -> (Vec<(usize, usize, f64)>, ReferenceDataset) {
    let up = 1.0 + 6.7 / 100.0;
    let down = 1.0 - 6.7 / 100.0;
    // LS_Eg of 80, 90, 95 lx and LI_Eg of 110, 120, 125 lx
    let outliers = [
        80.0 / up,
        90.0 / up,
        95.0 / up,
        110.0 / down,
        120.0 / down,
        125.0 / down,
        80.0 / up,
        120.0 / down,
        95.0 / up,
    ];
    let out_at = [3usize, 7, 12, 20, 25, 31, 38, 44, 48];
    let mut sim = Vec::new();
    let mut points = BTreeMap::new();
    let mut next = 0;
    for k in 0..49 {
        let (i, j) = (k / 7 + 1, k % 7 + 1);
        sim.push((i, j, 100.0));
        let measured = if out_at.contains(&k) {
            next += 1;
            outliers[next - 1]
        } else {
            100.0
        };
        points.insert((i, j), measured);
    }
    let reference =
        ReferenceDataset::new(points, None, ErrorBands::CIE_TC3_33, "hand fixture A").unwrap();
    (sim, reference)
}

/// Hand fixture B: a smooth synthetic field against a measured field with a
/// tilt and ripple, non-default bands and a stated measured average.
pub fn hand_fixture_b() -> (Vec<(usize, usize, f64)>, ReferenceDataset) {
    let mut sim = Vec::new();
    let mut points = BTreeMap::new();
    for i in 1..=7 {
        for j in 1..=7 {
            let (x, y) = (j as f64 - 4.0, i as f64 - 4.0);
            let s = 150.0 - 2.5 * (x * x + y * y);
            let m = s * (1.0 + 0.012 * x - 0.009 * y + 0.03 * ((i * j) as f64).sin());
            sim.push((i, j, s));
            points.insert((i, j), m);
        }
    }
    let bands = ErrorBands::new(2.0, 5.0, 4.0, 8.0).unwrap();
    let reference = ReferenceDataset::new(points, Some(118.0), bands, "hand fixture B").unwrap();
    (sim, reference)
}

/// Asserts that the library's comparison of `sim` against `reference`
/// agrees with [`spreadsheet`].
pub fn check_against_sheet(sim: &[(usize, usize, f64)], reference: &ReferenceDataset) {
    let report = compare_points(sim, reference, CompareTarget::Global).unwrap();
    let s: Vec<f64> = sim.iter().map(|t| t.2).collect();
    let m: Vec<f64> = sim.iter().map(|t| reference.points[&(t.0, t.1)]).collect();
    let b = reference.bands;
    let sheet = spreadsheet(
        &s,
        &m,
        b.point_measure_pct,
        b.point_global_pct,
        b.average_global_pct,
    );

    assert_eq!(report.n_within_em, sheet.n_em);
    assert_eq!(report.n_within_eg, sheet.n_eg);
    for (rec, e) in report.records.iter().zip(&sheet.errors) {
        assert_relative_eq!(
            rec.verdict.rel_error_pct,
            *e,
            epsilon = 1e-9,
            max_relative = 1e-9
        );
    }
    let st = report.stats;
    if sheet.n_eg < s.len() {
        assert_relative_eq!(
            st.max_error.unwrap().value_pct,
            sheet.max_err,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            st.min_nonzero_error.unwrap().value_pct,
            sheet.min_err,
            max_relative = 1e-9
        );
    }
    assert_relative_eq!(
        st.mean_error_out_of_band_pct,
        sheet.mean_err_out,
        epsilon = 1e-9,
        max_relative = 1e-9
    );
    assert_relative_eq!(
        st.mean_error_all_pct,
        sheet.mean_err_all,
        epsilon = 1e-9,
        max_relative = 1e-9
    );
    assert_relative_eq!(
        st.mean_limit_distance_pct,
        sheet.mean_dist_all,
        max_relative = 1e-9
    );
    assert_relative_eq!(
        st.min_limit_distance.value_pct,
        sheet.min_dist_all,
        epsilon = 1e-9,
        max_relative = 1e-9
    );
    assert_relative_eq!(
        report.average.simulated,
        sheet.avg_sim,
        max_relative = 1e-12
    );
    if reference.measured_average.is_none() {
        assert_relative_eq!(report.average.lower, sheet.avg_lower, max_relative = 1e-12);
        assert_relative_eq!(report.average.upper, sheet.avg_upper, max_relative = 1e-12);
    }
}
