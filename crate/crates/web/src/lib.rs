//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each exported function takes plain strings and numbers and returns a JSON
//! document; the `*_json` functions are the same operations for native use.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::Serialize;
use wasm_bindgen::prelude::*;

use luxgrid::radiosity::{run_oracle, OracleOptions};
use luxgrid::report::heatmap_svg;
use luxgrid::scenario::bundled_source;
use luxgrid::{
    average_illuminance, direct_illuminance, DiffuseMode, EmissionModel, KeyPolicy, LightingError,
    Luminaire, ReflectancePolicy, Scenario, Vec3,
};

type Result<T> = std::result::Result<T, String>;

fn text(e: LightingError) -> String {
    e.to_string()
}

#[derive(Debug, Serialize)]
pub struct HeatmapOutput {
    pub svg: String,
    pub average_lux: f64,
    pub min_lux: f64,
    pub max_lux: f64,
    pub rho_moy: f64,
    pub warnings: Vec<String>,
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ProfileOutput {
    pub offsets_m: Vec<f64>,
    pub isotropic_lux: Vec<f64>,
    pub lambertian_lux: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct OracleOutput {
    pub svg: String,
    pub oracle_mean_lux: f64,
    pub estimate_mean_lux: f64,
    pub patches: usize,
    pub iterations: usize,
    pub energy_imbalance: f64,
    pub points: Vec<OraclePoint>,
}

#[derive(Debug, Serialize)]
pub struct OraclePoint {
    pub i: usize,
    pub j: usize,
    pub oracle_lux: f64,
    pub estimate_lux: f64,
}

/// Scenario from JSON text with the model switches replaced.
pub fn scenario_with_model(
    json: &str,
    emission: &str,
    rho_policy: &str,
    diffuse: &str,
) -> Result<(Scenario, Vec<String>)> {
    let (mut scenario, warnings) =
        Scenario::from_json(json, "scenario", KeyPolicy::Warn).map_err(text)?;
    scenario.model.emission = emission.parse::<EmissionModel>().map_err(text)?;
    scenario.model.rho_policy = rho_policy.parse::<ReflectancePolicy>().map_err(text)?;
    scenario.model.diffuse_mode = diffuse.parse::<DiffuseMode>().map_err(text)?;
    Ok((scenario, warnings))
}

pub fn heatmap_json(json: &str, emission: &str, rho_policy: &str, diffuse: &str) -> Result<String> {
    let (scenario, warnings) = scenario_with_model(json, emission, rho_policy, diffuse)?;
    let field = scenario.field().map_err(text)?;
    let title = format!(
        "{}: global illuminance (lx), {} / {} / {}",
        scenario.name, emission, rho_policy, diffuse
    );
    let out = HeatmapOutput {
        svg: heatmap_svg(&title, &field, &field.global, &scenario.luminaires),
        average_lux: average_illuminance(&field).map_err(text)?,
        min_lux: field.global.iter().cloned().fold(f64::INFINITY, f64::min),
        max_lux: field
            .global
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max),
        rho_moy: field.rho_moy,
        warnings,
        note: scenario.spacing_note(&field.grid),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Direct illuminance on the floor below one source at `height_m`, for both
/// emission models, at `samples` offsets from its nadir up to `max_offset_m`.
pub fn profile_json(
    height_m: f64,
    peak_cd: f64,
    max_offset_m: f64,
    samples: usize,
) -> Result<String> {
    if samples < 2 {
        return Err("samples must be >= 2".into());
    }
    if !(max_offset_m > 0.0) {
        return Err("max offset must be > 0".into());
    }
    let source = |model| {
        Luminaire::new(
            1,
            Vec3::new(0.0, 0.0, height_m),
            peak_cd * std::f64::consts::PI,
            peak_cd,
            model,
        )
        .map_err(text)
    };
    let iso = source(EmissionModel::Isotropic)?;
    let lam = source(EmissionModel::Lambertian)?;
    let up = Vec3::new(0.0, 0.0, 1.0);
    let mut out = ProfileOutput {
        offsets_m: Vec::with_capacity(samples),
        isotropic_lux: Vec::with_capacity(samples),
        lambertian_lux: Vec::with_capacity(samples),
    };
    for k in 0..samples {
        let r = max_offset_m * k as f64 / (samples - 1) as f64;
        let p = Vec3::new(r, 0.0, 0.0);
        out.offsets_m.push(r);
        out.isotropic_lux
            .push(direct_illuminance(&iso, &p, &up).map_err(text)?);
        out.lambertian_lux
            .push(direct_illuminance(&lam, &p, &up).map_err(text)?);
    }
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// Radiosity interreflection against the ρ_moy estimate on the scenario grid.
pub fn oracle_json(
    json: &str,
    emission: &str,
    rho_policy: &str,
    diffuse: &str,
    subdivision: usize,
) -> Result<String> {
    let (scenario, _) = scenario_with_model(json, emission, rho_policy, diffuse)?;
    let field = scenario.field().map_err(text)?;
    let options = OracleOptions {
        subdivision,
        ..OracleOptions::default()
    };
    let run = run_oracle(
        &scenario.room,
        &scenario.luminaires,
        scenario.model.emission,
        &field.grid,
        options,
    )
    .map_err(text)?;
    let n = field.len() as f64;
    let title = format!(
        "{}: interreflected illuminance from radiosity (lx)",
        scenario.name
    );
    let out = OracleOutput {
        svg: heatmap_svg(&title, &field, &run.interreflected, &scenario.luminaires),
        oracle_mean_lux: run.interreflected.iter().sum::<f64>() / n,
        estimate_mean_lux: field.diffuse.iter().sum::<f64>() / n,
        patches: run.mesh.len(),
        iterations: run.solution.iterations,
        energy_imbalance: run.energy.relative_imbalance(),
        points: field
            .grid
            .points
            .iter()
            .zip(run.interreflected.iter().zip(&field.diffuse))
            .map(|(p, (o, e))| OraclePoint {
                i: p.i,
                j: p.j,
                oracle_lux: *o,
                estimate_lux: *e,
            })
            .collect(),
    };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

/// JSON text of a bundled scenario, or `undefined`.
#[wasm_bindgen(js_name = bundledScenario)]
pub fn bundled_scenario(name: &str) -> Option<String> {
    bundled_source(name).map(str::to_string)
}

/// Global-illuminance heatmap: `{svg, average_lux, min_lux, max_lux, rho_moy, warnings, note}`.
#[wasm_bindgen]
pub fn heatmap(
    json: &str,
    emission: &str,
    rho_policy: &str,
    diffuse: &str,
) -> std::result::Result<String, JsError> {
    heatmap_json(json, emission, rho_policy, diffuse).map_err(|e| JsError::new(&e))
}

/// Floor illuminance profile below a single source: `{offsets_m, isotropic_lux, lambertian_lux}`.
#[wasm_bindgen(js_name = emissionProfile)]
pub fn emission_profile(
    height_m: f64,
    peak_cd: f64,
    max_offset_m: f64,
    samples: usize,
) -> std::result::Result<String, JsError> {
    profile_json(height_m, peak_cd, max_offset_m, samples).map_err(|e| JsError::new(&e))
}

/// Radiosity cross-check: `{svg, oracle_mean_lux, estimate_mean_lux, patches, iterations, energy_imbalance, points}`.
#[wasm_bindgen(js_name = oracleComparison)]
pub fn oracle_comparison(
    json: &str,
    emission: &str,
    rho_policy: &str,
    diffuse: &str,
    subdivision: usize,
) -> std::result::Result<String, JsError> {
    oracle_json(json, emission, rho_policy, diffuse, subdivision).map_err(|e| JsError::new(&e))
}
