//! Scenario documents (JSON) and the bundled test rooms.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::engine::{evaluate_field, DiffuseMode, IlluminanceField, ModelConfig};
use crate::error::{LightingError, Result};
use crate::photometry::{is_flux_consistent, EmissionModel, Luminaire, Vec3};
use crate::scene::{
    average_reflectance, build_grid, GridSpec, MeasurementGrid, ReflectancePolicy, Reflectances,
    Room, RowAxis,
};
use crate::validation::CompareTarget;

const CIE_CONFIG1: &str = include_str!("../fixtures/cie_config1.json");
const CIE_CONFIG3: &str = include_str!("../fixtures/cie_config3.json");

/// Names accepted in place of a scenario path.
pub const BUNDLED: [&str; 2] = ["cie_config1", "cie_config3"];

pub fn bundled_source(name: &str) -> Option<&'static str> {
    match name {
        "cie_config1" => Some(CIE_CONFIG1),
        "cie_config3" => Some(CIE_CONFIG3),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KeyPolicy {
    /// Unknown keys are an error.
    #[default]
    Strict,
    /// Unknown keys are reported and ignored.
    Warn,
}

#[derive(Debug, Deserialize)]
struct RawScenario {
    name: String,
    #[serde(default)]
    description: String,
    room: RawRoom,
    luminaires: Vec<RawLuminaire>,
    grid: RawGrid,
    #[serde(default)]
    model: RawModel,
    #[serde(default)]
    reference: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
struct RawRoom {
    length_x_m: f64,
    length_y_m: f64,
    height_m: f64,
    reflectance: Reflectances,
}

#[derive(Debug, Deserialize)]
struct RawLuminaire {
    id: u32,
    position_m: [f64; 3],
    luminous_flux_lm: f64,
    peak_intensity_cd: f64,
    #[serde(default = "nadir")]
    aim: [f64; 3],
}

fn nadir() -> [f64; 3] {
    [0.0, 0.0, -1.0]
}

#[derive(Debug, Deserialize)]
struct RawGrid {
    plane_height_m: f64,
    edge_gap_m: f64,
    count_x: usize,
    count_y: usize,
    #[serde(default)]
    nominal_spacing_m: Option<f64>,
    #[serde(default)]
    row_axis: RowAxis,
}

#[derive(Debug, Default, Deserialize)]
struct RawModel {
    #[serde(default)]
    emission: EmissionModel,
    #[serde(default)]
    rho_policy: ReflectancePolicy,
    #[serde(default)]
    diffuse: DiffuseMode,
    #[serde(default)]
    compare: CompareTarget,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub room: Room,
    pub luminaires: Vec<Luminaire>,
    pub grid_spec: GridSpec,
    /// Spacing quoted by the data source, kept for the discrepancy note.
    pub nominal_spacing: Option<f64>,
    pub model: ModelConfig,
    pub compare: CompareTarget,
    /// Reference dataset path, resolved against the scenario's directory.
    pub reference: Option<PathBuf>,
}

impl Scenario {
    /// Parses and validates a scenario document. Returns the scenario and
    /// any warnings (unknown keys in `Warn` mode, photometry oddities).
    pub fn from_json(
        text: &str,
        source_name: &str,
        keys: KeyPolicy,
    ) -> Result<(Scenario, Vec<String>)> {
        let mut unknown = Vec::new();
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawScenario = serde_ignored::deserialize(de, |path| {
            unknown.push(path.to_string())
        })
        .map_err(|e| LightingError::Parse {
            source_name: source_name.to_string(),
            line: e.line(),
            message: e.to_string(),
        })?;

        let mut warnings = Vec::new();
        if !unknown.is_empty() {
            let msg = format!("unknown keys: {}", unknown.join(", "));
            match keys {
                KeyPolicy::Strict => {
                    return Err(LightingError::Parse {
                        source_name: source_name.to_string(),
                        line: 0,
                        message: msg,
                    })
                }
                KeyPolicy::Warn => warnings.push(msg),
            }
        }

        let scenario = Scenario::from_raw(raw, &mut warnings)?;
        Ok((scenario, warnings))
    }

    fn from_raw(raw: RawScenario, warnings: &mut Vec<String>) -> Result<Scenario> {
        let room = Room::new(
            raw.room.length_x_m,
            raw.room.length_y_m,
            raw.room.height_m,
            raw.room.reflectance,
        )?;
        if raw.luminaires.is_empty() {
            return Err(LightingError::config(
                "luminaires",
                "at least one luminaire is required",
            ));
        }
        let mut ids = BTreeSet::new();
        let mut luminaires = Vec::with_capacity(raw.luminaires.len());
        for l in raw.luminaires {
            if !ids.insert(l.id) {
                return Err(LightingError::config(
                    format!("luminaires[{}].id", l.id),
                    "is duplicated",
                ));
            }
            let [x, y, z] = l.position_m;
            if !(0.0..=room.length_x).contains(&x)
                || !(0.0..=room.length_y).contains(&y)
                || !(0.0..=room.height).contains(&z)
            {
                return Err(LightingError::config(
                    format!("luminaires[{}].position_m", l.id),
                    format!("({x}, {y}, {z}) lies outside the room"),
                ));
            }
            let lum = Luminaire::with_aim(
                l.id,
                Vec3::new(x, y, z),
                l.luminous_flux_lm,
                l.peak_intensity_cd,
                raw.model.emission,
                Vec3::from(l.aim),
            )?;
            if !is_flux_consistent(&lum)? {
                warnings.push(format!(
                    "luminaire {}: flux / peak intensity = {:.4}, not within 0.2% of pi",
                    lum.id,
                    lum.luminous_flux / lum.peak_intensity
                ));
            }
            luminaires.push(lum);
        }
        let grid_spec = GridSpec {
            plane_height: raw.grid.plane_height_m,
            edge_gap: raw.grid.edge_gap_m,
            count_x: raw.grid.count_x,
            count_y: raw.grid.count_y,
            row_axis: raw.grid.row_axis,
        };
        build_grid(&room, &grid_spec)?;
        if let Some(s) = raw.grid.nominal_spacing_m {
            if !(s > 0.0) {
                return Err(LightingError::config(
                    "grid.nominal_spacing_m",
                    "must be > 0",
                ));
            }
        }
        Ok(Scenario {
            name: raw.name,
            description: raw.description,
            room,
            luminaires,
            grid_spec,
            nominal_spacing: raw.grid.nominal_spacing_m,
            model: ModelConfig {
                emission: raw.model.emission,
                rho_policy: raw.model.rho_policy,
                diffuse_mode: raw.model.diffuse,
            },
            compare: raw.model.compare,
            reference: raw.reference,
        })
    }

    pub fn grid(&self) -> Result<MeasurementGrid> {
        build_grid(&self.room, &self.grid_spec)
    }

    /// Evaluates the field with the scenario's configured model.
    pub fn field(&self) -> Result<IlluminanceField> {
        let grid = self.grid()?;
        let rho = average_reflectance(&self.room, self.model.rho_policy);
        evaluate_field(&self.luminaires, &grid, rho, self.model)
    }

    /// Note on the derived spacing when it differs from the nominal one.
    pub fn spacing_note(&self, grid: &MeasurementGrid) -> Option<String> {
        let nominal = self.nominal_spacing?;
        let off = |s: f64| (s - nominal).abs() > 1e-9;
        (off(grid.spacing_x) || off(grid.spacing_y)).then(|| {
            format!(
                "derived grid spacing ({:.4}, {:.4}) m differs from nominal {} m; the nominal value is inconsistent with edge gap {} m and room {} x {} m",
                grid.spacing_x, grid.spacing_y, nominal, self.grid_spec.edge_gap, self.room.length_x, self.room.length_y
            )
        })
    }
}

/// Loads a scenario from a bundled name or a file path.
pub fn load_scenario(name_or_path: &str, keys: KeyPolicy) -> Result<(Scenario, Vec<String>)> {
    if let Some(text) = bundled_source(name_or_path) {
        return Scenario::from_json(text, name_or_path, keys);
    }
    let path = Path::new(name_or_path);
    let text = std::fs::read_to_string(path).map_err(|e| LightingError::io(path, e))?;
    let (mut scenario, warnings) = Scenario::from_json(&text, name_or_path, keys)?;
    if let Some(reference) = scenario.reference.take() {
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        scenario.reference = Some(base.join(reference));
    }
    Ok((scenario, warnings))
}
