//! Point-by-point illuminance: inverse-square direct term from every
//! luminaire plus an interreflection estimate proportional to it,
//! E_gl = (I_p cos α / d²)(1 + ρ_moy).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LightingError, Result};
use crate::photometry::{intensity_toward, EmissionModel, Luminaire, Vec3};
use crate::scene::{MeasurementGrid, ReflectancePolicy};

/// Points closer than this to a source are rejected.
pub const MIN_SOURCE_DISTANCE: f64 = 1e-6;

/// How the interreflected term is distributed over the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffuseMode {
    /// ρ_moy times the direct value at the same point.
    #[default]
    Local,
    /// ρ_moy times the grid-mean direct value, identical at every point.
    #[serde(alias = "room_mean")]
    RoomMean,
}

impl DiffuseMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiffuseMode::Local => "local",
            DiffuseMode::RoomMean => "room-mean",
        }
    }
}

impl fmt::Display for DiffuseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DiffuseMode {
    type Err = LightingError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "local" => Ok(DiffuseMode::Local),
            "room-mean" | "room_mean" => Ok(DiffuseMode::RoomMean),
            other => Err(LightingError::config(
                "diffuse",
                format!("unknown diffuse mode `{other}` (expected local|room-mean)"),
            )),
        }
    }
}

/// Model switches recorded alongside a computed field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModelConfig {
    pub emission: EmissionModel,
    pub rho_policy: ReflectancePolicy,
    pub diffuse_mode: DiffuseMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlluminanceField {
    pub grid: MeasurementGrid,
    pub direct: Vec<f64>,
    pub diffuse: Vec<f64>,
    pub global: Vec<f64>,
    pub rho_moy: f64,
    pub model: ModelConfig,
}

impl IlluminanceField {
    pub fn len(&self) -> usize {
        self.global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.global.is_empty()
    }
}

/// Illuminance (lx) on a plane with unit normal `plane_normal` at `point`
/// due to a single luminaire.
pub fn direct_illuminance(lum: &Luminaire, point: &Vec3, plane_normal: &Vec3) -> Result<f64> {
    let to_source = lum.position - point;
    let distance = to_source.norm();
    if distance < MIN_SOURCE_DISTANCE {
        return Err(LightingError::Singularity {
            luminaire: lum.id,
            x: point.x,
            y: point.y,
            z: point.z,
            distance,
        });
    }
    let cos_alpha = plane_normal.dot(&to_source) / distance;
    if cos_alpha <= 0.0 {
        return Ok(0.0);
    }
    let intensity = intensity_toward(lum, point)?;
    Ok(intensity * cos_alpha / (distance * distance))
}

pub fn diffuse_illuminance(e_direct: f64, rho_moy: f64) -> f64 {
    e_direct * rho_moy
}

pub fn global_illuminance(e_direct: f64, rho_moy: f64) -> f64 {
    e_direct * (1.0 + rho_moy)
}

/// Direct illuminance summed over all luminaires at every grid point.
pub fn direct_field(luminaires: &[Luminaire], grid: &MeasurementGrid) -> Result<Vec<f64>> {
    if luminaires.is_empty() {
        return Err(LightingError::config(
            "luminaires",
            "at least one luminaire is required",
        ));
    }
    let normal = grid.normal();
    grid.points
        .iter()
        .map(|p| {
            luminaires.iter().try_fold(0.0, |acc, lum| {
                Ok(acc + direct_illuminance(lum, &p.position, &normal)?)
            })
        })
        .collect()
}

/// Evaluates the whole grid. The emission model in `model` overrides each
/// luminaire's own setting.
pub fn evaluate_field(
    luminaires: &[Luminaire],
    grid: &MeasurementGrid,
    rho_moy: f64,
    model: ModelConfig,
) -> Result<IlluminanceField> {
    if !(0.0..=1.0).contains(&rho_moy) {
        return Err(LightingError::config(
            "rho_moy",
            format!("must lie in [0, 1], got {rho_moy}"),
        ));
    }
    let sources: Vec<Luminaire> = luminaires
        .iter()
        .map(|l| l.with_emission_model(model.emission))
        .collect();
    let direct = direct_field(&sources, grid)?;
    let diffuse: Vec<f64> = match model.diffuse_mode {
        DiffuseMode::Local => direct
            .iter()
            .map(|e| diffuse_illuminance(*e, rho_moy))
            .collect(),
        DiffuseMode::RoomMean => {
            let uniform = diffuse_illuminance(mean(&direct), rho_moy);
            vec![uniform; direct.len()]
        }
    };
    let global = match model.diffuse_mode {
        DiffuseMode::Local => direct
            .iter()
            .map(|e| global_illuminance(*e, rho_moy))
            .collect(),
        DiffuseMode::RoomMean => direct.iter().zip(&diffuse).map(|(d, f)| d + f).collect(),
    };
    Ok(IlluminanceField {
        grid: grid.clone(),
        direct,
        diffuse,
        global,
        rho_moy,
        model,
    })
}

/// Arithmetic mean of the global values.
pub fn average_illuminance(field: &IlluminanceField) -> Result<f64> {
    if field.is_empty() {
        return Err(LightingError::Data("illuminance field is empty".into()));
    }
    Ok(mean(&field.global))
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{build_grid, GridSpec, Reflectances, Room, RowAxis};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const UP: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    fn table1_source1(model: EmissionModel) -> Luminaire {
        Luminaire::new(1, Vec3::new(1.695, 1.680, 3.14), 2182.0, 694.55, model).unwrap()
    }

    #[test]
    fn on_axis_inverse_square() {
        let lum = Luminaire::new(
            1,
            Vec3::new(0.0, 0.0, 2.0),
            100.0 * PI,
            100.0,
            EmissionModel::Isotropic,
        )
        .unwrap();
        assert_relative_eq!(direct_illuminance(&lum, &Vec3::zeros(), &UP).unwrap(), 25.0);
    }

    #[test]
    fn table_source_at_nadir() {
        let e = direct_illuminance(
            &table1_source1(EmissionModel::Lambertian),
            &Vec3::new(1.695, 1.680, 0.8),
            &UP,
        )
        .unwrap();
        // 694.55 / 2.34^2 = 126.8445...
        assert_relative_eq!(e, 694.55 / (2.34 * 2.34), max_relative = 1e-12);
        assert!((e - 126.85).abs() < 0.01);
    }

    #[test]
    fn table_source_at_grid_corner() {
        // Scalar oracle: d^2 = 1.215^2 + 1.2^2 + 2.34^2 = 8.391825, cos = 2.34/d,
        // E = 694.55 cos^2 / d^2 = 54.0036 lx.
        let e = direct_illuminance(
            &table1_source1(EmissionModel::Lambertian),
            &Vec3::new(0.48, 0.48, 0.8),
            &UP,
        )
        .unwrap();
        assert_relative_eq!(e, 54.003_560_372_589, max_relative = 1e-10);
    }

    #[test]
    fn source_below_plane_contributes_nothing() {
        let lum = Luminaire::with_aim(
            1,
            Vec3::new(0.0, 0.0, -1.0),
            PI,
            1.0,
            EmissionModel::Isotropic,
            Vec3::new(0.0, 0.0, 1.0),
        )
        .unwrap();
        assert_eq!(direct_illuminance(&lum, &Vec3::zeros(), &UP).unwrap(), 0.0);
    }

    #[test]
    fn singular_point_is_reported() {
        let lum = table1_source1(EmissionModel::Lambertian);
        let p = lum.position + Vec3::new(0.0, 0.0, -1e-9);
        match direct_illuminance(&lum, &p, &UP).unwrap_err() {
            LightingError::Singularity { luminaire, .. } => assert_eq!(luminaire, 1),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn diffuse_and_global_examples() {
        assert_relative_eq!(diffuse_illuminance(100.0, 0.41), 41.0, max_relative = 1e-12);
        assert_eq!(diffuse_illuminance(123.0, 0.0), 0.0);
        assert!((diffuse_illuminance(53.63, 0.3947) - 21.17).abs() < 0.005);
        assert_relative_eq!(global_illuminance(100.0, 0.41), 141.0, max_relative = 1e-12);
        assert_eq!(global_illuminance(0.0, 0.7), 0.0);
        assert!((global_illuminance(126.85, 0.41) - 178.86).abs() < 0.005);
    }

    fn small_grid() -> MeasurementGrid {
        let room = Room::new(4.0, 3.0, 3.0, Reflectances::uniform(0.5)).unwrap();
        build_grid(
            &room,
            &GridSpec {
                plane_height: 0.8,
                edge_gap: 0.5,
                count_x: 5,
                count_y: 4,
                row_axis: RowAxis::Y,
            },
        )
        .unwrap()
    }

    #[test]
    fn single_source_field_matches_pointwise() {
        let grid = small_grid();
        let lum = Luminaire::new(
            3,
            Vec3::new(1.0, 1.2, 2.9),
            1000.0,
            318.0,
            EmissionModel::Lambertian,
        )
        .unwrap();
        let field = evaluate_field(
            std::slice::from_ref(&lum),
            &grid,
            0.3,
            ModelConfig::default(),
        )
        .unwrap();
        for (p, e) in grid.points.iter().zip(&field.direct) {
            assert_eq!(*e, direct_illuminance(&lum, &p.position, &UP).unwrap());
        }
    }

    #[test]
    fn room_mean_mode_spreads_diffuse_uniformly() {
        let grid = small_grid();
        let lum = Luminaire::new(
            1,
            Vec3::new(1.0, 1.2, 2.9),
            1000.0,
            318.0,
            EmissionModel::Lambertian,
        )
        .unwrap();
        let model = ModelConfig {
            diffuse_mode: DiffuseMode::RoomMean,
            ..ModelConfig::default()
        };
        let field = evaluate_field(&[lum], &grid, 0.4, model).unwrap();
        let expected = mean(&field.direct) * 0.4;
        assert!(field
            .diffuse
            .iter()
            .all(|d| (d - expected).abs() < 1e-12 * expected));
        assert_relative_eq!(
            average_illuminance(&field).unwrap(),
            mean(&field.direct) * 1.4,
            max_relative = 1e-12
        );
    }

    #[test]
    fn evaluate_field_rejects_empty_inputs() {
        assert!(evaluate_field(&[], &small_grid(), 0.4, ModelConfig::default()).is_err());
        let lum = Luminaire::new(
            1,
            Vec3::new(1.0, 1.2, 2.9),
            1000.0,
            318.0,
            EmissionModel::Lambertian,
        )
        .unwrap();
        assert!(evaluate_field(&[lum], &small_grid(), 1.5, ModelConfig::default()).is_err());
    }

    #[test]
    fn average_examples() {
        let mut field = evaluate_field(
            &[Luminaire::new(
                1,
                Vec3::new(1.0, 1.2, 2.9),
                1000.0,
                318.0,
                EmissionModel::Lambertian,
            )
            .unwrap()],
            &small_grid(),
            0.0,
            ModelConfig::default(),
        )
        .unwrap();
        field.global = vec![100.0; 49];
        assert_eq!(average_illuminance(&field).unwrap(), 100.0);
        field.global = vec![0.0; 49];
        field.global[17] = 49.0;
        assert_eq!(average_illuminance(&field).unwrap(), 1.0);
        field.global.clear();
        assert!(average_illuminance(&field).is_err());
    }
}
