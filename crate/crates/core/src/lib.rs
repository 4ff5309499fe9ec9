//! Working-plane illuminance from ceiling luminaires with a reflectance-scaled
//! interreflection estimate, a patch-radiosity cross-check, and error-band
//! conformance against measured grids.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::approx_constant)]

#[cfg(feature = "cli")]
pub mod cli;
pub mod engine;
pub mod error;
pub mod photometry;
pub mod radiosity;
pub mod report;
pub mod scenario;
pub mod scene;
pub mod validation;

pub use engine::{
    average_illuminance, diffuse_illuminance, direct_illuminance, evaluate_field,
    global_illuminance, DiffuseMode, IlluminanceField, ModelConfig,
};
pub use error::{LightingError, Result};
pub use photometry::{flux_intensity_ratio, intensity_toward, EmissionModel, Luminaire, Vec3};
pub use scenario::{load_scenario, KeyPolicy, Scenario};
pub use scene::{
    average_reflectance, build_grid, GridSpec, MeasurementGrid, ReflectancePolicy, Room,
};
pub use validation::{compare, CompareTarget, ComparisonReport, ErrorBands, ReferenceDataset};
