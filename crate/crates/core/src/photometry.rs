//! Luminaires reduced to a point at their centre of gravity, with a
//! rotationally symmetric intensity distribution about the emission axis.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{LightingError, Result};

pub type Vec3 = Vector3<f64>;

/// Tolerance on |aim| - 1.
pub const AIM_NORM_TOLERANCE: f64 = 1e-9;

/// Maximum relative deviation of flux / peak intensity from π accepted for
/// a flat Lambertian emitter.
pub const FLUX_RATIO_TOLERANCE: f64 = 0.002;

/// Angular emission model of a luminaire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmissionModel {
    /// Constant intensity over the lower hemisphere.
    #[serde(alias = "isotropic_hemisphere")]
    Isotropic,
    /// I(θ) = I0 cos θ over the lower hemisphere.
    #[default]
    #[serde(alias = "lambertian_cosine")]
    Lambertian,
}

impl EmissionModel {
    pub fn as_str(self) -> &'static str {
        match self {
            EmissionModel::Isotropic => "isotropic",
            EmissionModel::Lambertian => "lambertian",
        }
    }

    /// Relative intensity I(θ)/I0 given cos θ. Zero behind the emitting plane.
    pub fn relative_intensity(self, cos_theta: f64) -> f64 {
        if cos_theta < 0.0 {
            return 0.0;
        }
        match self {
            EmissionModel::Isotropic => 1.0,
            EmissionModel::Lambertian => cos_theta,
        }
    }
}

impl fmt::Display for EmissionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EmissionModel {
    type Err = LightingError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "isotropic" | "isotropic_hemisphere" => Ok(EmissionModel::Isotropic),
            "lambertian" | "lambertian_cosine" => Ok(EmissionModel::Lambertian),
            other => Err(LightingError::config(
                "emission",
                format!("unknown emission model `{other}` (expected isotropic|lambertian)"),
            )),
        }
    }
}

/// A ceiling source described by its photometric sheet values.
#[derive(Debug, Clone, PartialEq)]
pub struct Luminaire {
    pub id: u32,
    pub position: Vec3,
    /// Total flux, lm.
    pub luminous_flux: f64,
    /// Intensity along the aim axis, cd.
    pub peak_intensity: f64,
    pub emission_model: EmissionModel,
    aim: Vec3,
}

impl Luminaire {
    /// Creates a downward-aimed luminaire.
    pub fn new(
        id: u32,
        position: Vec3,
        luminous_flux: f64,
        peak_intensity: f64,
        emission_model: EmissionModel,
    ) -> Result<Self> {
        Self::with_aim(
            id,
            position,
            luminous_flux,
            peak_intensity,
            emission_model,
            Vec3::new(0.0, 0.0, -1.0),
        )
    }

    pub fn with_aim(
        id: u32,
        position: Vec3,
        luminous_flux: f64,
        peak_intensity: f64,
        emission_model: EmissionModel,
        aim: Vec3,
    ) -> Result<Self> {
        let field = |name: &str| format!("luminaires[{id}].{name}");
        if !position.iter().all(|c| c.is_finite()) {
            return Err(LightingError::config(field("position_m"), "must be finite"));
        }
        if !(luminous_flux.is_finite() && luminous_flux > 0.0) {
            return Err(LightingError::config(
                field("luminous_flux_lm"),
                format!("must be > 0, got {luminous_flux}"),
            ));
        }
        if !(peak_intensity.is_finite() && peak_intensity > 0.0) {
            return Err(LightingError::config(
                field("peak_intensity_cd"),
                format!("must be > 0, got {peak_intensity}"),
            ));
        }
        if (aim.norm() - 1.0).abs() > AIM_NORM_TOLERANCE {
            return Err(LightingError::config(
                field("aim"),
                format!("must be a unit vector, |aim| = {}", aim.norm()),
            ));
        }
        Ok(Luminaire {
            id,
            position,
            luminous_flux,
            peak_intensity,
            emission_model,
            aim,
        })
    }

    pub fn aim(&self) -> Vec3 {
        self.aim
    }

    /// Same luminaire with its peak intensity (and flux) multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::with_aim(
            self.id,
            self.position,
            self.luminous_flux * k,
            self.peak_intensity * k,
            self.emission_model,
            self.aim,
        )
    }

    pub fn with_emission_model(&self, emission_model: EmissionModel) -> Self {
        Luminaire {
            emission_model,
            ..self.clone()
        }
    }
}

/// Luminous intensity (cd) emitted by `lum` toward `target`.
pub fn intensity_toward(lum: &Luminaire, target: &Vec3) -> Result<f64> {
    let delta = target - lum.position;
    let distance = delta.norm();
    if distance == 0.0 {
        return Err(LightingError::Domain(format!(
            "target coincides with luminaire {} position",
            lum.id
        )));
    }
    let cos_theta = lum.aim.dot(&delta) / distance;
    Ok(lum.peak_intensity * lum.emission_model.relative_intensity(cos_theta))
}

/// Φ / I0. Equals π for a flat Lambertian emitter.
pub fn flux_intensity_ratio(lum: &Luminaire) -> Result<f64> {
    ratio(lum.luminous_flux, lum.peak_intensity)
}

pub fn ratio(luminous_flux: f64, peak_intensity: f64) -> Result<f64> {
    if peak_intensity == 0.0 {
        return Err(LightingError::Domain(
            "peak intensity is zero, flux ratio undefined".into(),
        ));
    }
    Ok(luminous_flux / peak_intensity)
}

/// Relative deviation of Φ/I0 from π.
pub fn lambertian_ratio_deviation(lum: &Luminaire) -> Result<f64> {
    Ok((flux_intensity_ratio(lum)? - PI).abs() / PI)
}

pub fn is_flux_consistent(lum: &Luminaire) -> Result<bool> {
    Ok(lambertian_ratio_deviation(lum)? < FLUX_RATIO_TOLERANCE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn overhead(model: EmissionModel) -> Luminaire {
        Luminaire::new(1, Vec3::new(0.0, 0.0, 3.0), 100.0 * PI, 100.0, model).unwrap()
    }

    #[test]
    fn on_axis_gets_peak_under_both_models() {
        for model in [EmissionModel::Isotropic, EmissionModel::Lambertian] {
            let i = intensity_toward(&overhead(model), &Vec3::zeros()).unwrap();
            assert_eq!(i, 100.0);
        }
    }

    #[test]
    fn grazing_direction_is_dark_for_lambertian() {
        let lum = overhead(EmissionModel::Lambertian);
        let i = intensity_toward(&lum, &Vec3::new(3.0, 0.0, 3.0)).unwrap();
        assert_eq!(i, 0.0);
        // (3,0,0) sits 45° off axis, not 90°.
        let i = intensity_toward(&lum, &Vec3::new(3.0, 0.0, 0.0)).unwrap();
        assert_relative_eq!(i, 100.0 / 2f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn nothing_emitted_upward() {
        for model in [EmissionModel::Isotropic, EmissionModel::Lambertian] {
            let i = intensity_toward(&overhead(model), &Vec3::new(0.5, 0.0, 4.0)).unwrap();
            assert_eq!(i, 0.0);
        }
    }

    #[test]
    fn table_source_on_axis() {
        let lum = Luminaire::new(
            1,
            Vec3::new(1.695, 1.680, 3.14),
            2182.0,
            694.55,
            EmissionModel::Lambertian,
        )
        .unwrap();
        let i = intensity_toward(&lum, &Vec3::new(1.695, 1.680, 0.8)).unwrap();
        assert_eq!(i, 694.55);
    }

    #[test]
    fn coincident_target_is_domain_error() {
        let lum = overhead(EmissionModel::Lambertian);
        let err = intensity_toward(&lum, &lum.position).unwrap_err();
        assert!(matches!(err, LightingError::Domain(_)));
    }

    #[test]
    fn flux_ratio_examples() {
        assert_relative_eq!(ratio(2182.0, 694.55).unwrap(), 3.1416, epsilon = 5e-5);
        // 3.14197 quoted truncated to 3.1419
        assert_relative_eq!(ratio(4087.7, 1301.0).unwrap(), 3.1419, epsilon = 1e-4);
        assert_eq!(ratio(PI, 1.0).unwrap(), PI);
        assert!(ratio(1.0, 0.0).is_err());
    }

    #[test]
    fn rejects_bad_photometry() {
        let p = Vec3::new(0.0, 0.0, 3.0);
        assert!(Luminaire::new(1, p, 0.0, 1.0, EmissionModel::Lambertian).is_err());
        assert!(Luminaire::new(1, p, 1.0, -1.0, EmissionModel::Lambertian).is_err());
        assert!(Luminaire::with_aim(
            1,
            p,
            1.0,
            1.0,
            EmissionModel::Lambertian,
            Vec3::new(0.0, 0.0, -1.1)
        )
        .is_err());
    }

    #[test]
    fn emission_model_parses() {
        assert_eq!(
            "isotropic".parse::<EmissionModel>().unwrap(),
            EmissionModel::Isotropic
        );
        assert_eq!(
            "Lambertian".parse::<EmissionModel>().unwrap(),
            EmissionModel::Lambertian
        );
        assert!("spot".parse::<EmissionModel>().is_err());
    }

    proptest! {
        #[test]
        fn symmetric_about_aim(
            theta in 0.0f64..std::f64::consts::FRAC_PI_2,
            r in 0.1f64..10.0,
            lambertian in any::<bool>(),
        ) {
            let model = if lambertian { EmissionModel::Lambertian } else { EmissionModel::Isotropic };
            let lum = overhead(model);
            let reference = intensity_toward(
                &lum,
                &(lum.position + r * Vec3::new(theta.sin(), 0.0, -theta.cos())),
            ).unwrap();
            for k in 1..8 {
                let phi = k as f64 * std::f64::consts::TAU / 8.0;
                let dir = Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), -theta.cos());
                let i = intensity_toward(&lum, &(lum.position + r * dir)).unwrap();
                prop_assert!((i - reference).abs() <= 1e-12 * reference.abs().max(1e-300));
            }
        }

        #[test]
        fn lambertian_non_increasing_off_axis(a in 0.0f64..1.5707, b in 0.0f64..1.5707) {
            let lum = overhead(EmissionModel::Lambertian);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let at = |t: f64| intensity_toward(
                &lum,
                &(lum.position + Vec3::new(t.sin(), 0.0, -t.cos())),
            ).unwrap();
            prop_assert!(at(lo) >= at(hi));
        }
    }
}
