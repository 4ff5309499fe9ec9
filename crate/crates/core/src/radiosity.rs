//! Patch radiosity for a convex box room.
//!
//! Every surface is split into a uniform `n x n` patch lattice. Form factors
//! use the point-to-point kernel
//!
//! ```text
//! F_ij = cos θ_i cos θ_j A_j / (π r²)
//! ```
//!
//! evaluated between the centres of an `m x m` sub-lattice on each patch and
//! averaged (`m = 1` is the plain centre-to-centre value). With no
//! obstructions inside the box, every pair of facing patches is mutually
//! visible. The system `B_i = E_i + ρ_i Σ_j F_ij B_j` is solved by
//! Gauss–Seidel sweeps in patch order, where `E_i = ρ_i H_i` is the first
//! reflection of the direct irradiance `H_i` delivered by the luminaires.
//! Illuminance on the working plane is then gathered from the converged
//! radiosities, which excludes the direct term by construction.

use std::f64::consts::PI;

use crate::engine::direct_illuminance;
use crate::error::{LightingError, Result};
use crate::photometry::{EmissionModel, Luminaire, Vec3};
use crate::scene::{MeasurementGrid, Room, Surface};

pub const DEFAULT_SUBDIVISION: usize = 8;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;
/// Sub-samples per patch edge for matrix assembly and gathering.
pub const DEFAULT_QUADRATURE: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    pub surface: Surface,
    pub centre: Vec3,
    pub area: f64,
    /// Unit normal pointing into the room.
    pub normal: Vec3,
    pub reflectance: f64,
    /// Full-length edge vectors spanning the rectangle.
    pub edge_u: Vec3,
    pub edge_v: Vec3,
}

impl Patch {
    /// Rectangle centred at `centre` spanned by `edge_u` and `edge_v`.
    pub fn rectangle(
        surface: Surface,
        centre: Vec3,
        edge_u: Vec3,
        edge_v: Vec3,
        normal: Vec3,
        reflectance: f64,
    ) -> Self {
        Patch {
            surface,
            centre,
            area: edge_u.cross(&edge_v).norm(),
            normal,
            reflectance,
            edge_u,
            edge_v,
        }
    }

    /// Centres of an `m x m` sub-lattice.
    pub fn sample_points(&self, m: usize) -> Vec<Vec3> {
        let mut out = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                let s = (a as f64 + 0.5) / m as f64 - 0.5;
                let t = (b as f64 + 0.5) / m as f64 - 0.5;
                out.push(self.centre + s * self.edge_u + t * self.edge_v);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatchMesh {
    pub patches: Vec<Patch>,
    /// Patches per surface edge.
    pub subdivision: usize,
}

impl PatchMesh {
    pub fn new(patches: Vec<Patch>, subdivision: usize) -> Result<Self> {
        for (k, p) in patches.iter().enumerate() {
            if !(p.area > 0.0) {
                return Err(LightingError::config(
                    format!("patches[{k}].area"),
                    "must be > 0",
                ));
            }
            if (p.normal.norm() - 1.0).abs() > 1e-9 {
                return Err(LightingError::config(
                    format!("patches[{k}].normal"),
                    "must be a unit vector",
                ));
            }
            if p.normal.dot(&p.edge_u).abs() > 1e-9 || p.normal.dot(&p.edge_v).abs() > 1e-9 {
                return Err(LightingError::config(
                    format!("patches[{k}].normal"),
                    "must be perpendicular to the patch edges",
                ));
            }
            if !(0.0..=1.0).contains(&p.reflectance) {
                return Err(LightingError::config(
                    format!("patches[{k}].reflectance"),
                    "must lie in [0, 1]",
                ));
            }
        }
        Ok(PatchMesh {
            patches,
            subdivision,
        })
    }

    /// Uniform `subdivision x subdivision` lattice on each of the six faces.
    pub fn from_room(room: &Room, subdivision: usize) -> Result<Self> {
        if subdivision == 0 {
            return Err(LightingError::config("subdivision", "must be >= 1"));
        }
        let (lx, ly, h) = (room.length_x, room.length_y, room.height);
        let n = subdivision;
        let mut patches = Vec::with_capacity(6 * n * n);
        for surface in Surface::ALL {
            // origin, two edge vectors spanning the face, inward normal
            let (origin, u, v, normal) = match surface {
                Surface::Floor => (
                    Vec3::zeros(),
                    Vec3::new(lx, 0.0, 0.0),
                    Vec3::new(0.0, ly, 0.0),
                    Vec3::z(),
                ),
                Surface::Ceiling => (
                    Vec3::new(0.0, 0.0, h),
                    Vec3::new(lx, 0.0, 0.0),
                    Vec3::new(0.0, ly, 0.0),
                    -Vec3::z(),
                ),
                Surface::WallSouth => (
                    Vec3::zeros(),
                    Vec3::new(lx, 0.0, 0.0),
                    Vec3::new(0.0, 0.0, h),
                    Vec3::y(),
                ),
                Surface::WallNorth => (
                    Vec3::new(0.0, ly, 0.0),
                    Vec3::new(lx, 0.0, 0.0),
                    Vec3::new(0.0, 0.0, h),
                    -Vec3::y(),
                ),
                Surface::WallWest => (
                    Vec3::zeros(),
                    Vec3::new(0.0, ly, 0.0),
                    Vec3::new(0.0, 0.0, h),
                    Vec3::x(),
                ),
                Surface::WallEast => (
                    Vec3::new(lx, 0.0, 0.0),
                    Vec3::new(0.0, ly, 0.0),
                    Vec3::new(0.0, 0.0, h),
                    -Vec3::x(),
                ),
            };
            let reflectance = room.reflectance.get(surface);
            let (du, dv) = (u / n as f64, v / n as f64);
            for a in 0..n {
                for b in 0..n {
                    let s = (a as f64 + 0.5) / n as f64;
                    let t = (b as f64 + 0.5) / n as f64;
                    patches.push(Patch::rectangle(
                        surface,
                        origin + s * u + t * v,
                        du,
                        dv,
                        normal,
                        reflectance,
                    ));
                }
            }
        }
        PatchMesh::new(patches, subdivision)
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.patches.iter().map(|p| p.area).sum()
    }

    pub fn reflectances(&self) -> Vec<f64> {
        self.patches.iter().map(|p| p.reflectance).collect()
    }
}

/// cos θ_a cos θ_b / (π r²) between two oriented points; 0 when either faces away.
fn kernel(a: &Vec3, normal_a: &Vec3, b: &Vec3, normal_b: &Vec3) -> Result<f64> {
    let r = b - a;
    let dist2 = r.norm_squared();
    if dist2 == 0.0 {
        return Err(LightingError::Domain(
            "form factor between coincident points".into(),
        ));
    }
    let dist = dist2.sqrt();
    let cos_a = normal_a.dot(&r) / dist;
    let cos_b = -normal_b.dot(&r) / dist;
    if cos_a <= 0.0 || cos_b <= 0.0 {
        return Ok(0.0);
    }
    Ok(cos_a * cos_b / (PI * dist2))
}

/// Point-to-point form factor from `from` to `to`, centre to centre.
pub fn form_factor(from: &Patch, to: &Patch) -> Result<f64> {
    Ok(kernel(&from.centre, &from.normal, &to.centre, &to.normal)? * to.area)
}

/// Form factor from pre-computed sub-lattices of equal size on both patches.
fn form_factor_sampled(
    from: &Patch,
    from_pts: &[Vec3],
    to: &Patch,
    to_pts: &[Vec3],
) -> Result<f64> {
    let mut sum = 0.0;
    for a in from_pts {
        for b in to_pts {
            sum += kernel(a, &from.normal, b, &to.normal)?;
        }
    }
    Ok(sum * to.area / (from_pts.len() * to_pts.len()) as f64)
}

/// Kernel averaged over `order x order` sub-samples of both patches.
pub fn form_factor_integrated(from: &Patch, to: &Patch, order: usize) -> Result<f64> {
    if order == 0 {
        return Err(LightingError::config("quadrature", "must be >= 1"));
    }
    form_factor_sampled(
        from,
        &from.sample_points(order),
        to,
        &to.sample_points(order),
    )
}

/// Dense row-major `n x n` form-factor matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct FormFactorMatrix {
    n: usize,
    data: Vec<f64>,
}

impl FormFactorMatrix {
    /// Dense matrix with `quadrature x quadrature` sub-samples per patch.
    pub fn assemble(mesh: &PatchMesh, quadrature: usize) -> Result<Self> {
        if quadrature == 0 {
            return Err(LightingError::config("quadrature", "must be >= 1"));
        }
        let n = mesh.len();
        let samples: Vec<Vec<Vec3>> = mesh
            .patches
            .iter()
            .map(|p| p.sample_points(quadrature))
            .collect();
        let mut data = vec![0.0; n * n];
        for (i, pi) in mesh.patches.iter().enumerate() {
            for (j, pj) in mesh.patches.iter().enumerate() {
                // coplanar patches of one face never exchange flux
                if i != j && pi.surface != pj.surface {
                    data[i * n + j] = form_factor_sampled(pi, &samples[i], pj, &samples[j])?;
                }
            }
        }
        Ok(FormFactorMatrix { n, data })
    }

    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(LightingError::Data(format!(
                "form factor matrix needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(FormFactorMatrix { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }

    fn apply_row(&self, i: usize, b: &[f64]) -> f64 {
        self.row(i).iter().zip(b).map(|(f, b)| f * b).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiositySolution {
    /// Self-exitance per patch, lm/m².
    pub emitted: Vec<f64>,
    /// Converged radiosity per patch, lm/m².
    pub total: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

fn residual(ff: &FormFactorMatrix, reflectance: &[f64], emitted: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().cloned().fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    (0..b.len())
        .map(|i| (b[i] - (emitted[i] + reflectance[i] * ff.apply_row(i, b))).abs())
        .fold(0.0, f64::max)
        / scale
}

/// Gauss–Seidel solve of `B = E + diag(ρ) F B`.
pub fn solve_radiosity(
    ff: &FormFactorMatrix,
    reflectance: &[f64],
    emitted: &[f64],
    options: SolverOptions,
) -> Result<RadiositySolution> {
    let n = ff.size();
    if reflectance.len() != n || emitted.len() != n {
        return Err(LightingError::Data(format!(
            "expected {n} reflectances and exitances, got {} and {}",
            reflectance.len(),
            emitted.len()
        )));
    }
    if !(options.tolerance > 0.0) {
        return Err(LightingError::config("tolerance", "must be > 0"));
    }
    if let Some(rho) = reflectance.iter().find(|r| !(0.0..1.0).contains(*r)) {
        return Err(LightingError::config(
            "reflectance",
            format!("must lie in [0, 1), got {rho}"),
        ));
    }

    let mut b = emitted.to_vec();
    let mut res = f64::INFINITY;
    for iteration in 1..=options.max_iterations {
        for i in 0..n {
            b[i] = emitted[i] + reflectance[i] * ff.apply_row(i, &b);
        }
        res = residual(ff, reflectance, emitted, &b);
        if res <= options.tolerance {
            return Ok(RadiositySolution {
                emitted: emitted.to_vec(),
                total: b,
                iterations: iteration,
                residual: res,
            });
        }
    }
    Err(LightingError::NoConvergence {
        iterations: options.max_iterations,
        residual: res,
    })
}

/// Direct irradiance (lx) at each patch centre from all luminaires.
pub fn direct_irradiance(mesh: &PatchMesh, luminaires: &[Luminaire]) -> Result<Vec<f64>> {
    mesh.patches
        .iter()
        .map(|p| {
            luminaires.iter().try_fold(0.0, |acc, l| {
                Ok(acc + direct_illuminance(l, &p.centre, &p.normal)?)
            })
        })
        .collect()
}

/// Illuminance on a plane at `point` with unit normal `normal`, gathered
/// from patch radiosities with `quadrature x quadrature` samples per patch.
pub fn gather_illuminance(
    mesh: &PatchMesh,
    radiosity: &[f64],
    point: &Vec3,
    normal: &Vec3,
    quadrature: usize,
) -> f64 {
    let weight = 1.0 / (quadrature * quadrature) as f64;
    mesh.patches
        .iter()
        .zip(radiosity)
        .map(|(patch, b)| {
            let seen: f64 = patch
                .sample_points(quadrature)
                .iter()
                .map(|s| kernel(point, normal, s, &patch.normal).unwrap_or(0.0))
                .sum();
            b * seen * weight * patch.area
        })
        .sum()
}

/// Interreflected illuminance at each grid point.
pub fn oracle_interreflected_illuminance(
    mesh: &PatchMesh,
    solution: &RadiositySolution,
    grid: &MeasurementGrid,
    quadrature: usize,
) -> Vec<f64> {
    let normal = grid.normal();
    grid.points
        .iter()
        .map(|p| gather_illuminance(mesh, &solution.total, &p.position, &normal, quadrature))
        .collect()
}

/// Flux bookkeeping of a converged solution, all in lm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBalance {
    /// Direct flux landing on the room surfaces.
    pub injected: f64,
    pub absorbed: f64,
    /// Flux lost because point form-factor rows do not sum to exactly one.
    pub leakage: f64,
}

impl EnergyBalance {
    pub fn relative_imbalance(&self) -> f64 {
        (self.absorbed + self.leakage - self.injected).abs() / self.injected
    }
}

pub fn energy_balance(
    mesh: &PatchMesh,
    ff: &FormFactorMatrix,
    direct: &[f64],
    solution: &RadiositySolution,
) -> EnergyBalance {
    let b = &solution.total;
    let mut injected = 0.0;
    let mut absorbed = 0.0;
    let mut leakage = 0.0;
    for (i, patch) in mesh.patches.iter().enumerate() {
        let incident = direct[i] + ff.apply_row(i, b);
        injected += patch.area * direct[i];
        absorbed += patch.area * (1.0 - patch.reflectance) * incident;
        leakage += patch.area * b[i] * (1.0 - ff.row_sum(i));
    }
    EnergyBalance {
        injected,
        absorbed,
        leakage,
    }
}

/// Full oracle pass over a room lit by `luminaires`.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub mesh: PatchMesh,
    pub direct: Vec<f64>,
    pub solution: RadiositySolution,
    pub interreflected: Vec<f64>,
    pub energy: EnergyBalance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub subdivision: usize,
    pub quadrature: usize,
    pub solver: SolverOptions,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            subdivision: DEFAULT_SUBDIVISION,
            quadrature: DEFAULT_QUADRATURE,
            solver: SolverOptions::default(),
        }
    }
}

pub fn run_oracle(
    room: &Room,
    luminaires: &[Luminaire],
    emission: EmissionModel,
    grid: &MeasurementGrid,
    options: OracleOptions,
) -> Result<OracleRun> {
    let mesh = PatchMesh::from_room(room, options.subdivision)?;
    let ff = FormFactorMatrix::assemble(&mesh, options.quadrature)?;
    let sources: Vec<Luminaire> = luminaires
        .iter()
        .map(|l| l.with_emission_model(emission))
        .collect();
    let direct = direct_irradiance(&mesh, &sources)?;
    let reflectance = mesh.reflectances();
    let emitted: Vec<f64> = direct
        .iter()
        .zip(&reflectance)
        .map(|(h, r)| h * r)
        .collect();
    let solution = solve_radiosity(&ff, &reflectance, &emitted, options.solver)?;
    let interreflected =
        oracle_interreflected_illuminance(&mesh, &solution, grid, options.quadrature);
    let energy = energy_balance(&mesh, &ff, &direct, &solution);
    Ok(OracleRun {
        mesh,
        direct,
        solution,
        interreflected,
        energy,
    })
}
