//! Randomized engine checks shared by the property suite and the acceptance run.

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use luxgrid::scene::{Reflectances, RowAxis};
use luxgrid::{
    average_reflectance, build_grid, direct_illuminance, evaluate_field, global_illuminance,
    DiffuseMode, EmissionModel, GridSpec, Luminaire, ModelConfig, ReflectancePolicy, Room, Vec3,
};

#[derive(Debug, Clone)]
pub struct RandomScene {
    pub room: Room,
    pub luminaires: Vec<Luminaire>,
    pub spec: GridSpec,
    pub model: ModelConfig,
}

fn emission() -> impl Strategy<Value = EmissionModel> {
    prop_oneof![
        Just(EmissionModel::Isotropic),
        Just(EmissionModel::Lambertian)
    ]
}

fn model() -> impl Strategy<Value = ModelConfig> {
    (
        emission(),
        prop_oneof![Just(ReflectancePolicy::Walls), Just(ReflectancePolicy::All)],
        prop_oneof![Just(DiffuseMode::Local), Just(DiffuseMode::RoomMean)],
    )
        .prop_map(|(emission, rho_policy, diffuse_mode)| ModelConfig {
            emission,
            rho_policy,
            diffuse_mode,
        })
}

pub fn scene() -> impl Strategy<Value = RandomScene> {
    (
        2.0f64..10.0,
        2.0f64..10.0,
        2.5f64..5.0,
        prop::array::uniform6(0.0f64..0.9),
        prop::collection::vec(
            (0.0f64..1.0, 0.0f64..1.0, 0.7f64..0.99, 100.0f64..5000.0),
            1..6,
        ),
        2usize..8,
        2usize..8,
        model(),
    )
        .prop_map(|(lx, ly, h, r, sources, nx, ny, model)| {
            let reflectance = Reflectances {
                ceiling: r[0],
                floor: r[1],
                wall_north: r[2],
                wall_south: r[3],
                wall_east: r[4],
                wall_west: r[5],
            };
            let room = Room::new(lx, ly, h, reflectance).unwrap();
            let luminaires = sources
                .iter()
                .enumerate()
                .map(|(k, (fx, fy, fz, i0))| {
                    Luminaire::new(
                        k as u32 + 1,
                        Vec3::new(fx * lx, fy * ly, fz * h),
                        i0 * std::f64::consts::PI,
                        *i0,
                        model.emission,
                    )
                    .unwrap()
                })
                .collect();
            let spec = GridSpec {
                plane_height: 0.8,
                edge_gap: 0.3,
                count_x: nx,
                count_y: ny,
                row_axis: RowAxis::Y,
            };
            RandomScene {
                room,
                luminaires,
                spec,
                model,
            }
        })
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn field_of(scene: &RandomScene, luminaires: &[Luminaire]) -> luxgrid::IlluminanceField {
    let grid = build_grid(&scene.room, &scene.spec).unwrap();
    let rho = average_reflectance(&scene.room, scene.model.rho_policy);
    evaluate_field(luminaires, &grid, rho, scene.model).unwrap()
}

/// Scaling every peak intensity by k scales every field value by k.
pub fn linearity(scene: &RandomScene, k: f64) -> Result<(), TestCaseError> {
    let base = field_of(scene, &scene.luminaires);
    let scaled: Vec<_> = scene
        .luminaires
        .iter()
        .map(|l| l.scaled(k).unwrap())
        .collect();
    let other = field_of(scene, &scaled);
    for (a, b) in [
        (&base.direct, &other.direct),
        (&base.diffuse, &other.diffuse),
        (&base.global, &other.global),
    ] {
        for (x, y) in a.iter().zip(b) {
            prop_assert!(rel_close(x * k, *y, 1e-12), "{} * {} != {}", x, k, y);
        }
    }
    Ok(())
}

/// Direct field of a union equals the sum of the parts.
pub fn superposition(scene: &RandomScene, split: usize) -> Result<(), TestCaseError> {
    let n = scene.luminaires.len();
    if n < 2 {
        return Ok(());
    }
    let cut = 1 + split % (n - 1);
    let (a, b) = scene.luminaires.split_at(cut);
    let whole = field_of(scene, &scene.luminaires);
    let fa = field_of(scene, a);
    let fb = field_of(scene, b);
    for k in 0..whole.len() {
        prop_assert!(rel_close(
            whole.direct[k],
            fa.direct[k] + fb.direct[k],
            1e-12
        ));
    }
    Ok(())
}

/// Four equal sources at the quarter points of the room give a global field
/// that is invariant under both grid mirror reflections.
pub fn symmetry(
    lx: f64,
    ly: f64,
    mount: f64,
    n: usize,
    rho: f64,
    model: ModelConfig,
) -> Result<(), TestCaseError> {
    let room = Room::new(lx, ly, 3.0, Reflectances::new(rho, rho * 0.5, rho)).unwrap();
    let luminaires: Vec<_> = [(0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75)]
        .iter()
        .enumerate()
        .map(|(k, (fx, fy))| {
            Luminaire::new(
                k as u32 + 1,
                Vec3::new(fx * lx, fy * ly, mount),
                2000.0,
                2000.0 / std::f64::consts::PI,
                model.emission,
            )
            .unwrap()
        })
        .collect();
    let scene = RandomScene {
        room,
        luminaires: luminaires.clone(),
        spec: GridSpec {
            plane_height: 0.8,
            edge_gap: 0.48,
            count_x: n,
            count_y: n,
            row_axis: RowAxis::Y,
        },
        model,
    };
    let field = field_of(&scene, &luminaires);
    let grid = &field.grid;
    let (rows, cols) = (grid.rows(), grid.cols());
    for p in &grid.points {
        let v = field.global[grid.index_of(p.i, p.j).unwrap()];
        let across = field.global[grid.index_of(rows + 1 - p.i, p.j).unwrap()];
        let along = field.global[grid.index_of(p.i, cols + 1 - p.j).unwrap()];
        prop_assert!(
            rel_close(v, across, 1e-9),
            "({}, {}) {} vs {}",
            p.i,
            p.j,
            v,
            across
        );
        prop_assert!(
            rel_close(v, along, 1e-9),
            "({}, {}) {} vs {}",
            p.i,
            p.j,
            v,
            along
        );
    }
    Ok(())
}

/// Global illuminance from one source never increases moving away from
/// its nadir along any horizontal ray.
pub fn monotone_decay(
    emission: EmissionModel,
    height: f64,
    azimuth: f64,
    mut radii: Vec<f64>,
    rho: f64,
) -> Result<(), TestCaseError> {
    let lum = Luminaire::new(
        1,
        Vec3::new(0.0, 0.0, height),
        1000.0,
        1000.0 / std::f64::consts::PI,
        emission,
    )
    .unwrap();
    let up = Vec3::new(0.0, 0.0, 1.0);
    radii.sort_by(f64::total_cmp);
    let mut previous = f64::INFINITY;
    for r in radii {
        let point = Vec3::new(r * azimuth.cos(), r * azimuth.sin(), 0.0);
        let e = global_illuminance(direct_illuminance(&lum, &point, &up).unwrap(), rho);
        prop_assert!(e <= previous, "E({}) = {} > {}", r, e, previous);
        previous = e;
    }
    Ok(())
}

/// Random (I, d, α, ρ) tuple: the direct term equals I cos α / d² and the
/// global term equals direct · (1 + ρ).
pub fn point_identity(
    i0: f64,
    d: f64,
    alpha: f64,
    phi: f64,
    rho: f64,
) -> Result<(), TestCaseError> {
    let lum = Luminaire::new(
        1,
        Vec3::new(1.0, 2.0, 3.0),
        i0 * std::f64::consts::PI,
        i0,
        EmissionModel::Isotropic,
    )
    .unwrap();
    let offset = Vec3::new(
        alpha.sin() * phi.cos(),
        alpha.sin() * phi.sin(),
        alpha.cos(),
    ) * d;
    let point = lum.position - offset;
    let up = Vec3::new(0.0, 0.0, 1.0);
    let direct = direct_illuminance(&lum, &point, &up).unwrap();
    let expected = i0 * alpha.cos() / (d * d);
    prop_assert!(
        rel_close(direct, expected, 1e-12),
        "direct {} vs {}",
        direct,
        expected
    );
    let global = global_illuminance(direct, rho);
    prop_assert!(rel_close(global, direct * (1.0 + rho), 1e-12));
    Ok(())
}

/// On a horizontal plane cos α = Δz / d; the Lambertian direct term is
/// I0 (Δz/d)² / d² for a nadir-aimed source.
pub fn cos_alpha_identity(
    source: (f64, f64, f64),
    target: (f64, f64),
    i0: f64,
) -> Result<(), TestCaseError> {
    let lum = Luminaire::new(
        1,
        Vec3::new(source.0, source.1, source.2),
        i0 * std::f64::consts::PI,
        i0,
        EmissionModel::Lambertian,
    )
    .unwrap();
    let point = Vec3::new(target.0, target.1, 0.8);
    let dz = source.2 - 0.8;
    let dx = target.0 - source.0;
    let dy = target.1 - source.1;
    let d = (dx * dx + dy * dy + dz * dz).sqrt();
    let cos_alpha = dz / d;
    let expected = i0 * cos_alpha * cos_alpha / (d * d);
    let direct = direct_illuminance(&lum, &point, &Vec3::new(0.0, 0.0, 1.0)).unwrap();
    prop_assert!(
        rel_close(direct, expected, 1e-12),
        "direct {} vs {}",
        direct,
        expected
    );
    Ok(())
}
