//! Box room, surface reflectances and the working-plane sampling lattice.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{LightingError, Result};
use crate::photometry::Vec3;

/// Interior surfaces of a box room. West is x = 0, south is y = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Surface {
    Ceiling,
    Floor,
    WallNorth,
    WallSouth,
    WallEast,
    WallWest,
}

impl Surface {
    pub const ALL: [Surface; 6] = [
        Surface::Ceiling,
        Surface::Floor,
        Surface::WallNorth,
        Surface::WallSouth,
        Surface::WallEast,
        Surface::WallWest,
    ];

    pub const WALLS: [Surface; 4] = [
        Surface::WallNorth,
        Surface::WallSouth,
        Surface::WallEast,
        Surface::WallWest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Surface::Ceiling => "ceiling",
            Surface::Floor => "floor",
            Surface::WallNorth => "wall_north",
            Surface::WallSouth => "wall_south",
            Surface::WallEast => "wall_east",
            Surface::WallWest => "wall_west",
        }
    }

    fn index(self) -> usize {
        Surface::ALL.iter().position(|s| *s == self).unwrap()
    }

    pub fn is_wall(self) -> bool {
        !matches!(self, Surface::Ceiling | Surface::Floor)
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Diffuse reflectance of each of the six surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reflectances {
    pub ceiling: f64,
    pub floor: f64,
    pub wall_north: f64,
    pub wall_south: f64,
    pub wall_east: f64,
    pub wall_west: f64,
}

impl Reflectances {
    pub fn uniform(rho: f64) -> Self {
        Self::new(rho, rho, rho)
    }

    pub fn new(ceiling: f64, floor: f64, walls: f64) -> Self {
        Reflectances {
            ceiling,
            floor,
            wall_north: walls,
            wall_south: walls,
            wall_east: walls,
            wall_west: walls,
        }
    }

    pub fn get(&self, surface: Surface) -> f64 {
        self.as_array()[surface.index()]
    }

    pub fn set(&mut self, surface: Surface, rho: f64) {
        match surface {
            Surface::Ceiling => self.ceiling = rho,
            Surface::Floor => self.floor = rho,
            Surface::WallNorth => self.wall_north = rho,
            Surface::WallSouth => self.wall_south = rho,
            Surface::WallEast => self.wall_east = rho,
            Surface::WallWest => self.wall_west = rho,
        }
    }

    pub fn absorption(&self, surface: Surface) -> f64 {
        1.0 - self.get(surface)
    }

    fn as_array(&self) -> [f64; 6] {
        [
            self.ceiling,
            self.floor,
            self.wall_north,
            self.wall_south,
            self.wall_east,
            self.wall_west,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Room {
    pub length_x: f64,
    pub length_y: f64,
    pub height: f64,
    pub reflectance: Reflectances,
}

impl Room {
    pub fn new(
        length_x: f64,
        length_y: f64,
        height: f64,
        reflectance: Reflectances,
    ) -> Result<Self> {
        for (name, v) in [
            ("room.length_x_m", length_x),
            ("room.length_y_m", length_y),
            ("room.height_m", height),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(LightingError::config(name, format!("must be > 0, got {v}")));
            }
        }
        for s in Surface::ALL {
            let rho = reflectance.get(s);
            if !(0.0..=1.0).contains(&rho) {
                return Err(LightingError::config(
                    format!("room.reflectance.{s}"),
                    format!("must lie in [0, 1], got {rho}"),
                ));
            }
        }
        Ok(Room {
            length_x,
            length_y,
            height,
            reflectance,
        })
    }

    pub fn area(&self, surface: Surface) -> f64 {
        match surface {
            Surface::Ceiling | Surface::Floor => self.length_x * self.length_y,
            Surface::WallNorth | Surface::WallSouth => self.length_x * self.height,
            Surface::WallEast | Surface::WallWest => self.length_y * self.height,
        }
    }

    pub fn total_area(&self) -> f64 {
        Surface::ALL.iter().map(|s| self.area(*s)).sum()
    }
}

/// Which surfaces enter the area-weighted mean reflectance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReflectancePolicy {
    /// The four vertical walls only.
    #[default]
    #[serde(alias = "vertical_walls_only")]
    Walls,
    /// All six interior surfaces.
    #[serde(alias = "area_weighted_all")]
    All,
}

impl ReflectancePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            ReflectancePolicy::Walls => "walls",
            ReflectancePolicy::All => "all",
        }
    }
}

impl fmt::Display for ReflectancePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReflectancePolicy {
    type Err = LightingError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "walls" | "vertical_walls_only" => Ok(ReflectancePolicy::Walls),
            "all" | "area_weighted_all" => Ok(ReflectancePolicy::All),
            other => Err(LightingError::config(
                "rho_policy",
                format!("unknown reflectance policy `{other}` (expected walls|all)"),
            )),
        }
    }
}

/// Area-weighted mean reflectance ρ_moy.
pub fn average_reflectance(room: &Room, policy: ReflectancePolicy) -> f64 {
    let surfaces: &[Surface] = match policy {
        ReflectancePolicy::Walls => &Surface::WALLS,
        ReflectancePolicy::All => &Surface::ALL,
    };
    let (weighted, area) = surfaces.iter().fold((0.0, 0.0), |(w, a), s| {
        let area = room.area(*s);
        (w + room.reflectance.get(*s) * area, a + area)
    });
    weighted / area
}

/// Room axis along which the row index `i` advances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowAxis {
    /// `i` steps along y, `j` along x.
    #[default]
    Y,
    /// `i` steps along x, `j` along y.
    X,
}

impl RowAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            RowAxis::Y => "y",
            RowAxis::X => "x",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub plane_height: f64,
    pub edge_gap: f64,
    pub count_x: usize,
    pub count_y: usize,
    pub row_axis: RowAxis,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    /// 1-based row index.
    pub i: usize,
    /// 1-based column index.
    pub j: usize,
    pub position: Vec3,
}

/// Regular lattice of evaluation points on a horizontal working plane.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGrid {
    pub plane_height: f64,
    pub edge_gap: f64,
    pub count_x: usize,
    pub count_y: usize,
    pub row_axis: RowAxis,
    pub spacing_x: f64,
    pub spacing_y: f64,
    pub points: Vec<GridPoint>,
}

impl MeasurementGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Upward unit normal of the working plane.
    pub fn normal(&self) -> Vec3 {
        Vec3::new(0.0, 0.0, 1.0)
    }

    pub fn rows(&self) -> usize {
        match self.row_axis {
            RowAxis::Y => self.count_y,
            RowAxis::X => self.count_x,
        }
    }

    pub fn cols(&self) -> usize {
        match self.row_axis {
            RowAxis::Y => self.count_x,
            RowAxis::X => self.count_y,
        }
    }

    /// Position in `points` of the (i, j) entry.
    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        if (1..=self.rows()).contains(&i) && (1..=self.cols()).contains(&j) {
            Some((i - 1) * self.cols() + (j - 1))
        } else {
            None
        }
    }
}

pub fn build_grid(room: &Room, spec: &GridSpec) -> Result<MeasurementGrid> {
    let GridSpec {
        plane_height,
        edge_gap,
        count_x,
        count_y,
        row_axis,
    } = *spec;
    if count_x < 2 {
        return Err(LightingError::config(
            "grid.count_x",
            format!("must be >= 2, got {count_x}"),
        ));
    }
    if count_y < 2 {
        return Err(LightingError::config(
            "grid.count_y",
            format!("must be >= 2, got {count_y}"),
        ));
    }
    if !(edge_gap.is_finite() && edge_gap > 0.0) {
        return Err(LightingError::config(
            "grid.edge_gap_m",
            format!("must be > 0, got {edge_gap}"),
        ));
    }
    let min_side = room.length_x.min(room.length_y);
    if 2.0 * edge_gap >= min_side {
        return Err(LightingError::config(
            "grid.edge_gap_m",
            format!("2 x {edge_gap} must be smaller than the shorter room side {min_side}"),
        ));
    }
    if !(plane_height > 0.0 && plane_height < room.height) {
        return Err(LightingError::config(
            "grid.plane_height_m",
            format!(
                "must lie strictly between 0 and room height {}, got {plane_height}",
                room.height
            ),
        ));
    }

    let spacing_x = (room.length_x - 2.0 * edge_gap) / (count_x - 1) as f64;
    let spacing_y = (room.length_y - 2.0 * edge_gap) / (count_y - 1) as f64;
    let x_at = |k: usize| edge_gap + k as f64 * spacing_x;
    let y_at = |k: usize| edge_gap + k as f64 * spacing_y;

    let (rows, cols) = match row_axis {
        RowAxis::Y => (count_y, count_x),
        RowAxis::X => (count_x, count_y),
    };
    let mut points = Vec::with_capacity(count_x * count_y);
    for i in 1..=rows {
        for j in 1..=cols {
            let (x, y) = match row_axis {
                RowAxis::Y => (x_at(j - 1), y_at(i - 1)),
                RowAxis::X => (x_at(i - 1), y_at(j - 1)),
            };
            points.push(GridPoint {
                i,
                j,
                position: Vec3::new(x, y, plane_height),
            });
        }
    }

    Ok(MeasurementGrid {
        plane_height,
        edge_gap,
        count_x,
        count_y,
        row_axis,
        spacing_x,
        spacing_y,
        points,
    })
}
