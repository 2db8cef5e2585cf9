//! Deterministic synthetic spinning-LiDAR scenes with exact ground truth.
//!
//! Scenes are lists of analytic primitives (bounded ground planes, ramps,
//! boxes, vertical cylinders). Each (ring, azimuth) ray is intersected
//! against every primitive; the nearest hit becomes a point carrying the
//! primitive's truth labels. No assets, no approximation: noise-free
//! scenes have exact geometry and a fixed seed reproduces a scan bit for
//! bit.

mod scenarios;

pub use scenarios::{scenario, scenario_suite, Scenario};

use rayon::prelude::*;

use rand::SeedableRng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::math::Vec3;
use crate::scalar::{cast, Real};
use crate::types::{Point, PointCloud};

/// Minimum ray parameter, so surfaces through the origin are never
/// self-hit.
const T_MIN: f64 = 1e-4;

/// Analytic scene primitive. Planes and ramps are terrain; boxes and
/// cylinders are obstacles and receive instance ids in declaration order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Primitive {
    /// Horizontal rectangle at height `z` spanning `[x0,x1] x [y0,y1]`.
    GroundRect {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        z: f64,
    },
    /// Inclined rectangle rising from `z = 0` at `x = x0` with the given
    /// slope, spanning `x in [x0, x1]`, `|y| <= y_half`.
    Ramp {
        x0: f64,
        x1: f64,
        y_half: f64,
        slope_deg: f64,
    },
    /// Axis-aligned box.
    Box { min: [f64; 3], max: [f64; 3] },
    /// Vertical cylinder standing on `z = 0`.
    Cylinder {
        x: f64,
        y: f64,
        radius: f64,
        height: f64,
    },
}

impl Primitive {
    pub fn is_terrain(&self) -> bool {
        matches!(self, Primitive::GroundRect { .. } | Primitive::Ramp { .. })
    }
}

/// Sensor model: `rings` elevation channels spread uniformly over
/// `[elev_min_deg, elev_max_deg]`, `azimuth_steps` columns over the full
/// circle, mounted `origin_z` above the ground, returns culled beyond
/// `max_range`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SensorSpec {
    pub origin_z: f64,
    pub rings: usize,
    pub azimuth_steps: usize,
    pub elev_min_deg: f64,
    pub elev_max_deg: f64,
    pub max_range: f64,
}

impl Default for SensorSpec {
    fn default() -> Self {
        Self {
            origin_z: 1.8,
            rings: 64,
            azimuth_steps: 1024,
            elev_min_deg: -25.0,
            elev_max_deg: 3.0,
            max_range: 28.0,
        }
    }
}

/// Complete scene description; the seed fully determines the rendered scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SceneSpec {
    pub name: String,
    pub primitives: Vec<Primitive>,
    pub sensor: SensorSpec,
    /// Gaussian range noise sigma in meters (0 = exact geometry).
    pub noise_sigma: f64,
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("degenerate sensor: {0}")]
    DegenerateSensor(String),
}

/// A rendered scan with exact per-point ground truth.
#[derive(Debug, Clone)]
pub struct LabeledScan<T> {
    pub cloud: PointCloud<T>,
    pub truth_terrain: Vec<bool>,
    /// Instance id per point; 0 for terrain points, >= 1 for obstacles.
    pub truth_object: Vec<u32>,
}

impl<T: Real> LabeledScan<T> {
    /// Truth encoded the way label files store it: 0 = terrain, otherwise
    /// the instance id.
    pub fn truth_labels(&self) -> Vec<u32> {
        self.truth_object.clone()
    }
}

struct Hit {
    t: f64,
    /// 0 for terrain, instance id >= 1 for obstacles.
    object: u32,
}

fn intersect(primitive: &Primitive, object: u32, o: Vec3<f64>, d: Vec3<f64>) -> Option<Hit> {
    match *primitive {
        Primitive::GroundRect { x0, x1, y0, y1, z } => {
            if d.z == 0.0 {
                return None;
            }
            let t = (z - o.z) / d.z;
            if t <= T_MIN {
                return None;
            }
            let p = o + d * t;
            (p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1).then_some(Hit { t, object })
        }
        Primitive::Ramp {
            x0,
            x1,
            y_half,
            slope_deg,
        } => {
            let s = slope_deg.to_radians().tan();
            let denom = d.z - s * d.x;
            if denom == 0.0 {
                return None;
            }
            let t = (s * (o.x - x0) - o.z) / denom;
            if t <= T_MIN {
                return None;
            }
            let p = o + d * t;
            (p.x >= x0 && p.x <= x1 && p.y.abs() <= y_half).then_some(Hit { t, object })
        }
        Primitive::Box { min, max } => {
            let mut t_enter = T_MIN;
            let mut t_exit = f64::INFINITY;
            for axis in 0..3 {
                let (ov, dv) = match axis {
                    0 => (o.x, d.x),
                    1 => (o.y, d.y),
                    _ => (o.z, d.z),
                };
                if dv == 0.0 {
                    if ov < min[axis] || ov > max[axis] {
                        return None;
                    }
                    continue;
                }
                let mut ta = (min[axis] - ov) / dv;
                let mut tb = (max[axis] - ov) / dv;
                if ta > tb {
                    std::mem::swap(&mut ta, &mut tb);
                }
                t_enter = t_enter.max(ta);
                t_exit = t_exit.min(tb);
                if t_enter > t_exit {
                    return None;
                }
            }
            Some(Hit { t: t_enter, object })
        }
        Primitive::Cylinder {
            x,
            y,
            radius,
            height,
        } => {
            let ox = o.x - x;
            let oy = o.y - y;
            let a = d.x * d.x + d.y * d.y;
            let mut best: Option<f64> = None;
            if a > 0.0 {
                let b = 2.0 * (ox * d.x + oy * d.y);
                let c = ox * ox + oy * oy - radius * radius;
                let disc = b * b - 4.0 * a * c;
                if disc >= 0.0 {
                    let sq = disc.sqrt();
                    for t in [(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)] {
                        if t > T_MIN {
                            let z = o.z + t * d.z;
                            if (0.0..=height).contains(&z) {
                                best = Some(best.map_or(t, |b: f64| b.min(t)));
                                break;
                            }
                        }
                    }
                }
            }
            // Top cap.
            if d.z != 0.0 {
                let t = (height - o.z) / d.z;
                if t > T_MIN {
                    let px = o.x + t * d.x - x;
                    let py = o.y + t * d.y - y;
                    if px * px + py * py <= radius * radius {
                        best = Some(best.map_or(t, |b: f64| b.min(t)));
                    }
                }
            }
            best.map(|t| Hit { t, object })
        }
    }
}

/// Casts every sensor ray against the scene and gathers the hits in
/// (ring, azimuth) order. Misses are omitted. Range noise, when enabled,
/// is drawn from a per-ray stream of the scene seed, so rendering is
/// deterministic under any parallelism.
pub fn render<T: Real>(spec: &SceneSpec) -> Result<LabeledScan<T>, SynthError> {
    let sensor = &spec.sensor;
    if sensor.rings < 2 || sensor.azimuth_steps < 2 {
        return Err(SynthError::DegenerateSensor(format!(
            "need >= 2 rings and >= 2 azimuth steps, got {}x{}",
            sensor.rings, sensor.azimuth_steps
        )));
    }
    if !(sensor.elev_min_deg < sensor.elev_max_deg) {
        return Err(SynthError::DegenerateSensor(format!(
            "elevation span [{}, {}] is empty",
            sensor.elev_min_deg, sensor.elev_max_deg
        )));
    }
    if !(sensor.max_range > 0.0) {
        return Err(SynthError::DegenerateSensor(
            "max_range must be positive".into(),
        ));
    }

    // Obstacles take instance ids 1.. in declaration order.
    let objects: Vec<u32> = {
        let mut next = 0u32;
        spec.primitives
            .iter()
            .map(|p| {
                if p.is_terrain() {
                    0
                } else {
                    next += 1;
                    next
                }
            })
            .collect()
    };

    let origin = Vec3::new(0.0, 0.0, sensor.origin_z);
    let elev_span = (sensor.elev_max_deg - sensor.elev_min_deg).to_radians();
    let elev_min = sensor.elev_min_deg.to_radians();
    let steps = sensor.azimuth_steps;

    let rows: Vec<Vec<(Point<T>, bool, u32)>> = (0..sensor.rings)
        .into_par_iter()
        .map(|ring| {
            let elevation = elev_min + elev_span * ring as f64 / (sensor.rings - 1) as f64;
            let (se, ce) = elevation.sin_cos();
            let mut row = Vec::new();
            for col in 0..steps {
                // Half-step offset keeps rays off the exact seam and axes.
                let azimuth = -std::f64::consts::PI
                    + (col as f64 + 0.5) * std::f64::consts::TAU / steps as f64;
                let (sa, ca) = azimuth.sin_cos();
                let dir = Vec3::new(ce * ca, ce * sa, se);
                let mut nearest: Option<Hit> = None;
                for (prim, &object) in spec.primitives.iter().zip(&objects) {
                    if let Some(hit) = intersect(prim, object, origin, dir) {
                        if nearest.as_ref().map_or(true, |n| hit.t < n.t) {
                            nearest = Some(hit);
                        }
                    }
                }
                let Some(hit) = nearest else { continue };
                let mut t = hit.t;
                if spec.noise_sigma > 0.0 {
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(spec.seed);
                    rng.set_stream((ring * steps + col) as u64);
                    let normal = rand_distr::Normal::new(0.0, spec.noise_sigma)
                        .expect("sigma validated non-negative");
                    t += normal.sample(&mut rng);
                }
                if t <= T_MIN || t > sensor.max_range {
                    continue;
                }
                let p = origin + dir * t;
                let mut point = Point::new(cast::<T>(p.x), cast::<T>(p.y), cast::<T>(p.z));
                point.ring = Some(ring as u32);
                row.push((point, hit.object == 0, hit.object));
            }
            row
        })
        .collect();

    let mut cloud = PointCloud::new(Vec::new(), spec.name.clone());
    let mut truth_terrain = Vec::new();
    let mut truth_object = Vec::new();
    for row in rows {
        for (point, terrain, object) in row {
            cloud.points.push(point);
            truth_terrain.push(terrain);
            truth_object.push(object);
        }
    }
    Ok(LabeledScan {
        cloud,
        truth_terrain,
        truth_object,
    })
}
