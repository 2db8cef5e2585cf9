//! Scan points, clouds, and sensor poses.

use crate::math::{self, Vec3};
use crate::scalar::Real;

/// A single LiDAR return.
///
/// Coordinates are meters in the sensor frame. `intensity` is a unitless
/// reflectance in `[0, 1]` when the source provides one; `ring` is the
/// laser row index for sensors that report it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub intensity: Option<T>,
    pub ring: Option<u32>,
}

impl<T: Real> Point<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self {
            x,
            y,
            z,
            intensity: None,
            ring: None,
        }
    }

    #[inline]
    pub fn pos(&self) -> Vec3<T> {
        Vec3::new(self.x, self.y, self.z)
    }

    #[inline]
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// An ordered sequence of points.
///
/// Point order is preserved from ingestion; the index of a point is its
/// identity for every per-point label array produced downstream.
#[derive(Debug, Clone, Default)]
pub struct PointCloud<T> {
    pub points: Vec<Point<T>>,
    pub frame_id: String,
}

impl<T: Real> PointCloud<T> {
    pub fn new(points: Vec<Point<T>>, frame_id: impl Into<String>) -> Self {
        Self {
            points,
            frame_id: frame_id.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// 6-DoF sensor pose. Angles are radians, normalized into `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose<T> {
    roll: T,
    pitch: T,
    yaw: T,
    pub translation: [T; 3],
}

impl<T: Real> Pose<T> {
    pub fn new(roll: T, pitch: T, yaw: T, translation: [T; 3]) -> Self {
        Self {
            roll: math::normalize_angle(roll),
            pitch: math::normalize_angle(pitch),
            yaw: math::normalize_angle(yaw),
            translation,
        }
    }

    pub fn identity() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), [T::zero(); 3])
    }

    pub fn roll(&self) -> T {
        self.roll
    }

    pub fn pitch(&self) -> T {
        self.pitch
    }

    pub fn yaw(&self) -> T {
        self.yaw
    }
}

/// Rotates the cloud to the upright position using the pose's roll and
/// pitch: each point is taken through `Ry(-pitch) * Rx(-roll)`, undoing a
/// roll-then-pitch attitude. Yaw and translation are left untouched and
/// point order is preserved.
pub fn align_attitude<T: Real>(cloud: &PointCloud<T>, pose: &Pose<T>) -> PointCloud<T> {
    let roll = pose.roll();
    let pitch = pose.pitch();
    if roll == T::zero() && pitch == T::zero() {
        return cloud.clone();
    }
    let points = cloud
        .points
        .iter()
        .map(|p| {
            let r = math::rotate_y(math::rotate_x(p.pos(), -roll), -pitch);
            Point {
                x: r.x,
                y: r.y,
                z: r.z,
                intensity: p.intensity,
                ring: p.ring,
            }
        })
        .collect();
    PointCloud {
        points,
        frame_id: cloud.frame_id.clone(),
    }
}
