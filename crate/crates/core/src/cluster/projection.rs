//! Spherical range projection of the obstacle points.

use crate::math::Vec3;
use crate::scalar::{cast_usize, Real};
use crate::types::PointCloud;

/// One occupied projection cell.
#[derive(Debug, Clone, Copy)]
pub struct CellPoint<T> {
    pub point: u32,
    pub range: T,
    pub pos: Vec3<T>,
}

/// Row-major grid of at most one point per (ring, azimuth) cell.
#[derive(Debug, Clone)]
pub struct SphericalGrid<T> {
    pub width: usize,
    pub height: usize,
    cells: Vec<Option<CellPoint<T>>>,
    /// Points displaced from their cell by a nearer return, with the cell
    /// they fell into; they inherit that cell's final label.
    pub losers: Vec<(u32, usize, usize)>,
    /// Points at exactly zero range, dropped from the projection.
    pub dropped: Vec<u32>,
}

impl<T: Real> SphericalGrid<T> {
    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            cells: vec![None; width * height],
            losers: Vec::new(),
            dropped: Vec::new(),
        }
    }

    #[inline]
    pub fn cell(&self, row: usize, col: usize) -> Option<&CellPoint<T>> {
        self.cells[row * self.width + col].as_ref()
    }

    pub fn occupied(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// Places a point into a cell; on collision the nearer range wins and
    /// the displaced point is recorded as a loser. Equal ranges keep the
    /// earlier-inserted point.
    pub fn insert(&mut self, row: usize, col: usize, candidate: CellPoint<T>) {
        let slot = &mut self.cells[row * self.width + col];
        match slot {
            Some(existing) if candidate.range < existing.range => {
                self.losers.push((existing.point, row, col));
                *slot = Some(candidate);
            }
            Some(_) => self.losers.push((candidate.point, row, col)),
            None => *slot = Some(candidate),
        }
    }
}

/// Projects the masked points of `cloud` into a `width x height` grid by
/// azimuth and elevation.
///
/// The row comes from the sensor ring index when every selected point has
/// one that fits the grid; otherwise rows are uniform elevation bins over
/// the selected points' elevation span. Zero-range points are dropped and
/// counted.
pub fn project<T: Real>(
    cloud: &PointCloud<T>,
    mask: &[bool],
    width: usize,
    height: usize,
) -> SphericalGrid<T> {
    let mut grid = SphericalGrid::empty(width, height);
    let selected: Vec<u32> = (0..cloud.len())
        .filter(|&i| mask[i])
        .map(|i| i as u32)
        .collect();

    let use_rings = !selected.is_empty()
        && selected.iter().all(|&i| {
            cloud.points[i as usize]
                .ring
                .map(|r| (r as usize) < height)
                .unwrap_or(false)
        });

    let mut elevation_bounds: Option<(T, T)> = None;
    if !use_rings {
        for &i in &selected {
            let p = cloud.points[i as usize].pos();
            let horiz = p.norm_xy();
            if horiz == T::zero() && p.z == T::zero() {
                continue;
            }
            let elev = p.z.atan2(horiz);
            elevation_bounds = Some(match elevation_bounds {
                None => (elev, elev),
                Some((lo, hi)) => (lo.min(elev), hi.max(elev)),
            });
        }
    }

    let tau = cast::<T>(std::f64::consts::TAU);
    let pi = cast::<T>(std::f64::consts::PI);
    for &i in &selected {
        let p = cloud.points[i as usize].pos();
        let range = p.norm();
        if range == T::zero() {
            grid.dropped.push(i);
            continue;
        }
        let azimuth = p.y.atan2(p.x);
        let col_f = (azimuth + pi) / tau * cast_usize::<T>(width);
        let col = clamp_bin(col_f, width);

        let row = if use_rings {
            cloud.points[i as usize].ring.unwrap() as usize
        } else {
            let (lo, hi) = elevation_bounds.expect("selected points have elevations");
            let span = hi - lo;
            if span > T::zero() {
                let elev = p.z.atan2(p.norm_xy());
                clamp_bin((elev - lo) / span * cast_usize::<T>(height), height)
            } else {
                0
            }
        };
        grid.insert(
            row,
            col,
            CellPoint {
                point: i,
                range,
                pos: p,
            },
        );
    }
    grid
}

use crate::scalar::cast;

fn clamp_bin<T: Real>(f: T, bins: usize) -> usize {
    let idx = f.floor().to_isize().unwrap_or(0);
    idx.clamp(0, bins as isize - 1) as usize
}
