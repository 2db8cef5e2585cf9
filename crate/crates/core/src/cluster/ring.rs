//! Run-length nodes over one projection ring and the intra-ring linkage
//! tests (horizontal, circular, skipped).

use crate::config::SkipDistanceMode;
use crate::math::Vec3;
use crate::scalar::{cast_usize, Real};

use super::forest::LabelForest;
use super::projection::SphericalGrid;

/// A maximal run of horizontally chained points on one ring.
///
/// `idx_s..=idx_e` is the column interval; every occupied column inside it
/// belongs to this node and consecutive occupied members are closer than
/// the horizontal threshold.
#[derive(Debug, Clone)]
pub struct ClusterNode<T> {
    pub ring: usize,
    pub idx_s: usize,
    pub idx_e: usize,
    pub label: u32,
    /// Occupied member cells in ascending column order.
    pub members: Vec<(usize, u32)>,
    pub positions: Vec<Vec3<T>>,
}

impl<T: Real> ClusterNode<T> {
    pub fn start_point(&self) -> Vec3<T> {
        self.positions[0]
    }

    pub fn end_point(&self) -> Vec3<T> {
        *self.positions.last().expect("node is never empty")
    }

    pub fn centroid(&self) -> Vec3<T> {
        let sum = self.positions.iter().fold(Vec3::zero(), |acc, p| acc + *p);
        sum.scaled(T::one() / cast_usize::<T>(self.positions.len()))
    }
}

/// Scans one ring left to right, chaining consecutive occupied cells whose
/// 3D distance is below `t_horz` into nodes. Each node draws a fresh label.
pub fn horizontal_update<T: Real>(
    grid: &SphericalGrid<T>,
    ring: usize,
    t_horz: T,
    forest: &mut LabelForest,
) -> Vec<ClusterNode<T>> {
    let mut nodes: Vec<ClusterNode<T>> = Vec::new();
    let mut current: Option<ClusterNode<T>> = None;

    for col in 0..grid.width {
        let Some(cell) = grid.cell(ring, col) else {
            continue;
        };
        match current.as_mut() {
            Some(node) if node.end_point().distance(cell.pos) < t_horz => {
                node.idx_e = col;
                node.members.push((col, cell.point));
                node.positions.push(cell.pos);
            }
            _ => {
                if let Some(done) = current.take() {
                    nodes.push(done);
                }
                current = Some(ClusterNode {
                    ring,
                    idx_s: col,
                    idx_e: col,
                    label: forest.fresh(),
                    members: vec![(col, cell.point)],
                    positions: vec![cell.pos],
                });
            }
        }
    }
    if let Some(done) = current.take() {
        nodes.push(done);
    }
    nodes
}

/// Merges the ring's last and first nodes when the gap across the azimuth
/// seam is below `t_horz`.
pub fn circular_linkage<T: Real>(nodes: &[ClusterNode<T>], t_horz: T, forest: &mut LabelForest) {
    if nodes.len() < 2 {
        return;
    }
    let last = nodes.last().unwrap();
    let first = &nodes[0];
    if last.end_point().distance(first.start_point()) < t_horz {
        forest.union(last.label, first.label);
    }
}

/// Merges non-neighboring node pairs `(k, k + j)` for `2 <= j <= t_skip + 1`
/// whose distance (boundary points or centroids, per `mode`) is below
/// `t_horz`. Intermediate nodes keep their own labels.
pub fn skipped_linkage<T: Real>(
    nodes: &[ClusterNode<T>],
    t_horz: T,
    t_skip: usize,
    mode: SkipDistanceMode,
    forest: &mut LabelForest,
) {
    if t_skip == 0 {
        return;
    }
    for k in 0..nodes.len() {
        for j in 2..=(t_skip + 1) {
            let Some(target) = nodes.get(k + j) else {
                break;
            };
            let dist = match mode {
                SkipDistanceMode::Boundary => nodes[k].end_point().distance(target.start_point()),
                SkipDistanceMode::Centroid => nodes[k].centroid().distance(target.centroid()),
            };
            if dist < t_horz {
                forest.union(nodes[k].label, target.label);
            }
        }
    }
}
