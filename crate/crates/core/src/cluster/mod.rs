//! Above-ground object clustering stage.
//!
//! Obstacle points are projected onto a spherical grid; each ring is
//! turned into run-length nodes and linked horizontally (with circular
//! and skipped linkage), then vertically against the previous rings. The
//! union-find forest resolves every point to a dense cluster id.

mod forest;
mod projection;
mod ring;
mod vertical;

pub use forest::LabelForest;
pub use projection::{project, CellPoint, SphericalGrid};
pub use ring::{circular_linkage, horizontal_update, skipped_linkage, ClusterNode};
pub use vertical::{edge_within, find_overlap_bounds, vertical_update};

use std::collections::HashMap;

use crate::config::PipelineConfig;
use crate::math::Vec3;
use crate::scalar::{cast, Real};
use crate::types::PointCloud;

/// Clustering output, index-aligned with the input cloud.
#[derive(Debug, Clone)]
pub struct Clustering {
    /// Dense cluster id per point; 0 for terrain and unprojected points.
    pub cluster_ids: Vec<u32>,
    pub cluster_count: usize,
    /// Obstacle points dropped at projection (zero range).
    pub dropped: usize,
    /// Binary-search probe count accumulated by the vertical update.
    pub probes: usize,
}

/// Runs the full clustering stage over the points where `obstacle_mask`
/// is true.
pub fn cluster_obstacles<T: Real>(
    cloud: &PointCloud<T>,
    obstacle_mask: &[bool],
    cfg: &PipelineConfig,
) -> Clustering {
    let grid = project(cloud, obstacle_mask, cfg.proj_width, cfg.proj_height);
    let t_horz = cast::<T>(cfg.t_horz);
    let t_vert = cast::<T>(cfg.t_vert);

    let mut forest = LabelForest::new();
    let mut rings: Vec<Vec<ClusterNode<T>>> = Vec::with_capacity(cfg.proj_height);
    let mut probes = 0usize;

    for row in 0..cfg.proj_height {
        let nodes = horizontal_update(&grid, row, t_horz, &mut forest);
        if cfg.circular_linkage {
            circular_linkage(&nodes, t_horz, &mut forest);
        }
        skipped_linkage(&nodes, t_horz, cfg.t_skip, cfg.skip_dist_mode, &mut forest);
        rings.push(nodes);
        vertical_update(
            &rings,
            row,
            cfg.t_ring,
            cfg.t_ext,
            t_vert,
            &mut forest,
            &mut probes,
        );
    }

    let (cluster_ids, cluster_count) = resolve_labels(cloud.len(), &rings, &grid, &mut forest);
    Clustering {
        cluster_ids,
        cluster_count,
        dropped: grid.dropped.len(),
        probes,
    }
}

/// Flattens the union-find state into dense per-point cluster ids numbered
/// `1..=K` by first appearance in (ring, column) scan order. Collision
/// losers inherit the label of their cell's winner.
pub fn resolve_labels<T: Real>(
    point_count: usize,
    rings: &[Vec<ClusterNode<T>>],
    grid: &SphericalGrid<T>,
    forest: &mut LabelForest,
) -> (Vec<u32>, usize) {
    let mut ids = vec![0u32; point_count];
    let mut dense: HashMap<u32, u32> = HashMap::new();
    for ring in rings {
        for node in ring {
            let canonical = forest.find(node.label);
            let next = dense.len() as u32 + 1;
            let id = *dense.entry(canonical).or_insert(next);
            for &(_, point) in &node.members {
                ids[point as usize] = id;
            }
        }
    }
    for &(loser, row, col) in &grid.losers {
        if let Some(winner) = grid.cell(row, col) {
            ids[loser as usize] = ids[winner.point as usize];
        }
    }
    (ids, dense.len())
}

/// Per-cluster geometry summary.
#[derive(Debug, Clone)]
pub struct ClusterSummary {
    pub id: u32,
    pub points: usize,
    pub centroid: [f64; 3],
    pub bbox_min: [f64; 3],
    pub bbox_max: [f64; 3],
}

/// Aggregates centroid and bounding box per dense cluster id.
pub fn summarize_clusters<T: Real>(cloud: &PointCloud<T>, ids: &[u32]) -> Vec<ClusterSummary> {
    let mut map: HashMap<u32, ClusterSummary> = HashMap::new();
    for (p, &id) in cloud.points.iter().zip(ids) {
        if id == 0 {
            continue;
        }
        let pos: Vec3<f64> = Vec3::new(
            p.x.to_f64().unwrap_or(f64::NAN),
            p.y.to_f64().unwrap_or(f64::NAN),
            p.z.to_f64().unwrap_or(f64::NAN),
        );
        let entry = map.entry(id).or_insert(ClusterSummary {
            id,
            points: 0,
            centroid: [0.0; 3],
            bbox_min: [f64::INFINITY; 3],
            bbox_max: [f64::NEG_INFINITY; 3],
        });
        entry.points += 1;
        for (k, v) in [pos.x, pos.y, pos.z].into_iter().enumerate() {
            entry.centroid[k] += v;
            entry.bbox_min[k] = entry.bbox_min[k].min(v);
            entry.bbox_max[k] = entry.bbox_max[k].max(v);
        }
    }
    let mut out: Vec<ClusterSummary> = map.into_values().collect();
    for s in &mut out {
        for v in &mut s.centroid {
            *v /= s.points as f64;
        }
    }
    out.sort_by_key(|s| s.id);
    out
}
