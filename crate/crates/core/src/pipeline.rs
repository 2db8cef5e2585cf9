//! End-to-end segmentation of one scan.

use std::time::Instant;

use crate::cluster::{self, Clustering};
use crate::config::PipelineConfig;
use crate::ground::{self, GroundSegmentation};
use crate::scalar::Real;
use crate::types::{align_attitude, PointCloud, Pose};

/// Wall-clock stage durations in milliseconds.
#[derive(Debug, Clone, Copy, Default, serde::Serialize, serde::Deserialize)]
pub struct StageTimings {
    pub align_ms: f64,
    pub ground_ms: f64,
    pub cluster_ms: f64,
    pub total_ms: f64,
}

/// Per-point segmentation output.
///
/// `terrain_mask` and `cluster_ids` are index-aligned with the input
/// cloud; a point is either terrain (`true`, cluster id 0) or carries a
/// dense cluster id (0 only for obstacle points the projection dropped).
#[derive(Debug, Clone)]
pub struct SegmentationResult {
    pub terrain_mask: Vec<bool>,
    pub cluster_ids: Vec<u32>,
    pub cluster_count: usize,
    pub traversable_nodes: usize,
    pub timings: StageTimings,
}

impl SegmentationResult {
    /// Labels in the output file encoding: 0 = terrain, k >= 1 = cluster k.
    pub fn labels(&self) -> Vec<u32> {
        self.terrain_mask
            .iter()
            .zip(&self.cluster_ids)
            .map(|(&terrain, &id)| if terrain { 0 } else { id })
            .collect()
    }
}

/// Runs attitude alignment, ground detection, and obstacle clustering.
pub fn segment<T: Real>(
    cloud: &PointCloud<T>,
    pose: &Pose<T>,
    cfg: &PipelineConfig,
) -> SegmentationResult {
    let start = Instant::now();
    let aligned = align_attitude(cloud, pose);
    let align_ms = ms_since(start);

    let ground_start = Instant::now();
    let GroundSegmentation {
        terrain_mask,
        traversable_nodes,
        ..
    } = ground::detect_ground(&aligned, cfg);
    let ground_ms = ms_since(ground_start);

    let cluster_start = Instant::now();
    let obstacle_mask: Vec<bool> = terrain_mask.iter().map(|t| !t).collect();
    let Clustering {
        cluster_ids,
        cluster_count,
        ..
    } = cluster::cluster_obstacles(&aligned, &obstacle_mask, cfg);
    let cluster_ms = ms_since(cluster_start);

    SegmentationResult {
        terrain_mask,
        cluster_ids,
        cluster_count,
        traversable_nodes,
        timings: StageTimings {
            align_ms,
            ground_ms,
            cluster_ms,
            total_ms: ms_since(start),
        },
    }
}

fn ms_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}
