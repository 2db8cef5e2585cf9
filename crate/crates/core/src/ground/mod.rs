//! Traversable-ground segmentation stage.
//!
//! The cloud is encoded into a tri-grid field, a plane is fitted per node,
//! a breadth-first search collects the traversable nodes, the terrain
//! model is refined through weighted corner fitting, and finally every
//! point is labeled terrain or obstacle.

mod grid;
mod plane;
mod refine;
mod search;

pub use grid::{Corner, NodeKind, PlaneModel, TriGridField, TriGridNode};
pub use plane::{fit_node_planes, traversability_weight};
pub use refine::{dump_nodes_csv, label_points, refine_terrain};
pub use search::{lcc_edge, search_traversable, Traversability};

use crate::config::PipelineConfig;
use crate::scalar::Real;
use crate::types::PointCloud;

/// Output of the full ground stage.
#[derive(Debug)]
pub struct GroundSegmentation<T> {
    pub field: TriGridField<T>,
    /// Per-point terrain flag, index-aligned with the input cloud.
    pub terrain_mask: Vec<bool>,
    pub traversable_nodes: usize,
    pub regions: u32,
}

/// Runs the whole ground stage on an upright-aligned cloud.
pub fn detect_ground<T: Real>(
    cloud: &PointCloud<T>,
    cfg: &PipelineConfig,
) -> GroundSegmentation<T> {
    let mut field = TriGridField::build(cloud, cfg);
    fit_node_planes(&mut field, cloud, cfg);
    let trav = search_traversable(&field, cfg);
    refine_terrain(&mut field, &trav);
    let terrain_mask = label_points(&field, cloud, cfg);
    GroundSegmentation {
        terrain_mask,
        traversable_nodes: trav.count(),
        regions: trav.region.iter().copied().max().unwrap_or(0),
        field,
    }
}
