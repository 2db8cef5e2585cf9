//! Tri-grid field construction.
//!
//! The xy-plane is tiled with axis-aligned squares of side `tgf_resolution`
//! over `[-field_extent, field_extent]^2`; each square is split into four
//! triangles meeting at the square's center. Every in-extent point lands in
//! exactly one triangle; the assignment rule is half-open on the diagonals
//! so ties are deterministic.

use crate::config::PipelineConfig;
use crate::math::Vec3;
use crate::scalar::{cast, Real};
use crate::types::PointCloud;

/// Node classification after plane fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Terrain,
    Obstacle,
    Unknown,
}

/// A fitted plane together with the mean of the points it was fitted to.
///
/// The identity `normal . mean + d = 0` holds by construction.
#[derive(Debug, Clone, Copy)]
pub struct PlaneModel<T> {
    pub normal: Vec3<T>,
    pub d: T,
    pub mean: Vec3<T>,
}

impl<T: Real> PlaneModel<T> {
    /// Signed distance of a point from the plane (positive above).
    #[inline]
    pub fn signed_distance(&self, p: Vec3<T>) -> T {
        self.normal.dot(p) + self.d
    }

    /// Plane height at the given xy location. Requires `normal.z != 0`.
    #[inline]
    pub fn height_at(&self, x: T, y: T) -> T {
        -(self.normal.x * x + self.normal.y * y + self.d) / self.normal.z
    }
}

/// One triangular cell of the field.
#[derive(Debug, Clone)]
pub struct TriGridNode<T> {
    pub node_index: usize,
    pub vertex_corners: [usize; 3],
    pub point_indices: Vec<u32>,
    pub plane: Option<PlaneModel<T>>,
    /// Descending eigenvalues of the fitted covariance.
    pub eigenvalues: [T; 3],
    pub weight: T,
    pub kind: NodeKind,
    pub traversable: bool,
    /// 1-based traversable region id; 0 when not traversable.
    pub region: u32,
    pub refined: Option<PlaneModel<T>>,
}

impl<T: Real> TriGridNode<T> {
    fn empty(node_index: usize, vertex_corners: [usize; 3]) -> Self {
        Self {
            node_index,
            vertex_corners,
            point_indices: Vec::new(),
            plane: None,
            eigenvalues: [T::zero(); 3],
            weight: T::zero(),
            kind: NodeKind::Unknown,
            traversable: false,
            region: 0,
            refined: None,
        }
    }
}

/// Shared triangle corner.
#[derive(Debug, Clone)]
pub struct Corner<T> {
    pub x: T,
    pub y: T,
    /// Height after the weighted corner fit, if any traversable node
    /// contributed to this corner.
    pub refined_z: Option<T>,
}

/// Triangular-cell terrain graph over the xy-plane.
#[derive(Debug, Clone)]
pub struct TriGridField<T> {
    pub resolution: T,
    pub extent: T,
    /// Squares per side.
    pub cells: usize,
    pub nodes: Vec<TriGridNode<T>>,
    pub corners: Vec<Corner<T>>,
    /// Edge-sharing neighbors per node (3 for interior triangles).
    pub adjacency: Vec<[Option<usize>; 3]>,
    /// Node id per cloud point; `None` for out-of-extent points.
    pub point_node: Vec<Option<usize>>,
    /// Indices of out-of-extent points.
    pub overflow: Vec<u32>,
}

/// Triangle position within a square: east, north, west, south.
const TRI_EAST: usize = 0;
const TRI_NORTH: usize = 1;
const TRI_WEST: usize = 2;
const TRI_SOUTH: usize = 3;

impl<T: Real> TriGridField<T> {
    /// Builds the field and assigns every point of `cloud` to a node or to
    /// the overflow set.
    pub fn build(cloud: &PointCloud<T>, cfg: &PipelineConfig) -> Self {
        let resolution = cast::<T>(cfg.tgf_resolution);
        let extent = cast::<T>(cfg.field_extent);
        let cells = (cfg.field_extent * 2.0 / cfg.tgf_resolution)
            .ceil()
            .max(1.0) as usize;

        let lattice = (cells + 1) * (cells + 1);
        let corner_count = lattice + cells * cells;
        let mut corners = Vec::with_capacity(corner_count);
        for iy in 0..=cells {
            for ix in 0..=cells {
                corners.push(Corner {
                    x: -extent + cast_idx::<T>(ix) * resolution,
                    y: -extent + cast_idx::<T>(iy) * resolution,
                    refined_z: None,
                });
            }
        }
        let half = resolution * cast::<T>(0.5);
        for iy in 0..cells {
            for ix in 0..cells {
                corners.push(Corner {
                    x: -extent + cast_idx::<T>(ix) * resolution + half,
                    y: -extent + cast_idx::<T>(iy) * resolution + half,
                    refined_z: None,
                });
            }
        }

        let lattice_id = |ix: usize, iy: usize| iy * (cells + 1) + ix;
        let center_id = |ix: usize, iy: usize| lattice + iy * cells + ix;
        let node_id = |ix: usize, iy: usize, tri: usize| (iy * cells + ix) * 4 + tri;

        let mut nodes = Vec::with_capacity(cells * cells * 4);
        let mut adjacency = Vec::with_capacity(cells * cells * 4);
        for iy in 0..cells {
            for ix in 0..cells {
                let c = center_id(ix, iy);
                let sw = lattice_id(ix, iy);
                let se = lattice_id(ix + 1, iy);
                let ne = lattice_id(ix + 1, iy + 1);
                let nw = lattice_id(ix, iy + 1);
                // Corner order is counter-clockwise starting at the center.
                let tri_corners = [[c, se, ne], [c, ne, nw], [c, nw, sw], [c, sw, se]];
                for (tri, vc) in tri_corners.into_iter().enumerate() {
                    nodes.push(TriGridNode::empty(node_id(ix, iy, tri), vc));
                }
                adjacency.push([
                    Some(node_id(ix, iy, TRI_NORTH)),
                    Some(node_id(ix, iy, TRI_SOUTH)),
                    (ix + 1 < cells).then(|| node_id(ix + 1, iy, TRI_WEST)),
                ]);
                adjacency.push([
                    Some(node_id(ix, iy, TRI_EAST)),
                    Some(node_id(ix, iy, TRI_WEST)),
                    (iy + 1 < cells).then(|| node_id(ix, iy + 1, TRI_SOUTH)),
                ]);
                adjacency.push([
                    Some(node_id(ix, iy, TRI_NORTH)),
                    Some(node_id(ix, iy, TRI_SOUTH)),
                    (ix > 0).then(|| node_id(ix - 1, iy, TRI_EAST)),
                ]);
                adjacency.push([
                    Some(node_id(ix, iy, TRI_WEST)),
                    Some(node_id(ix, iy, TRI_EAST)),
                    (iy > 0).then(|| node_id(ix, iy - 1, TRI_NORTH)),
                ]);
            }
        }

        let mut field = Self {
            resolution,
            extent,
            cells,
            nodes,
            corners,
            adjacency,
            point_node: Vec::with_capacity(cloud.len()),
            overflow: Vec::new(),
        };

        for (i, p) in cloud.points.iter().enumerate() {
            match field.locate(p.x, p.y) {
                Some(node) => {
                    field.point_node.push(Some(node));
                    field.nodes[node].point_indices.push(i as u32);
                }
                None => {
                    field.point_node.push(None);
                    field.overflow.push(i as u32);
                }
            }
        }
        field
    }

    /// Node containing the xy location, or `None` outside the extent.
    pub fn locate(&self, x: T, y: T) -> Option<usize> {
        if !(x.is_finite() && y.is_finite()) || x.abs() > self.extent || y.abs() > self.extent {
            return None;
        }
        let fx = (x + self.extent) / self.resolution;
        let fy = (y + self.extent) / self.resolution;
        let ix = clamp_cell(fx, self.cells);
        let iy = clamp_cell(fy, self.cells);

        let half = self.resolution * cast::<T>(0.5);
        let cx = -self.extent + cast_idx::<T>(ix) * self.resolution + half;
        let cy = -self.extent + cast_idx::<T>(iy) * self.resolution + half;
        let u = x - cx;
        let v = y - cy;
        // Half-open diagonal rule; exhaustive, so every point (including
        // the square center) lands in exactly one triangle.
        let tri = if v > u && v >= -u {
            TRI_NORTH
        } else if v <= u && v > -u {
            TRI_EAST
        } else if v < u && v <= -u {
            TRI_SOUTH
        } else {
            TRI_WEST
        };
        Some((iy * self.cells + ix) * 4 + tri)
    }

    /// Corner xy position.
    pub fn corner_pos(&self, id: usize) -> (T, T) {
        (self.corners[id].x, self.corners[id].y)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

fn clamp_cell<T: Real>(f: T, cells: usize) -> usize {
    let idx = f.floor().to_isize().unwrap_or(0);
    idx.clamp(0, cells as isize - 1) as usize
}

#[inline]
fn cast_idx<T: Real>(i: usize) -> T {
    crate::scalar::cast_usize::<T>(i)
}
