//! Traversable terrain model refinement and point labeling.
//!
//! Corner heights are re-estimated as a weighted average over the planes
//! of the traversable nodes touching each corner; every node whose three
//! corners received refined heights gets a refined plane rebuilt from
//! those corners, and points are labeled terrain/obstacle against the
//! refined planes.

use crate::config::PipelineConfig;
use crate::math::Vec3;
use crate::scalar::{cast, Real};
use crate::types::PointCloud;

use super::grid::{PlaneModel, TriGridField};
use super::search::Traversability;

/// Floor for the corner-to-mean xy distance in the weighting term, so a
/// mean sitting exactly on a corner contributes a finite weight.
fn distance_floor<T: Real>() -> T {
    cast::<T>(1e-6)
}

/// Weighted corner fitting followed by per-node plane refitting.
///
/// A corner's refined height is the `weight / xy-distance`-weighted
/// average of the contributing traversable nodes' plane heights at that
/// corner. Nodes (of any kind) whose three corners were all refined get a
/// refined plane; planes of non-traversable nodes without full corner
/// support are rejected.
pub fn refine_terrain<T: Real>(field: &mut TriGridField<T>, trav: &Traversability) {
    let floor = distance_floor::<T>();
    let mut numerator = vec![T::zero(); field.corners.len()];
    let mut denominator = vec![T::zero(); field.corners.len()];

    for (i, node) in field.nodes.iter().enumerate() {
        if !trav.traversable[i] {
            continue;
        }
        let Some(plane) = &node.plane else { continue };
        if plane.normal.z == T::zero() {
            continue;
        }
        for &corner in &node.vertex_corners {
            let (cx, cy) = field.corner_pos(corner);
            let height = plane.height_at(cx, cy);
            let dist = Vec3::new(cx - plane.mean.x, cy - plane.mean.y, T::zero())
                .norm()
                .max(floor);
            let term = node.weight / dist;
            if !(term.is_finite() && height.is_finite()) {
                continue;
            }
            numerator[corner] += height * term;
            denominator[corner] += term;
        }
    }

    for (corner, (num, den)) in field
        .corners
        .iter_mut()
        .zip(numerator.iter().zip(&denominator))
    {
        corner.refined_z = (*den > T::zero()).then(|| *num / *den);
    }

    let third = cast::<T>(1.0 / 3.0);
    for i in 0..field.nodes.len() {
        let [ia, ib, ic] = field.nodes[i].vertex_corners;
        let (Some(za), Some(zb), Some(zc)) = (
            field.corners[ia].refined_z,
            field.corners[ib].refined_z,
            field.corners[ic].refined_z,
        ) else {
            field.nodes[i].refined = None;
            continue;
        };
        let (xa, ya) = field.corner_pos(ia);
        let (xb, yb) = field.corner_pos(ib);
        let (xc, yc) = field.corner_pos(ic);
        let ca = Vec3::new(xa, ya, za);
        let cb = Vec3::new(xb, yb, zb);
        let cc = Vec3::new(xc, yc, zc);
        let (Some(u), Some(v)) = ((cb - ca).normalized(), (cc - ca).normalized()) else {
            field.nodes[i].refined = None;
            continue;
        };
        let Some(mut normal) = u.cross(v).normalized() else {
            field.nodes[i].refined = None;
            continue;
        };
        if normal.z < T::zero() {
            normal = -normal;
        }
        let mean = (ca + cb + cc).scaled(third);
        field.nodes[i].refined = Some(PlaneModel {
            normal,
            d: -normal.dot(mean),
            mean,
        });
    }

    for (i, node) in field.nodes.iter_mut().enumerate() {
        node.traversable = trav.traversable[i];
        node.region = trav.region[i];
    }
}

/// Labels every point: terrain when its node has a refined plane and the
/// signed plane distance is below `eps3`, obstacle otherwise (including
/// all overflow points and points in nodes without a refined plane).
pub fn label_points<T: Real>(
    field: &TriGridField<T>,
    cloud: &PointCloud<T>,
    cfg: &PipelineConfig,
) -> Vec<bool> {
    let eps3 = cast::<T>(cfg.eps3);
    cloud
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| match field.point_node[i] {
            Some(node) => match &field.nodes[node].refined {
                Some(plane) => plane.signed_distance(p.pos()) < eps3,
                None => false,
            },
            None => false,
        })
        .collect()
}

/// Writes the per-node debug CSV: index, kind, traversable flag, plane,
/// weight, and point count.
pub fn dump_nodes_csv<T: Real, W: std::io::Write>(
    field: &TriGridField<T>,
    out: &mut W,
) -> std::io::Result<()> {
    writeln!(
        out,
        "node_index,kind,traversable,region,s_x,s_y,s_z,d,weight,points"
    )?;
    for node in &field.nodes {
        if node.point_indices.is_empty() && node.plane.is_none() {
            continue;
        }
        let kind = match node.kind {
            super::grid::NodeKind::Terrain => "terrain",
            super::grid::NodeKind::Obstacle => "obstacle",
            super::grid::NodeKind::Unknown => "unknown",
        };
        let (sx, sy, sz, d) = match &node.plane {
            Some(p) => (
                p.normal.x.to_f64().unwrap_or(f64::NAN),
                p.normal.y.to_f64().unwrap_or(f64::NAN),
                p.normal.z.to_f64().unwrap_or(f64::NAN),
                p.d.to_f64().unwrap_or(f64::NAN),
            ),
            None => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            node.node_index,
            kind,
            node.traversable,
            node.region,
            sx,
            sy,
            sz,
            d,
            node.weight.to_f64().unwrap_or(f64::NAN),
            node.point_indices.len()
        )?;
    }
    Ok(())
}
