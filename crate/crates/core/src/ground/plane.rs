//! Per-node plane fitting and classification.
//!
//! Each node with enough points gets an iterative PCA plane fit seeded
//! from its lowest points, a traversability weight derived from the
//! covariance eigenvalues, and a terrain/obstacle classification from the
//! plane inclination.

use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::math::{sym_eigen, SymMat3, Vec3};
use crate::scalar::{cast, cast_usize, Real};
use crate::types::PointCloud;

use super::grid::{NodeKind, PlaneModel, TriGridField, TriGridNode};

/// Eigenvalue below which the point distribution carries no usable plane
/// (coincident or collinear points).
fn degenerate_floor<T: Real>() -> T {
    cast::<T>(1e-12)
}

/// Floor applied to the smallest eigenvalue in the weight ratio so a
/// perfect plane gets a large finite weight instead of a division by zero.
fn lambda3_floor<T: Real>() -> T {
    cast::<T>(1e-9)
}

/// Traversability weight from descending eigenvalues:
/// `(cohesion + planarity) / linearity = l2 * (l1 + l2) / (l1 * l3)`.
pub fn traversability_weight<T: Real>(eigenvalues: [T; 3]) -> T {
    let [l1, l2, l3] = eigenvalues;
    let l3 = l3.max(lambda3_floor::<T>());
    l2 * (l1 + l2) / (l1 * l3)
}

struct PcaFit<T> {
    plane: PlaneModel<T>,
    eigenvalues: [T; 3],
}

/// One PCA pass: mean, covariance, smallest-eigenvalue direction.
fn pca_plane<T: Real>(points: &[Vec3<T>]) -> Option<PcaFit<T>> {
    let n = points.len();
    if n < 3 {
        return None;
    }
    let inv = T::one() / cast_usize::<T>(n);
    let mean = points
        .iter()
        .fold(Vec3::zero(), |acc, p| acc + *p)
        .scaled(inv);
    let cov = SymMat3::covariance(points.iter().copied(), mean);
    let (eigenvalues, eigenvectors) = sym_eigen(&cov);
    if eigenvalues[1] <= degenerate_floor::<T>() {
        return None;
    }
    let mut normal = eigenvectors[2];
    // Deterministic orientation: z positive, falling back to x then y for
    // exactly vertical planes.
    let flip = if normal.z != T::zero() {
        normal.z < T::zero()
    } else if normal.x != T::zero() {
        normal.x < T::zero()
    } else {
        normal.y < T::zero()
    };
    if flip {
        normal = -normal;
    }
    let d = -normal.dot(mean);
    Some(PcaFit {
        plane: PlaneModel { normal, d, mean },
        eigenvalues,
    })
}

/// Iterative ground fit for one node's points.
///
/// Seeds with the lowest-z 20% of the points (at least 3), refines three
/// times by keeping points within `eps3` of the current plane, then fits
/// once more on the final inlier set.
fn fit_points<T: Real>(points: &[Vec3<T>], eps3: T) -> Option<PcaFit<T>> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| {
        points[a]
            .z
            .partial_cmp(&points[b].z)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let seed_count = ((points.len() + 4) / 5).max(3).min(points.len());
    let mut ground: Vec<Vec3<T>> = order[..seed_count].iter().map(|&i| points[i]).collect();

    for _ in 0..3 {
        let fit = pca_plane(&ground)?;
        let next: Vec<Vec3<T>> = points
            .iter()
            .copied()
            .filter(|p| fit.plane.signed_distance(*p).abs() < eps3)
            .collect();
        if next.len() < 3 {
            break;
        }
        ground = next;
    }
    pca_plane(&ground)
}

/// Fits a plane in every node with at least `min_node_points` points and
/// classifies it. Nodes with too few points or a degenerate distribution
/// stay `Unknown`. Node fits are independent and run in parallel.
pub fn fit_node_planes<T: Real>(
    field: &mut TriGridField<T>,
    cloud: &PointCloud<T>,
    cfg: &PipelineConfig,
) {
    let eps3 = cast::<T>(cfg.eps3);
    let incline_cos = cast::<T>(cfg.incline_thresh_rad().cos());
    let min_points = cfg.min_node_points;

    field.nodes.par_iter_mut().for_each(|node| {
        fit_one_node(node, cloud, min_points, eps3, incline_cos);
    });
}

fn fit_one_node<T: Real>(
    node: &mut TriGridNode<T>,
    cloud: &PointCloud<T>,
    min_points: usize,
    eps3: T,
    incline_cos: T,
) {
    node.plane = None;
    node.kind = NodeKind::Unknown;
    node.weight = T::zero();
    node.eigenvalues = [T::zero(); 3];
    if node.point_indices.len() < min_points {
        return;
    }
    let points: Vec<Vec3<T>> = node
        .point_indices
        .iter()
        .map(|&i| cloud.points[i as usize].pos())
        .collect();
    let Some(fit) = fit_points(&points, eps3) else {
        return;
    };
    node.weight = traversability_weight(fit.eigenvalues);
    node.eigenvalues = fit.eigenvalues;
    node.kind = if fit.plane.normal.z >= incline_cos {
        NodeKind::Terrain
    } else {
        NodeKind::Obstacle
    };
    node.plane = Some(fit.plane);
}
