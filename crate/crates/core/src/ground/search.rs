//! Breadth-first traversable search over the tri-grid adjacency.

use std::collections::VecDeque;

use crate::config::PipelineConfig;
use crate::scalar::{cast, Real};

use super::grid::{NodeKind, PlaneModel, TriGridField};

/// Local convexity/concavity test between two fitted nodes.
///
/// True when the normals are similar enough for the node separation and
/// neither mean rises out of the other node's plane by more than the
/// `eps1` tolerance angle. Coincident means trivially pass.
pub fn lcc_edge<T: Real>(a: &PlaneModel<T>, b: &PlaneModel<T>, eps1: T, eps2: T) -> bool {
    let d_ab = b.mean - a.mean;
    let dist = d_ab.norm();
    if dist == T::zero() {
        return true;
    }
    let sin_eps1 = eps1.sin();
    a.normal.dot(b.normal).abs() > T::one() - (dist * eps2).sin()
        && b.normal.dot(-d_ab).abs() < dist * sin_eps1
        && a.normal.dot(d_ab).abs() < dist * sin_eps1
}

/// Result of the traversable search: per-node flags and 1-based region ids.
#[derive(Debug, Clone)]
pub struct Traversability {
    pub traversable: Vec<bool>,
    pub region: Vec<u32>,
    pub seeds: Vec<usize>,
}

impl Traversability {
    pub fn count(&self) -> usize {
        self.traversable.iter().filter(|t| **t).count()
    }
}

/// Prefers higher weight; within a 1e-9 weight tie, prefers the mean
/// closest to the sensor in xy.
fn better_seed<T: Real>((w_a, d_a): (T, T), (w_b, d_b): (T, T)) -> bool {
    let tie = cast::<T>(1e-9);
    if w_a > w_b + tie {
        return true;
    }
    if w_b > w_a + tie {
        return false;
    }
    d_a < d_b
}

/// Breadth-first search from the best terrain seed, expanding through
/// terrain neighbors whose connecting edge passes [`lcc_edge`]. Unknown
/// and obstacle nodes are never expanded through. With
/// `seed_multi_region` the search restarts from the best unvisited
/// terrain node until none remain, tagging each region.
pub fn search_traversable<T: Real>(
    field: &TriGridField<T>,
    cfg: &PipelineConfig,
) -> Traversability {
    let eps1 = cast::<T>(cfg.eps1);
    let eps2 = cast::<T>(cfg.eps2);
    let n = field.node_count();
    let mut out = Traversability {
        traversable: vec![false; n],
        region: vec![0; n],
        seeds: Vec::new(),
    };

    let mut region = 0u32;
    loop {
        let mut seed: Option<(usize, (T, T))> = None;
        for (i, node) in field.nodes.iter().enumerate() {
            if node.kind != NodeKind::Terrain || out.traversable[i] {
                continue;
            }
            let Some(plane) = &node.plane else { continue };
            let key = (node.weight, plane.mean.norm_xy());
            match &seed {
                Some((_, best)) if !better_seed(key, *best) => {}
                _ => seed = Some((i, key)),
            }
        }
        let Some((seed_idx, _)) = seed else { break };

        region += 1;
        out.seeds.push(seed_idx);
        out.traversable[seed_idx] = true;
        out.region[seed_idx] = region;

        let mut queue = VecDeque::new();
        queue.push_back(seed_idx);
        while let Some(current) = queue.pop_front() {
            let current_plane = field.nodes[current].plane.as_ref().expect("fitted");
            for neighbor in field.adjacency[current].iter().flatten() {
                let nb = &field.nodes[*neighbor];
                if out.traversable[*neighbor] || nb.kind != NodeKind::Terrain {
                    continue;
                }
                let Some(nb_plane) = &nb.plane else { continue };
                if lcc_edge(current_plane, nb_plane, eps1, eps2) {
                    out.traversable[*neighbor] = true;
                    out.region[*neighbor] = region;
                    queue.push_back(*neighbor);
                }
            }
        }

        if !cfg.seed_multi_region {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Vec3;

    fn plane(normal: (f64, f64, f64), mean: (f64, f64, f64)) -> PlaneModel<f64> {
        let normal = Vec3::new(normal.0, normal.1, normal.2);
        let mean = Vec3::new(mean.0, mean.1, mean.2);
        PlaneModel {
            normal,
            d: -normal.dot(mean),
            mean,
        }
    }

    #[test]
    fn coplanar_nodes_pass() {
        let a = plane((0.0, 0.0, 1.0), (0.0, 0.0, 0.0));
        let b = plane((0.0, 0.0, 1.0), (1.0, 0.0, 0.0));
        assert!(lcc_edge(&a, &b, 0.03, 0.1));
    }

    #[test]
    fn orthogonal_normals_fail_similarity() {
        // First conjunct: |s_a . s_b| = 0, threshold 1 - sin(0.1) ~ 0.9002.
        let a = plane((0.0, 0.0, 1.0), (0.0, 0.0, 0.0));
        let b = plane((1.0, 0.0, 0.0), (1.0, 0.0, 0.0));
        assert!(!lcc_edge(&a, &b, 0.03, 0.1));
    }

    #[test]
    fn vertical_step_fails_height_tolerance() {
        // |s_a . d| = 0.5 vs ||d|| sin(0.03) ~ 0.0335.
        let a = plane((0.0, 0.0, 1.0), (0.0, 0.0, 0.0));
        let b = plane((0.0, 0.0, 1.0), (1.0, 0.0, 0.5));
        let d: Vec3<f64> = Vec3::new(1.0, 0.0, 0.5);
        assert!((d.norm() * 0.03f64.sin() - 0.0335).abs() < 1e-3);
        assert!(!lcc_edge(&a, &b, 0.03, 0.1));
    }

    #[test]
    fn coincident_means_trivially_pass() {
        let a = plane((0.0, 0.0, 1.0), (1.0, 1.0, 0.0));
        let b = plane((1.0, 0.0, 0.0), (1.0, 1.0, 0.0));
        assert!(lcc_edge(&a, &b, 0.03, 0.1));
    }

    #[test]
    fn lcc_is_symmetric() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let mut sample = || {
                let n = Vec3::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(0.01..1.0),
                )
                .normalized()
                .unwrap();
                let m = (
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-10.0..10.0),
                    rng.gen_range(-2.0..2.0),
                );
                plane((n.x, n.y, n.z), m)
            };
            let a = sample();
            let b = sample();
            assert_eq!(lcc_edge(&a, &b, 0.03, 0.1), lcc_edge(&b, &a, 0.03, 0.1));
        }
    }
}
