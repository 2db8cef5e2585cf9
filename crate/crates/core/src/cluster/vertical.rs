//! Inter-ring label merging.
//!
//! For every node on the current ring, its column interval is widened by
//! the extension window and binary search locates the lower- and
//! upper-bound nodes of each previous ring that overlap it. Candidate
//! pairs are then tested point-by-point, walking outward from the column
//! overlap and stopping at the first pair under the vertical threshold.

use crate::scalar::Real;

use super::forest::LabelForest;
use super::ring::ClusterNode;

/// Binary search for the contiguous index range of `nodes` overlapping the
/// column interval `[lo, hi]`. `nodes` must be sorted by `idx_s` (the
/// horizontal update produces them in column order, which also sorts
/// `idx_e` because runs are disjoint). Every comparison is counted into
/// `probes`.
pub fn find_overlap_bounds<T: Real>(
    nodes: &[ClusterNode<T>],
    lo: usize,
    hi: usize,
    probes: &mut usize,
) -> Option<(usize, usize)> {
    if nodes.is_empty() || lo > hi {
        return None;
    }
    // First node whose interval ends at or after `lo`.
    let lower = binary_partition(nodes.len(), probes, |i| nodes[i].idx_e < lo);
    // One past the last node whose interval starts at or before `hi`.
    let upper = binary_partition(nodes.len(), probes, |i| nodes[i].idx_s <= hi);
    (lower < upper).then(|| (lower, upper - 1))
}

/// Index of the first element for which `pred` is false, assuming `pred`
/// is monotone (true prefix, false suffix). Counts predicate evaluations.
fn binary_partition(len: usize, probes: &mut usize, mut pred: impl FnMut(usize) -> bool) -> usize {
    let mut lo = 0usize;
    let mut hi = len;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        *probes += 1;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Member indices ordered outward from the member column nearest `anchor`,
/// produced by a two-pointer merge over the sorted member columns.
fn outward_order<T: Real>(node: &ClusterNode<T>, anchor: usize) -> Vec<usize> {
    let n = node.members.len();
    let split = node.members.partition_point(|(col, _)| *col < anchor);
    let mut order = Vec::with_capacity(n);
    let mut right = split;
    let mut left = split;
    while right < n || left > 0 {
        let right_dist = (right < n).then(|| node.members[right].0.abs_diff(anchor));
        let left_dist = (left > 0).then(|| node.members[left - 1].0.abs_diff(anchor));
        match (right_dist, left_dist) {
            (Some(r), Some(l)) if r <= l => {
                order.push(right);
                right += 1;
            }
            (Some(_), None) => {
                order.push(right);
                right += 1;
            }
            _ => {
                left -= 1;
                order.push(left);
            }
        }
    }
    order
}

/// Whether any point pair between the two nodes lies within `t_vert`.
///
/// Pairs are enumerated outward from the column-overlap center (or the
/// nearest facing indices when the intervals are disjoint) with an early
/// exit on the first hit, so the decision equals the exhaustive all-pairs
/// test.
pub fn edge_within<T: Real>(a: &ClusterNode<T>, b: &ClusterNode<T>, t_vert: T) -> bool {
    let lo = a.idx_s.max(b.idx_s);
    let hi = a.idx_e.min(b.idx_e);
    let (anchor_a, anchor_b) = if lo <= hi {
        let center = (lo + hi) / 2;
        (center, center)
    } else if a.idx_e < b.idx_s {
        (a.idx_e, b.idx_s)
    } else {
        (a.idx_s, b.idx_e)
    };
    for &i in &outward_order(a, anchor_a) {
        let pa = a.positions[i];
        for &j in &outward_order(b, anchor_b) {
            if pa.distance(b.positions[j]) < t_vert {
                return true;
            }
        }
    }
    false
}

/// Links the current ring's nodes against the previous `t_ring` rings.
pub fn vertical_update<T: Real>(
    rings: &[Vec<ClusterNode<T>>],
    current: usize,
    t_ring: usize,
    t_ext: usize,
    t_vert: T,
    forest: &mut LabelForest,
    probes: &mut usize,
) {
    if t_ring == 0 {
        return;
    }
    let first_prev = current.saturating_sub(t_ring);
    for node in &rings[current] {
        let lo = node.idx_s.saturating_sub(t_ext);
        let hi = node.idx_e + t_ext;
        for prev in (first_prev..current).rev() {
            let Some((from, to)) = find_overlap_bounds(&rings[prev], lo, hi, probes) else {
                continue;
            };
            for candidate in &rings[prev][from..=to] {
                if forest.find(candidate.label) == forest.find(node.label) {
                    continue;
                }
                if edge_within(node, candidate, t_vert) {
                    forest.union(node.label, candidate.label);
                }
            }
        }
    }
}
