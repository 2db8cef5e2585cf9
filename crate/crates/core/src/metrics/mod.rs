//! Segmentation quality metrics.
//!
//! Ground detection is scored with the standard confusion-matrix metrics
//! (terrain as the positive class). Clustering is scored with
//! over-/under-segmentation entropy: per ground-truth object, the Shannon
//! entropy (nats) of the predicted labels covering it, summed over
//! objects; and the role-swapped mirror per predicted cluster. Points
//! labeled terrain on either side are excluded from the entropies.

mod report;

pub use report::{write_csv_report, write_json_summary, Aggregate, FrameRow};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::scalar::Real;
use crate::types::PointCloud;

/// Confusion-matrix metrics for terrain detection.
///
/// Ratios are `None` when their denominator is empty (for example recall
/// with no positive ground-truth points) rather than being forced to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundEval {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub accuracy: Option<f64>,
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("prediction has {pred} entries but truth has {truth}")]
    LengthMismatch { pred: usize, truth: usize },
    #[error("euclidean oracle refused: {points} points exceed the {limit}-point O(n^2) guard")]
    OracleTooLarge { points: usize, limit: usize },
}

/// Scores a predicted terrain mask against ground truth.
pub fn ground_metrics(pred: &[bool], truth: &[bool]) -> Result<GroundEval, MetricsError> {
    if pred.len() != truth.len() {
        return Err(MetricsError::LengthMismatch {
            pred: pred.len(),
            truth: truth.len(),
        });
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0usize, 0usize, 0usize, 0usize);
    for (&p, &t) in pred.iter().zip(truth) {
        match (p, t) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    let ratio = |num: usize, den: usize| (den > 0).then(|| num as f64 / den as f64);
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = match (precision, recall) {
        (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
        (Some(_), Some(_)) => Some(0.0),
        _ => None,
    };
    let accuracy = ratio(tp + tn, tp + fp + tn + fn_);
    Ok(GroundEval {
        tp,
        fp,
        tn,
        fn_,
        precision,
        recall,
        f1,
        accuracy,
    })
}

/// Entropy breakdown for one side of the clustering evaluation.
#[derive(Debug, Clone, Default)]
pub struct EntropyBreakdown {
    /// Total entropy in nats (sum over groups).
    pub total: f64,
    /// Per-group (group id, entropy) rows.
    pub per_group: Vec<(u32, f64)>,
}

/// Clustering evaluation: over- and under-segmentation entropy.
#[derive(Debug, Clone, Default)]
pub struct ClusterEval {
    pub ose: EntropyBreakdown,
    pub use_: EntropyBreakdown,
}

/// Shannon entropy (nats) of the multiset of `labels[i]` for each group
/// `groups[i]`, summed over groups. Entries where either side is 0 are
/// excluded. Ordered maps keep the summation order (and hence the exact
/// floating-point result) independent of hashing state.
fn grouped_entropy(groups: &[u32], labels: &[u32]) -> EntropyBreakdown {
    let mut counts: BTreeMap<u32, BTreeMap<u32, usize>> = BTreeMap::new();
    for (&g, &l) in groups.iter().zip(labels) {
        if g == 0 || l == 0 {
            continue;
        }
        *counts.entry(g).or_default().entry(l).or_default() += 1;
    }
    let per_group: Vec<(u32, f64)> = counts
        .into_iter()
        .map(|(g, by_label)| {
            let n: usize = by_label.values().sum();
            let entropy: f64 = by_label
                .values()
                .map(|&c| {
                    let p = c as f64 / n as f64;
                    -p * p.ln()
                })
                .sum();
            // A lone label yields -0.0; normalize the sign.
            (g, entropy + 0.0)
        })
        .collect();
    EntropyBreakdown {
        // The empty sum folds from -0.0; keep zero positive here too.
        total: per_group.iter().map(|(_, e)| e).sum::<f64>() + 0.0,
        per_group,
    }
}

/// Over-segmentation entropy: for each ground-truth object, the entropy of
/// the predicted labels across its points, summed over objects.
pub fn over_segmentation_entropy(
    truth_objects: &[u32],
    pred: &[u32],
) -> Result<EntropyBreakdown, MetricsError> {
    if truth_objects.len() != pred.len() {
        return Err(MetricsError::LengthMismatch {
            pred: pred.len(),
            truth: truth_objects.len(),
        });
    }
    Ok(grouped_entropy(truth_objects, pred))
}

/// Under-segmentation entropy: the exact role-swap of
/// [`over_segmentation_entropy`], grouping by predicted cluster and
/// measuring the ground-truth labels inside each.
pub fn under_segmentation_entropy(
    truth_objects: &[u32],
    pred: &[u32],
) -> Result<EntropyBreakdown, MetricsError> {
    if truth_objects.len() != pred.len() {
        return Err(MetricsError::LengthMismatch {
            pred: pred.len(),
            truth: truth_objects.len(),
        });
    }
    Ok(grouped_entropy(pred, truth_objects))
}

/// Both entropies at once.
pub fn cluster_metrics(truth_objects: &[u32], pred: &[u32]) -> Result<ClusterEval, MetricsError> {
    Ok(ClusterEval {
        ose: over_segmentation_entropy(truth_objects, pred)?,
        use_: under_segmentation_entropy(truth_objects, pred)?,
    })
}

/// Point budget above which [`euclidean_oracle`] refuses to run.
pub const EUCLIDEAN_ORACLE_LIMIT: usize = 50_000;

/// Vanilla Euclidean clustering: connected components of the graph whose
/// edges join points within `radius`. O(n^2); refuses clouds beyond
/// [`EUCLIDEAN_ORACLE_LIMIT`]. Component ids are dense from 1 in order of
/// first appearance.
pub fn euclidean_oracle<T: Real>(
    cloud: &PointCloud<T>,
    radius: T,
) -> Result<Vec<u32>, MetricsError> {
    let n = cloud.len();
    if n > EUCLIDEAN_ORACLE_LIMIT {
        return Err(MetricsError::OracleTooLarge {
            points: n,
            limit: EUCLIDEAN_ORACLE_LIMIT,
        });
    }
    let r2 = radius * radius;
    let mut ids = vec![0u32; n];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for start in 0..n {
        if ids[start] != 0 {
            continue;
        }
        next += 1;
        ids[start] = next;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let pi = cloud.points[i].pos();
            for j in 0..n {
                if ids[j] == 0 && (cloud.points[j].pos() - pi).norm_sq() <= r2 {
                    ids[j] = next;
                    stack.push(j);
                }
            }
        }
    }
    Ok(ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::Point;

    #[test]
    fn perfect_prediction_scores_one_everywhere() {
        let truth = vec![true, false, true, true];
        let eval = ground_metrics(&truth, &truth).unwrap();
        assert_eq!(eval.precision, Some(1.0));
        assert_eq!(eval.recall, Some(1.0));
        assert_eq!(eval.f1, Some(1.0));
        assert_eq!(eval.accuracy, Some(1.0));
    }

    #[test]
    fn all_wrong_prediction_scores_zero() {
        let pred = vec![false; 10];
        let truth = vec![true; 10];
        let eval = ground_metrics(&pred, &truth).unwrap();
        assert_eq!(eval.recall, Some(0.0));
        assert_eq!(eval.accuracy, Some(0.0));
        // No positive predictions: precision undefined, not zero.
        assert_eq!(eval.precision, None);
    }

    #[test]
    fn hand_tallied_confusion_counts() {
        // 100 points, truth all terrain, 10 predicted obstacle.
        let truth = vec![true; 100];
        let mut pred = vec![true; 100];
        for p in pred.iter_mut().take(10) {
            *p = false;
        }
        let eval = ground_metrics(&pred, &truth).unwrap();
        assert_eq!((eval.tp, eval.fp, eval.tn, eval.fn_), (90, 0, 0, 10));
        assert_eq!(eval.accuracy, Some(0.9));
        assert_eq!(eval.recall, Some(0.9));
        assert_eq!(eval.precision, Some(1.0));
    }

    #[test]
    fn empty_truth_positives_flag_recall_absent() {
        let pred = vec![false, true];
        let truth = vec![false, false];
        let eval = ground_metrics(&pred, &truth).unwrap();
        assert_eq!(eval.recall, None);
        assert_eq!(eval.f1, None);
    }

    #[test]
    fn lone_label_object_contributes_zero_entropy() {
        let truth = vec![1, 1, 1, 1];
        let pred = vec![7, 7, 7, 7];
        let eval = cluster_metrics(&truth, &pred).unwrap();
        assert_eq!(eval.ose.total, 0.0);
        assert_eq!(eval.use_.total, 0.0);
    }

    #[test]
    fn symmetric_split_gives_ln_two() {
        let truth = vec![1, 1, 1, 1];
        let pred = vec![1, 1, 2, 2];
        let ose = over_segmentation_entropy(&truth, &pred).unwrap();
        assert!((ose.total - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn quarter_split_matches_hand_value() {
        // Object split 1/3: -(0.25 ln 0.25 + 0.75 ln 0.75) ~ 0.5623.
        let truth = vec![1, 1, 1, 1];
        let pred = vec![1, 2, 2, 2];
        let ose = over_segmentation_entropy(&truth, &pred).unwrap();
        let expected = -(0.25f64.ln() * 0.25 + 0.75f64.ln() * 0.75);
        assert!((ose.total - expected).abs() < 1e-12);
        assert!((ose.total - 0.5623).abs() < 1e-4);
    }

    #[test]
    fn engulfing_cluster_gives_ln_two_use() {
        let truth = vec![1, 1, 2, 2];
        let pred = vec![9, 9, 9, 9];
        let use_ = under_segmentation_entropy(&truth, &pred).unwrap();
        assert!((use_.total - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn seven_two_one_mix_matches_hand_value() {
        let mut truth = vec![1u32; 7];
        truth.extend(vec![2u32; 2]);
        truth.push(3);
        let pred = vec![4u32; 10];
        let use_ = under_segmentation_entropy(&truth, &pred).unwrap();
        let expected = -(0.7f64.ln() * 0.7 + 0.2f64.ln() * 0.2 + 0.1f64.ln() * 0.1);
        assert!((use_.total - expected).abs() < 1e-12);
        assert!((use_.total - 0.8018).abs() < 1e-4);
    }

    #[test]
    fn terrain_points_are_excluded_from_entropies() {
        // The obstacle part is perfectly clustered; terrain rows (zeros on
        // either side) must not contribute.
        let truth = vec![0, 0, 1, 1, 2];
        let pred = vec![5, 0, 3, 3, 0];
        let eval = cluster_metrics(&truth, &pred).unwrap();
        assert_eq!(eval.ose.total, 0.0);
        assert_eq!(eval.use_.total, 0.0);
    }

    #[test]
    fn empty_object_set_scores_positive_zero() {
        for (truth, pred) in [
            (vec![], vec![]),
            (vec![0u32, 0, 0], vec![0u32, 1, 1]),
            (vec![1u32, 1], vec![2u32, 2]),
        ] {
            let eval = cluster_metrics(&truth, &pred).unwrap();
            assert_eq!(eval.ose.total.to_bits(), 0, "OSE must be +0.0");
            assert_eq!(eval.use_.total.to_bits(), 0, "USE must be +0.0");
        }
    }

    #[test]
    fn two_blobs_make_two_components() {
        let mut points: Vec<Point<f64>> = (0..10)
            .map(|i| Point::new(0.1 * i as f64, 0.0, 0.0))
            .collect();
        points.extend((0..10).map(|i| Point::new(10.0 + 0.1 * i as f64, 0.0, 0.0)));
        let cloud = PointCloud::new(points, "t");
        let ids = euclidean_oracle(&cloud, 0.5).unwrap();
        assert_eq!(ids[..10], vec![1; 10][..]);
        assert_eq!(ids[10..], vec![2; 10][..]);
    }

    #[test]
    fn chain_within_radius_is_one_component() {
        let points: Vec<Point<f64>> = (0..20)
            .map(|i| Point::new(0.4 * i as f64, 0.0, 0.0))
            .collect();
        let cloud = PointCloud::new(points, "t");
        let ids = euclidean_oracle(&cloud, 0.5).unwrap();
        assert!(ids.iter().all(|&id| id == 1));
    }

    #[test]
    fn oracle_guard_refuses_oversized_clouds() {
        let cloud = PointCloud::new(vec![Point::new(0.0, 0.0, 0.0); 50_001], "t");
        assert!(matches!(
            euclidean_oracle(&cloud, 0.5),
            Err(MetricsError::OracleTooLarge { .. })
        ));
    }

    #[test]
    fn entropies_survive_bijective_label_renaming() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..200 {
            let n = rng.gen_range(1..150);
            let truth: Vec<u32> = (0..n).map(|_| rng.gen_range(0..8)).collect();
            let pred: Vec<u32> = (0..n).map(|_| rng.gen_range(0..8)).collect();
            let base = cluster_metrics(&truth, &pred).unwrap();
            assert!(base.ose.total >= 0.0 && base.use_.total >= 0.0);

            // Any bijection over the nonzero ids leaves both totals alone.
            let remap = |v: u32, offset: u32| {
                if v == 0 {
                    0
                } else {
                    (v * 7 + offset) % 1009 + 1
                }
            };
            let truth2: Vec<u32> = truth.iter().map(|&v| remap(v, 3)).collect();
            let pred2: Vec<u32> = pred.iter().map(|&v| remap(v, 5)).collect();
            let renamed = cluster_metrics(&truth2, &pred2).unwrap();
            assert!((base.ose.total - renamed.ose.total).abs() < 1e-12);
            assert!((base.use_.total - renamed.use_.total).abs() < 1e-12);

            // A group over k distinct labels contributes at most ln k.
            for &(cluster, entropy) in &base.use_.per_group {
                let mut labels: Vec<u32> = truth
                    .iter()
                    .zip(&pred)
                    .filter(|(&t, &p)| t != 0 && p == cluster)
                    .map(|(&t, _)| t)
                    .collect();
                labels.sort_unstable();
                labels.dedup();
                assert!(entropy <= (labels.len() as f64).ln() + 1e-12);
            }
        }
    }

    #[test]
    fn oracle_partition_matches_a_union_find_implementation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let n = rng.gen_range(2..200);
            let points: Vec<Point<f64>> = (0..n)
                .map(|_| {
                    Point::new(
                        rng.gen_range(-5.0..5.0),
                        rng.gen_range(-5.0..5.0),
                        rng.gen_range(-1.0..1.0),
                    )
                })
                .collect();
            let cloud = PointCloud::new(points, "t");
            let radius = rng.gen_range(0.2..1.5);
            let ids = euclidean_oracle(&cloud, radius).unwrap();

            // Second route: union-find over all in-radius pairs.
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(parent: &mut [usize], x: usize) -> usize {
                let mut x = x;
                while parent[x] != x {
                    parent[x] = parent[parent[x]];
                    x = parent[x];
                }
                x
            }
            for i in 0..n {
                for j in i + 1..n {
                    let d = (cloud.points[i].pos() - cloud.points[j].pos()).norm();
                    if d <= radius {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        parent[ri] = rj;
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(
                        ids[i] == ids[j],
                        find(&mut parent, i) == find(&mut parent, j),
                        "partition mismatch at radius {radius}"
                    );
                }
            }
        }
    }
}
