//! Two-stage segmentation of 3D LiDAR scans.
//!
//! Stage one detects traversable ground by encoding the scan into a
//! tri-grid field (a triangular tessellation of the xy-plane), fitting a
//! plane per cell, and flood-searching cells whose edges pass a local
//! convexity/concavity test. Stage two clusters the remaining above-ground
//! points on a spherical range projection, merging run-length nodes
//! horizontally (with circular and skipped linkage across gaps) and
//! vertically across rings via binary search over column intervals.
//!
//! The crate also ships the evaluation metrics used to assess both stages
//! (precision/recall/F1/accuracy for ground, over-/under-segmentation
//! entropy for clustering), a deterministic synthetic scan generator with
//! exact ground truth, and readers/writers for KITTI-style scan and label
//! files.
//!
//! All geometric code is generic over the scalar type via [`Real`]; the
//! aliases at the crate root pin the default `f64` pipeline.

pub mod cluster;
pub mod config;
pub mod ground;
pub mod io;
pub mod math;
pub mod metrics;
pub mod pipeline;
pub mod scalar;
pub mod synth;
pub mod types;

pub use config::{ConfigError, PipelineConfig, SkipDistanceMode};
pub use pipeline::{segment, SegmentationResult, StageTimings};
pub use scalar::Real;

/// Default-precision 3-vector.
pub type Vec3 = math::Vec3<f64>;
/// Default-precision scan point.
pub type Point = types::Point<f64>;
/// Default-precision point cloud.
pub type PointCloud = types::PointCloud<f64>;
/// Default-precision sensor pose.
pub type Pose = types::Pose<f64>;
/// Default-precision tri-grid field.
pub type TriGridField = ground::TriGridField<f64>;
/// Default-precision labeled synthetic scan.
pub type LabeledScan = synth::LabeledScan<f64>;
