//! `terraseg eval`: score predicted labels against ground truth.

use std::path::PathBuf;

use clap::Args;
use terraseg::io;
use terraseg::metrics::{
    cluster_metrics, ground_metrics, write_csv_report, write_json_summary, FrameRow,
};

use crate::manifest::RunManifest;
use crate::CliError;

/// Semantic class ids treated as ground-truth terrain in
/// `semantic_kitti` truth files: lane marking, road, parking, sidewalk,
/// other ground, terrain.
const SEMANTIC_KITTI_TERRAIN: [u16; 6] = [40, 44, 48, 49, 60, 72];

#[derive(Args)]
pub struct EvalArgs {
    /// Predicted label files or a directory of them.
    #[arg(long, required = true, num_args = 1..)]
    pub pred: Vec<PathBuf>,

    /// Ground-truth label files or a directory of them.
    #[arg(long, required = true, num_args = 1..)]
    pub truth: Vec<PathBuf>,

    /// Truth encoding: `raw` (0 = terrain, k = instance) or
    /// `semantic_kitti` (lower 16 bits class, upper 16 instance).
    #[arg(long, default_value = "raw")]
    pub truth_format: String,

    /// Output directory for report.csv and report.json.
    #[arg(long, default_value = "eval")]
    pub out: PathBuf,

    /// Segment-run manifest to join per-frame stage timings from.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

/// Splits a truth label file into (terrain mask, object ids).
fn decode_truth(raw: &[u32], format: &str) -> Result<(Vec<bool>, Vec<u32>), CliError> {
    match format {
        "raw" => Ok((raw.iter().map(|&v| v == 0).collect(), raw.to_vec())),
        "semantic_kitti" => {
            let terrain: Vec<bool> = raw
                .iter()
                .map(|&v| SEMANTIC_KITTI_TERRAIN.contains(&((v & 0xffff) as u16)))
                .collect();
            // Non-terrain points keep the full class+instance word as a
            // stable object identity.
            let objects = raw
                .iter()
                .zip(&terrain)
                .map(|(&v, &t)| if t { 0 } else { v.max(1) })
                .collect();
            Ok((terrain, objects))
        }
        other => Err(CliError::Input(format!(
            "unknown truth format `{other}` (expected raw or semantic_kitti)"
        ))),
    }
}

pub fn run(args: EvalArgs) -> Result<(), CliError> {
    let pred_files = super::collect_inputs(&args.pred, &["label"])?;
    let truth_files = super::collect_inputs(&args.truth, &["label"])?;
    if pred_files.len() != truth_files.len() {
        return Err(CliError::Input(format!(
            "frame count mismatch: {} predictions vs {} truth files",
            pred_files.len(),
            truth_files.len()
        )));
    }

    let timings: std::collections::HashMap<String, terraseg::StageTimings> = match &args.manifest {
        Some(path) => RunManifest::read(path)?
            .frames
            .into_iter()
            .map(|f| (f.frame_id, f.timings))
            .collect(),
        None => Default::default(),
    };

    let mut rows = Vec::new();
    for (pred_path, truth_path) in pred_files.iter().zip(&truth_files) {
        let frame_id = super::file_stem(pred_path);
        let pred = io::load_labels(pred_path, None)?;
        let truth = io::load_labels(truth_path, Some(pred.len()))?;

        let pred_terrain: Vec<bool> = pred.raw.iter().map(|&v| v == 0).collect();
        let (truth_terrain, truth_objects) = decode_truth(&truth.raw, &args.truth_format)?;

        let ground = ground_metrics(&pred_terrain, &truth_terrain)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        let clusters = cluster_metrics(&truth_objects, &pred.raw)
            .map_err(|e| CliError::Internal(e.to_string()))?;

        let t = timings.get(&frame_id);
        rows.push(FrameRow {
            frame_id,
            precision: ground.precision,
            recall: ground.recall,
            f1: ground.f1,
            accuracy: ground.accuracy,
            ose: clusters.ose.total,
            use_: clusters.use_.total,
            ground_ms: t.map(|t| t.ground_ms),
            cluster_ms: t.map(|t| t.cluster_ms),
            total_ms: t.map(|t| t.total_ms),
        });
    }

    super::ensure_dir(&args.out)?;
    let mut csv = std::fs::File::create(args.out.join("report.csv"))?;
    write_csv_report(&mut csv, &rows)?;
    let mut json = std::fs::File::create(args.out.join("report.json"))?;
    write_json_summary(&mut json, &rows)?;

    for row in &rows {
        println!(
            "{}: P={} R={} F1={} acc={} OSE={:.4} USE={:.4}",
            row.frame_id,
            fmt(row.precision),
            fmt(row.recall),
            fmt(row.f1),
            fmt(row.accuracy),
            row.ose,
            row.use_
        );
    }
    println!("report written to {}", args.out.display());
    Ok(())
}

fn fmt(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.4}")).unwrap_or_else(|| "n/a".into())
}
