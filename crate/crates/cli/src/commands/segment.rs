//! `terraseg segment`: run the pipeline over scan files.

use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use terraseg::io::{self, ScanFormat};
use terraseg::{segment, Pose};

use crate::manifest::{FrameRecord, RunManifest};
use crate::{resolve_config, CliError};

#[derive(Args)]
pub struct SegmentArgs {
    /// Scan files or directories of scans.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,

    /// Scan format (kitti_bin | csv | ply_ascii); default from extension.
    #[arg(long)]
    pub format: Option<String>,

    /// Config file (flat key=value); falls back to $TERRASEG_CONFIG.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Config overrides, e.g. --set t_skip=0 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Output directory for label files and the manifest.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,

    /// Worker threads across frames (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,

    /// Sensor attitude as roll,pitch,yaw radians applied to every frame.
    #[arg(long, value_name = "R,P,Y")]
    pub pose: Option<String>,

    /// Also write a per-node tri-grid debug CSV per frame.
    #[arg(long)]
    pub dump_nodes: bool,

    /// Also write a per-cluster summary CSV per frame.
    #[arg(long)]
    pub summary: bool,
}

fn parse_pose(text: &str) -> Result<Pose, CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("--pose expects three numbers, got `{text}`")))?;
    if parts.len() != 3 || parts.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Input(format!(
            "--pose expects three finite numbers, got `{text}`"
        )));
    }
    Ok(Pose::new(parts[0], parts[1], parts[2], [0.0; 3]))
}

pub fn run(args: SegmentArgs) -> Result<(), CliError> {
    let cfg = resolve_config(args.config.as_ref(), &args.overrides)?;
    let pose = match &args.pose {
        Some(text) => parse_pose(text)?,
        None => Pose::identity(),
    };
    let format_override = match &args.format {
        Some(name) => Some(
            ScanFormat::parse(name)
                .ok_or_else(|| CliError::Input(format!("unknown scan format `{name}`")))?,
        ),
        None => None,
    };

    let files = super::collect_inputs(&args.inputs, &["bin", "csv", "ply"])?;
    super::ensure_dir(&args.out)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;

    struct FrameOutcome {
        record: FrameRecord,
        failed: bool,
    }

    let outcomes: Vec<FrameOutcome> = pool.install(|| {
        files
            .par_iter()
            .map(|path| {
                let frame_id = super::file_stem(path);
                let run_one = || -> Result<FrameRecord, CliError> {
                    let format = match format_override {
                        Some(f) => f,
                        None => ScanFormat::from_extension(path).ok_or_else(|| {
                            CliError::Input(format!(
                                "cannot infer format of `{}`; pass --format",
                                path.display()
                            ))
                        })?,
                    };
                    let loaded = io::load_scan(path, format)?;
                    let result = segment(&loaded.cloud, &pose, &cfg);
                    let labels = result.labels();
                    let out_path = args.out.join(format!("{frame_id}.label"));
                    io::save_labels(&out_path, &labels)?;
                    if args.dump_nodes {
                        let field = terraseg::ground::detect_ground(&loaded.cloud, &cfg).field;
                        let mut file =
                            std::fs::File::create(args.out.join(format!("{frame_id}.nodes.csv")))?;
                        terraseg::ground::dump_nodes_csv(&field, &mut file)?;
                    }
                    if args.summary {
                        let summaries =
                            terraseg::cluster::summarize_clusters(&loaded.cloud, &labels);
                        let mut text = String::from(
                            "id,points,cx,cy,cz,min_x,min_y,min_z,max_x,max_y,max_z\n",
                        );
                        for s in summaries {
                            text.push_str(&format!(
                                "{},{},{},{},{},{},{},{},{},{},{}\n",
                                s.id,
                                s.points,
                                s.centroid[0],
                                s.centroid[1],
                                s.centroid[2],
                                s.bbox_min[0],
                                s.bbox_min[1],
                                s.bbox_min[2],
                                s.bbox_max[0],
                                s.bbox_max[1],
                                s.bbox_max[2],
                            ));
                        }
                        std::fs::write(args.out.join(format!("{frame_id}.clusters.csv")), text)?;
                    }
                    Ok(FrameRecord {
                        frame_id: frame_id.clone(),
                        input: path.display().to_string(),
                        output: Some(out_path.display().to_string()),
                        points: loaded.cloud.len(),
                        dropped: loaded.dropped,
                        terrain_points: result.terrain_mask.iter().filter(|t| **t).count(),
                        clusters: result.cluster_count,
                        timings: result.timings,
                        error: None,
                    })
                };
                match run_one() {
                    Ok(record) => FrameOutcome {
                        record,
                        failed: false,
                    },
                    Err(err) => {
                        eprintln!("frame `{}` failed: {err}", path.display());
                        FrameOutcome {
                            record: FrameRecord {
                                frame_id,
                                input: path.display().to_string(),
                                output: None,
                                points: 0,
                                dropped: 0,
                                terrain_points: 0,
                                clusters: 0,
                                timings: terraseg::StageTimings::default(),
                                error: Some(err.to_string()),
                            },
                            failed: true,
                        }
                    }
                }
            })
            .collect()
    });

    let failures = outcomes.iter().filter(|o| o.failed).count();
    let mut manifest = RunManifest::new(
        "segment",
        cfg,
        files.iter().map(|p| p.display().to_string()).collect(),
    );
    manifest.frames = outcomes.into_iter().map(|o| o.record).collect();
    manifest.write(&args.out.join("manifest.json"))?;

    for frame in &manifest.frames {
        if frame.error.is_none() {
            println!(
                "{}: {} points, {} terrain, {} clusters, {:.1} ms",
                frame.frame_id,
                frame.points,
                frame.terrain_points,
                frame.clusters,
                frame.timings.total_ms
            );
        }
    }
    if failures > 0 {
        return Err(CliError::Input(format!(
            "{failures} of {} frames failed",
            manifest.frames.len()
        )));
    }
    Ok(())
}
