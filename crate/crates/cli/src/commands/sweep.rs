//! `terraseg sweep`: segment scenario scenes across a parameter range.

use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use terraseg::metrics::{cluster_metrics, ground_metrics};
use terraseg::synth::{render, scenario};
use terraseg::{segment, LabeledScan, Pose};

use crate::CliError;

#[derive(Args)]
pub struct SweepArgs {
    /// Config field to sweep (its key=value name, e.g. tgf_resolution).
    #[arg(long)]
    pub param: String,

    /// Comma-separated values to try.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<String>,

    /// Comma-separated scenario names.
    #[arg(long, value_delimiter = ',', default_value = "urban")]
    pub scenes: Vec<String>,

    /// Output CSV path.
    #[arg(long, default_value = "sweep.csv")]
    pub out: PathBuf,

    /// Pipeline runs averaged per (value, scene) for the timing column.
    #[arg(long, default_value_t = 3)]
    pub repeat: usize,
}

pub fn run(args: SweepArgs) -> Result<(), CliError> {
    if args.repeat == 0 {
        return Err(CliError::Input("--repeat must be at least 1".into()));
    }
    let scenarios: Vec<_> = args
        .scenes
        .iter()
        .map(|name| {
            scenario(name).ok_or_else(|| CliError::Input(format!("unknown scene `{name}`")))
        })
        .collect::<Result<_, _>>()?;

    if let Some(parent) = args.out.parent() {
        if !parent.as_os_str().is_empty() {
            super::ensure_dir(parent)?;
        }
    }
    let mut out = std::fs::File::create(&args.out)?;
    writeln!(
        out,
        "param,value,scene,points,precision,recall,f1,accuracy,ose,use,clusters,ground_ms,cluster_ms,total_ms"
    )?;

    for value in &args.values {
        for s in &scenarios {
            let mut cfg = s.config.clone();
            cfg.set_field(&args.param, value)?;
            cfg.validate()?;

            let scan: LabeledScan =
                render(&s.spec).map_err(|e| CliError::Internal(e.to_string()))?;

            let mut result = None;
            let (mut ground_ms, mut cluster_ms, mut total_ms) = (0.0, 0.0, 0.0);
            for _ in 0..args.repeat {
                let r = segment(&scan.cloud, &Pose::identity(), &cfg);
                ground_ms += r.timings.ground_ms;
                cluster_ms += r.timings.cluster_ms;
                total_ms += r.timings.total_ms;
                result = Some(r);
            }
            let result = result.expect("repeat >= 1");
            let n = args.repeat as f64;

            let ground = ground_metrics(&result.terrain_mask, &scan.truth_terrain)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            let labels = result.labels();
            let clusters = cluster_metrics(&scan.truth_object, &labels)
                .map_err(|e| CliError::Internal(e.to_string()))?;

            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{:.6},{:.6},{},{:.3},{:.3},{:.3}",
                args.param,
                value,
                s.name,
                scan.cloud.len(),
                opt(ground.precision),
                opt(ground.recall),
                opt(ground.f1),
                opt(ground.accuracy),
                clusters.ose.total,
                clusters.use_.total,
                result.cluster_count,
                ground_ms / n,
                cluster_ms / n,
                total_ms / n,
            )?;
        }
    }
    println!("sweep written to {}", args.out.display());
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.6}")).unwrap_or_default()
}
