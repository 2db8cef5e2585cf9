//! `terraseg bench`: timing statistics for one scenario.

use clap::Args;
use terraseg::synth::{render, scenario};
use terraseg::{segment, LabeledScan, Pose};

use crate::CliError;

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "urban")]
    pub scene: String,

    /// Timed pipeline runs (after one warmup).
    #[arg(long, default_value_t = 20)]
    pub repeat: usize,
}

pub fn run(args: BenchArgs) -> Result<(), CliError> {
    if args.repeat == 0 {
        return Err(CliError::Input("--repeat must be at least 1".into()));
    }
    let s = scenario(&args.scene)
        .ok_or_else(|| CliError::Input(format!("unknown scene `{}`", args.scene)))?;
    let scan: LabeledScan = render(&s.spec).map_err(|e| CliError::Internal(e.to_string()))?;

    let _ = segment(&scan.cloud, &Pose::identity(), &s.config);
    let mut align = Vec::with_capacity(args.repeat);
    let mut ground = Vec::with_capacity(args.repeat);
    let mut cluster = Vec::with_capacity(args.repeat);
    let mut total = Vec::with_capacity(args.repeat);
    for _ in 0..args.repeat {
        let r = segment(&scan.cloud, &Pose::identity(), &s.config);
        align.push(r.timings.align_ms);
        ground.push(r.timings.ground_ms);
        cluster.push(r.timings.cluster_ms);
        total.push(r.timings.total_ms);
    }

    println!(
        "{}: {} points, {} runs",
        args.scene,
        scan.cloud.len(),
        args.repeat
    );
    for (name, samples) in [
        ("align", &align),
        ("ground", &ground),
        ("cluster", &cluster),
        ("total", &total),
    ] {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let std = (samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
        println!("  {name:8} {mean:8.3} ms  (std {std:.3})");
    }
    Ok(())
}
