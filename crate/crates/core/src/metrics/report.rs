//! Evaluation report writers: per-frame CSV rows and a JSON summary with
//! mean/standard-deviation aggregates over frames.

use std::io::Write;

use serde::Serialize;

/// One evaluated frame.
#[derive(Debug, Clone, Serialize)]
pub struct FrameRow {
    pub frame_id: String,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub accuracy: Option<f64>,
    pub ose: f64,
    pub use_: f64,
    pub ground_ms: Option<f64>,
    pub cluster_ms: Option<f64>,
    pub total_ms: Option<f64>,
}

/// Mean and population standard deviation of one metric over frames,
/// ignoring frames where it was undefined.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Aggregate {
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub frames: usize,
}

impl Aggregate {
    pub fn over(values: impl Iterator<Item = Option<f64>>) -> Self {
        let present: Vec<f64> = values.flatten().collect();
        if present.is_empty() {
            return Self::default();
        }
        let n = present.len() as f64;
        let mean = present.iter().sum::<f64>() / n;
        let var = present.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        Self {
            mean: Some(mean),
            std: Some(var.sqrt()),
            frames: present.len(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub frames: usize,
    pub precision: Aggregate,
    pub recall: Aggregate,
    pub f1: Aggregate,
    pub accuracy: Aggregate,
    pub ose: Aggregate,
    pub use_: Aggregate,
    pub total_ms: Aggregate,
}

impl Summary {
    pub fn over(rows: &[FrameRow]) -> Self {
        Self {
            frames: rows.len(),
            precision: Aggregate::over(rows.iter().map(|r| r.precision)),
            recall: Aggregate::over(rows.iter().map(|r| r.recall)),
            f1: Aggregate::over(rows.iter().map(|r| r.f1)),
            accuracy: Aggregate::over(rows.iter().map(|r| r.accuracy)),
            ose: Aggregate::over(rows.iter().map(|r| Some(r.ose))),
            use_: Aggregate::over(rows.iter().map(|r| Some(r.use_))),
            total_ms: Aggregate::over(rows.iter().map(|r| r.total_ms)),
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.6}")).unwrap_or_default()
}

/// Per-frame CSV rows followed by mean/std aggregate rows.
pub fn write_csv_report<W: Write>(out: &mut W, rows: &[FrameRow]) -> std::io::Result<()> {
    writeln!(
        out,
        "frame_id,precision,recall,f1,accuracy,ose,use,ground_ms,cluster_ms,total_ms"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{:.6},{:.6},{},{},{}",
            r.frame_id,
            opt(r.precision),
            opt(r.recall),
            opt(r.f1),
            opt(r.accuracy),
            r.ose,
            r.use_,
            opt(r.ground_ms),
            opt(r.cluster_ms),
            opt(r.total_ms),
        )?;
    }
    let summary = Summary::over(rows);
    let rows_of: [(&str, fn(&Aggregate) -> Option<f64>); 2] =
        [("mean", |a| a.mean), ("std", |a| a.std)];
    for (name, agg) in rows_of {
        writeln!(
            out,
            "{},{},{},{},{},{},{},,,{}",
            name,
            opt(agg(&summary.precision)),
            opt(agg(&summary.recall)),
            opt(agg(&summary.f1)),
            opt(agg(&summary.accuracy)),
            opt(agg(&summary.ose)),
            opt(agg(&summary.use_)),
            opt(agg(&summary.total_ms)),
        )?;
    }
    Ok(())
}

/// JSON document with the per-frame rows and the aggregate block.
pub fn write_json_summary<W: Write>(out: &mut W, rows: &[FrameRow]) -> std::io::Result<()> {
    #[derive(Serialize)]
    struct Doc<'a> {
        summary: Summary,
        frames: &'a [FrameRow],
    }
    let doc = Doc {
        summary: Summary::over(rows),
        frames: rows,
    };
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)
}
