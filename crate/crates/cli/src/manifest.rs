//! Run manifests: everything needed to reproduce a run.

use std::path::Path;

use serde::{Deserialize, Serialize};
use terraseg::{PipelineConfig, StageTimings};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Fully resolved configuration the run used.
    pub config: PipelineConfig,
    pub inputs: Vec<String>,
    pub frames: Vec<FrameRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FrameRecord {
    pub frame_id: String,
    pub input: String,
    pub output: Option<String>,
    pub points: usize,
    /// Non-finite records dropped at ingestion.
    pub dropped: usize,
    pub terrain_points: usize,
    pub clusters: usize,
    pub timings: StageTimings,
    /// Present when the frame failed; the run continues past it.
    pub error: Option<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: PipelineConfig, inputs: Vec<String>) -> Self {
        Self {
            tool: "terraseg".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
            inputs,
            frames: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(file, self)
            .map_err(|e| CliError::Internal(format!("manifest serialization: {e}")))?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let file = std::fs::File::open(path)?;
        serde_json::from_reader(file)
            .map_err(|e| CliError::Input(format!("manifest `{}`: {e}", path.display())))
    }
}
