//! Pipeline configuration.
//!
//! Every tunable threshold of both stages lives here. The defaults are the
//! published parameter set this implementation targets; `field_extent`,
//! the projection size, and the linkage toggles are artifact additions
//! with documented defaults.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which points the skipped-linkage distance test compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipDistanceMode {
    /// End point of the earlier node vs. start point of the later node.
    Boundary,
    /// Distance between the node centroids.
    Centroid,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config field `{field}` out of range: {reason}")]
    OutOfRange { field: &'static str, reason: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("config line {line}: expected key=value, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("config value for `{key}` does not parse: `{value}`")]
    BadValue { key: String, value: String },
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
}

/// All thresholds of the two segmentation stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    /// Tri-grid cell side length (m).
    pub tgf_resolution: f64,
    /// Max plane inclination for a terrain node (degrees).
    pub incline_thresh: f64,
    /// Minimum point count for a node to be fitted.
    pub min_node_points: usize,
    /// Node-mean height tolerance angle for edge traversability (radians).
    pub eps1: f64,
    /// Normal-similarity relaxation per meter of node separation (radians/m).
    pub eps2: f64,
    /// Point-to-plane distance threshold for the terrain label (m).
    pub eps3: f64,
    /// Horizontal merge threshold between consecutive projected points (m).
    pub t_horz: f64,
    /// Max number of intermediate nodes the skipped linkage may bridge.
    pub t_skip: usize,
    /// How many previous rings the vertical update searches (0 disables it).
    pub t_ring: usize,
    /// Inter-ring point distance threshold for a vertical merge (m).
    pub t_vert: f64,
    /// Column extension applied to a node's interval before bound search.
    pub t_ext: usize,
    /// Spherical projection width (azimuth columns).
    pub proj_width: usize,
    /// Spherical projection height (elevation rows).
    pub proj_height: usize,
    /// Half-width of the square tri-grid coverage (m).
    pub field_extent: f64,
    /// Restart the traversable search from every unvisited terrain node.
    pub seed_multi_region: bool,
    /// Merge a ring's last and first nodes across the azimuth seam.
    pub circular_linkage: bool,
    /// Distance definition used by the skipped linkage.
    pub skip_dist_mode: SkipDistanceMode,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            tgf_resolution: 8.0,
            incline_thresh: 30.0,
            min_node_points: 10,
            eps1: 0.03,
            eps2: 0.1,
            eps3: 0.1,
            t_horz: 0.3,
            t_skip: 10,
            t_ring: 5,
            t_vert: 0.5,
            t_ext: 100,
            proj_width: 1024,
            proj_height: 64,
            field_extent: 100.0,
            seed_multi_region: false,
            circular_linkage: true,
            skip_dist_mode: SkipDistanceMode::Boundary,
        }
    }
}

impl PipelineConfig {
    /// Checks every field against its admissible range.
    pub fn validate(&self) -> Result<(), ConfigError> {
        fn positive(field: &'static str, v: f64) -> Result<(), ConfigError> {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::OutOfRange {
                    field,
                    reason: format!("must be a positive finite length, got {v}"),
                });
            }
            Ok(())
        }
        positive("tgf_resolution", self.tgf_resolution)?;
        positive("t_horz", self.t_horz)?;
        positive("t_vert", self.t_vert)?;
        positive("field_extent", self.field_extent)?;
        positive("eps1", self.eps1)?;
        positive("eps2", self.eps2)?;
        positive("eps3", self.eps3)?;
        if !(self.incline_thresh > 0.0 && self.incline_thresh < 90.0) {
            return Err(ConfigError::OutOfRange {
                field: "incline_thresh",
                reason: format!("must lie in (0, 90) degrees, got {}", self.incline_thresh),
            });
        }
        if self.min_node_points < 3 {
            return Err(ConfigError::OutOfRange {
                field: "min_node_points",
                reason: format!(
                    "plane fitting needs at least 3 points, got {}",
                    self.min_node_points
                ),
            });
        }
        if self.proj_width < 2 {
            return Err(ConfigError::OutOfRange {
                field: "proj_width",
                reason: format!("must be >= 2, got {}", self.proj_width),
            });
        }
        if self.proj_height < 2 {
            return Err(ConfigError::OutOfRange {
                field: "proj_height",
                reason: format!("must be >= 2, got {}", self.proj_height),
            });
        }
        Ok(())
    }

    /// Incline threshold in radians.
    pub fn incline_thresh_rad(&self) -> f64 {
        self.incline_thresh.to_radians()
    }

    /// Parses the flat `key=value` config format. Blank lines and lines
    /// starting with `#` are ignored; unknown keys are rejected.
    pub fn from_key_values(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Malformed {
                line: lineno + 1,
                text: line.to_string(),
            })?;
            cfg.set_field(key.trim(), value.trim())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        Self::from_key_values(&std::fs::read_to_string(path)?)
    }

    /// Sets one field by its config-file name. Used by the file parser and
    /// by parameter sweeps.
    pub fn set_field(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn parse<V: std::str::FromStr>(key: &str, value: &str) -> Result<V, ConfigError> {
            value.parse().map_err(|_| ConfigError::BadValue {
                key: key.to_string(),
                value: value.to_string(),
            })
        }
        match key {
            "tgf_resolution" => self.tgf_resolution = parse(key, value)?,
            "incline_thresh" => self.incline_thresh = parse(key, value)?,
            "min_node_points" => self.min_node_points = parse(key, value)?,
            "eps1" => self.eps1 = parse(key, value)?,
            "eps2" => self.eps2 = parse(key, value)?,
            "eps3" => self.eps3 = parse(key, value)?,
            "t_horz" => self.t_horz = parse(key, value)?,
            "t_skip" => self.t_skip = parse(key, value)?,
            "t_ring" => self.t_ring = parse(key, value)?,
            "t_vert" => self.t_vert = parse(key, value)?,
            "t_ext" => self.t_ext = parse(key, value)?,
            "proj_width" => self.proj_width = parse(key, value)?,
            "proj_height" => self.proj_height = parse(key, value)?,
            "field_extent" => self.field_extent = parse(key, value)?,
            "seed_multi_region" => self.seed_multi_region = parse(key, value)?,
            "circular_linkage" => self.circular_linkage = parse(key, value)?,
            "skip_dist_mode" => {
                self.skip_dist_mode = match value {
                    "boundary" => SkipDistanceMode::Boundary,
                    "centroid" => SkipDistanceMode::Centroid,
                    _ => {
                        return Err(ConfigError::BadValue {
                            key: key.to_string(),
                            value: value.to_string(),
                        })
                    }
                }
            }
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Serializes to the flat `key=value` format, keys sorted.
    pub fn to_key_values(&self) -> String {
        let mut map = BTreeMap::new();
        map.insert("tgf_resolution", self.tgf_resolution.to_string());
        map.insert("incline_thresh", self.incline_thresh.to_string());
        map.insert("min_node_points", self.min_node_points.to_string());
        map.insert("eps1", self.eps1.to_string());
        map.insert("eps2", self.eps2.to_string());
        map.insert("eps3", self.eps3.to_string());
        map.insert("t_horz", self.t_horz.to_string());
        map.insert("t_skip", self.t_skip.to_string());
        map.insert("t_ring", self.t_ring.to_string());
        map.insert("t_vert", self.t_vert.to_string());
        map.insert("t_ext", self.t_ext.to_string());
        map.insert("proj_width", self.proj_width.to_string());
        map.insert("proj_height", self.proj_height.to_string());
        map.insert("field_extent", self.field_extent.to_string());
        map.insert("seed_multi_region", self.seed_multi_region.to_string());
        map.insert("circular_linkage", self.circular_linkage.to_string());
        map.insert(
            "skip_dist_mode",
            match self.skip_dist_mode {
                SkipDistanceMode::Boundary => "boundary".to_string(),
                SkipDistanceMode::Centroid => "centroid".to_string(),
            },
        );
        let mut out = String::new();
        for (k, v) in map {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        }
        out
    }
}
