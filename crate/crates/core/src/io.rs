//! Scan and label file formats.
//!
//! Scans: KITTI binary (consecutive little-endian `f32` x/y/z/intensity
//! records), CSV with an `x,y,z[,intensity][,ring]` header, and ASCII PLY.
//! Labels: one little-endian `u32` per point. For ingested ground truth
//! the lower 16 bits are a class id and the upper 16 an instance id; for
//! segmentation output the whole word is the cluster id (0 = terrain).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::types::{Point, PointCloud};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanFormat {
    KittiBin,
    Csv,
    PlyAscii,
}

impl ScanFormat {
    /// Picks a format from a file extension (`bin`, `csv`, `ply`).
    pub fn from_extension(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "bin" => Some(Self::KittiBin),
            "csv" => Some(Self::Csv),
            "ply" => Some(Self::PlyAscii),
            _ => None,
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "kitti_bin" | "kitti" | "bin" => Some(Self::KittiBin),
            "csv" => Some(Self::Csv),
            "ply_ascii" | "ply" => Some(Self::PlyAscii),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot access `{path}`: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed {format} file `{path}`: {reason}")]
    Malformed {
        format: &'static str,
        path: String,
        reason: String,
    },
    #[error("label file `{path}` holds {got} records, expected {expected}")]
    LabelCountMismatch {
        path: String,
        got: usize,
        expected: usize,
    },
}

fn file_err(path: &Path, source: std::io::Error) -> IoError {
    IoError::File {
        path: path.display().to_string(),
        source,
    }
}

fn malformed(format: &'static str, path: &Path, reason: impl Into<String>) -> IoError {
    IoError::Malformed {
        format,
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

/// A loaded scan plus the number of non-finite records dropped at ingestion.
#[derive(Debug, Clone)]
pub struct LoadedScan {
    pub cloud: PointCloud<f64>,
    pub dropped: usize,
}

/// Reads a scan file. Non-finite points are dropped and counted; the
/// surviving order matches the file order.
pub fn load_scan(path: &Path, format: ScanFormat) -> Result<LoadedScan, IoError> {
    match format {
        ScanFormat::KittiBin => load_kitti_bin(path),
        ScanFormat::Csv => load_csv(path),
        ScanFormat::PlyAscii => load_ply_ascii(path),
    }
}

/// Writes a scan file in the given format.
pub fn save_scan(path: &Path, cloud: &PointCloud<f64>, format: ScanFormat) -> Result<(), IoError> {
    match format {
        ScanFormat::KittiBin => save_kitti_bin(path, cloud),
        ScanFormat::Csv => save_csv(path, cloud),
        ScanFormat::PlyAscii => save_ply_ascii(path, cloud),
    }
}

fn frame_id_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load_kitti_bin(path: &Path) -> Result<LoadedScan, IoError> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| file_err(path, e))?;
    if bytes.len() % 16 != 0 {
        return Err(malformed(
            "kitti_bin",
            path,
            format!(
                "size {} is not a multiple of the 16-byte record",
                bytes.len()
            ),
        ));
    }
    let mut points = Vec::with_capacity(bytes.len() / 16);
    let mut dropped = 0usize;
    for rec in bytes.chunks_exact(16) {
        let f = |i: usize| f32::from_le_bytes([rec[i], rec[i + 1], rec[i + 2], rec[i + 3]]);
        let (x, y, z, intensity) = (f(0), f(4), f(8), f(12));
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            dropped += 1;
            continue;
        }
        points.push(Point {
            x: x as f64,
            y: y as f64,
            z: z as f64,
            intensity: intensity.is_finite().then_some(intensity as f64),
            ring: None,
        });
    }
    Ok(LoadedScan {
        cloud: PointCloud::new(points, frame_id_of(path)),
        dropped,
    })
}

fn save_kitti_bin(path: &Path, cloud: &PointCloud<f64>) -> Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| file_err(path, e))?);
    for p in &cloud.points {
        for v in [p.x, p.y, p.z, p.intensity.unwrap_or(0.0)] {
            w.write_all(&(v as f32).to_le_bytes())
                .map_err(|e| file_err(path, e))?;
        }
    }
    w.flush().map_err(|e| file_err(path, e))
}

fn load_csv(path: &Path) -> Result<LoadedScan, IoError> {
    let reader = BufReader::new(File::open(path).map_err(|e| file_err(path, e))?);
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(h) => h.map_err(|e| file_err(path, e))?,
        None => {
            return Ok(LoadedScan {
                cloud: PointCloud::new(Vec::new(), frame_id_of(path)),
                dropped: 0,
            })
        }
    };
    let cols: Vec<&str> = header.split(',').map(|c| c.trim()).collect();
    let col = |name: &str| cols.iter().position(|c| *c == name);
    let (ix, iy, iz) = match (col("x"), col("y"), col("z")) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return Err(malformed("csv", path, "header must contain x,y,z")),
    };
    let ii = col("intensity");
    let ir = col("ring");

    let mut points = Vec::new();
    let mut dropped = 0usize;
    for (n, line) in lines.enumerate() {
        let line = line.map_err(|e| file_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
        let get = |i: usize| -> Result<f64, IoError> {
            fields
                .get(i)
                .and_then(|f| f.parse::<f64>().ok())
                .ok_or_else(|| {
                    malformed(
                        "csv",
                        path,
                        format!("bad numeric field on data row {}", n + 1),
                    )
                })
        };
        let (x, y, z) = (get(ix)?, get(iy)?, get(iz)?);
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            dropped += 1;
            continue;
        }
        let intensity = match ii {
            Some(i) => {
                let v = get(i)?;
                v.is_finite().then_some(v)
            }
            None => None,
        };
        let ring = match ir {
            Some(i) => fields
                .get(i)
                .and_then(|f| f.parse::<u32>().ok())
                .map(Some)
                .ok_or_else(|| {
                    malformed("csv", path, format!("bad ring field on data row {}", n + 1))
                })?,
            None => None,
        };
        points.push(Point {
            x,
            y,
            z,
            intensity,
            ring,
        });
    }
    Ok(LoadedScan {
        cloud: PointCloud::new(points, frame_id_of(path)),
        dropped,
    })
}

fn save_csv(path: &Path, cloud: &PointCloud<f64>) -> Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| file_err(path, e))?);
    let has_intensity = cloud.points.iter().any(|p| p.intensity.is_some());
    let has_ring = cloud.points.iter().any(|p| p.ring.is_some());
    let mut header = String::from("x,y,z");
    if has_intensity {
        header.push_str(",intensity");
    }
    if has_ring {
        header.push_str(",ring");
    }
    writeln!(w, "{header}").map_err(|e| file_err(path, e))?;
    for p in &cloud.points {
        // `{}` on f64 prints the shortest digits that round-trip exactly.
        write!(w, "{},{},{}", p.x, p.y, p.z).map_err(|e| file_err(path, e))?;
        if has_intensity {
            write!(w, ",{}", p.intensity.unwrap_or(0.0)).map_err(|e| file_err(path, e))?;
        }
        if has_ring {
            write!(w, ",{}", p.ring.unwrap_or(0)).map_err(|e| file_err(path, e))?;
        }
        writeln!(w).map_err(|e| file_err(path, e))?;
    }
    w.flush().map_err(|e| file_err(path, e))
}

fn load_ply_ascii(path: &Path) -> Result<LoadedScan, IoError> {
    let reader = BufReader::new(File::open(path).map_err(|e| file_err(path, e))?);
    let mut lines = reader.lines();

    match lines.next() {
        Some(Ok(l)) if l.trim() == "ply" => {}
        _ => return Err(malformed("ply_ascii", path, "missing `ply` magic line")),
    }

    let mut vertex_count: Option<usize> = None;
    let mut properties: Vec<String> = Vec::new();
    let mut in_vertex_element = false;
    loop {
        let line = match lines.next() {
            Some(l) => l.map_err(|e| file_err(path, e))?,
            None => return Err(malformed("ply_ascii", path, "header never ends")),
        };
        let line = line.trim().to_string();
        if line == "end_header" {
            break;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["format", "ascii", _] | ["comment", ..] => {}
            ["element", "vertex", n] => {
                vertex_count = Some(n.parse().map_err(|_| {
                    malformed("ply_ascii", path, format!("bad vertex count `{n}`"))
                })?);
                in_vertex_element = true;
            }
            ["element", ..] => in_vertex_element = false,
            ["property", _ty, name] if in_vertex_element => properties.push((*name).to_string()),
            ["property", ..] => {}
            ["format", ..] => {
                return Err(malformed(
                    "ply_ascii",
                    path,
                    "only ascii format is supported",
                ))
            }
            _ => {
                return Err(malformed(
                    "ply_ascii",
                    path,
                    format!("bad header line `{line}`"),
                ))
            }
        }
    }
    let vertex_count =
        vertex_count.ok_or_else(|| malformed("ply_ascii", path, "no vertex element"))?;
    let idx = |name: &str| properties.iter().position(|p| p == name);
    let (ix, iy, iz) = match (idx("x"), idx("y"), idx("z")) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return Err(malformed("ply_ascii", path, "vertex element lacks x/y/z")),
    };
    let ii = idx("intensity");

    let mut points = Vec::with_capacity(vertex_count);
    let mut dropped = 0usize;
    for n in 0..vertex_count {
        let line = match lines.next() {
            Some(l) => l.map_err(|e| file_err(path, e))?,
            None => {
                return Err(malformed(
                    "ply_ascii",
                    path,
                    format!("expected {vertex_count} vertices, file ends after {n}"),
                ))
            }
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let get = |i: usize| -> Result<f64, IoError> {
            fields
                .get(i)
                .and_then(|f| f.parse::<f64>().ok())
                .ok_or_else(|| malformed("ply_ascii", path, format!("bad vertex row {}", n + 1)))
        };
        let (x, y, z) = (get(ix)?, get(iy)?, get(iz)?);
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            dropped += 1;
            continue;
        }
        let intensity = match ii {
            Some(i) => {
                let v = get(i)?;
                v.is_finite().then_some(v)
            }
            None => None,
        };
        points.push(Point {
            x,
            y,
            z,
            intensity,
            ring: None,
        });
    }
    Ok(LoadedScan {
        cloud: PointCloud::new(points, frame_id_of(path)),
        dropped,
    })
}

fn save_ply_ascii(path: &Path, cloud: &PointCloud<f64>) -> Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| file_err(path, e))?);
    let has_intensity = cloud.points.iter().any(|p| p.intensity.is_some());
    writeln!(w, "ply").map_err(|e| file_err(path, e))?;
    writeln!(w, "format ascii 1.0").map_err(|e| file_err(path, e))?;
    writeln!(w, "element vertex {}", cloud.len()).map_err(|e| file_err(path, e))?;
    for name in ["x", "y", "z"] {
        writeln!(w, "property double {name}").map_err(|e| file_err(path, e))?;
    }
    if has_intensity {
        writeln!(w, "property double intensity").map_err(|e| file_err(path, e))?;
    }
    writeln!(w, "end_header").map_err(|e| file_err(path, e))?;
    for p in &cloud.points {
        write!(w, "{} {} {}", p.x, p.y, p.z).map_err(|e| file_err(path, e))?;
        if has_intensity {
            write!(w, " {}", p.intensity.unwrap_or(0.0)).map_err(|e| file_err(path, e))?;
        }
        writeln!(w).map_err(|e| file_err(path, e))?;
    }
    w.flush().map_err(|e| file_err(path, e))
}

/// Per-point labels, one `u32` per point.
#[derive(Debug, Clone, Default)]
pub struct LabelFile {
    pub raw: Vec<u32>,
}

impl LabelFile {
    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    /// Lower 16 bits: semantic class id.
    pub fn classes(&self) -> impl Iterator<Item = u16> + '_ {
        self.raw.iter().map(|v| (v & 0xffff) as u16)
    }

    /// Upper 16 bits: instance id.
    pub fn instances(&self) -> impl Iterator<Item = u16> + '_ {
        self.raw.iter().map(|v| (v >> 16) as u16)
    }
}

/// Reads a label file. When `expected` is given, a record-count mismatch
/// is an error.
pub fn load_labels(path: &Path, expected: Option<usize>) -> Result<LabelFile, IoError> {
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| file_err(path, e))?;
    if bytes.len() % 4 != 0 {
        return Err(malformed(
            "label",
            path,
            format!("size {} is not a multiple of 4", bytes.len()),
        ));
    }
    let raw: Vec<u32> = bytes
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    if let Some(expected) = expected {
        if raw.len() != expected {
            return Err(IoError::LabelCountMismatch {
                path: path.display().to_string(),
                got: raw.len(),
                expected,
            });
        }
    }
    Ok(LabelFile { raw })
}

pub fn save_labels(path: &Path, labels: &[u32]) -> Result<(), IoError> {
    let mut w = BufWriter::new(File::create(path).map_err(|e| file_err(path, e))?);
    for v in labels {
        w.write_all(&v.to_le_bytes())
            .map_err(|e| file_err(path, e))?;
    }
    w.flush().map_err(|e| file_err(path, e))
}
