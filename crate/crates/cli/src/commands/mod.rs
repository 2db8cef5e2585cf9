pub mod bench;
pub mod eval;
pub mod segment;
pub mod sweep;
pub mod synth;

use std::path::{Path, PathBuf};

use crate::CliError;

/// Expands files and directories into a sorted list of data files with one
/// of the given extensions.
pub fn collect_inputs(paths: &[PathBuf], extensions: &[&str]) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(path)?
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| {
                    p.is_file()
                        && p.extension()
                            .and_then(|e| e.to_str())
                            .map(|e| extensions.contains(&e))
                            .unwrap_or(false)
                })
                .collect();
            entries.sort();
            files.extend(entries);
        } else if path.is_file() {
            files.push(path.clone());
        } else {
            return Err(CliError::Input(format!(
                "`{}` does not exist",
                path.display()
            )));
        }
    }
    if files.is_empty() {
        return Err(CliError::Input("no input files found".to_string()));
    }
    Ok(files)
}

pub fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn ensure_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path)?;
    Ok(())
}
