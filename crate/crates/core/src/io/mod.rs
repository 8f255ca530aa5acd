//! File formats: Touchstone v1 two-port sweeps, campaign manifests, scene
//! descriptions and heatmap CSVs.

mod heatmap;
mod manifest;
mod scene;
mod touchstone;

use std::io::Write;
use std::path::{Path, PathBuf};

pub use heatmap::{format_columns, format_heatmap, parse_heatmap, read_heatmap, write_heatmap, HeatmapError};
pub use manifest::{load_manifest, resolve_entry_path, ManifestEntry, ManifestError, Polarization, SweepManifest};
pub use scene::{load_scene, parse_scene, scene_to_toml, SceneError};
pub use touchstone::{
    emit_touchstone, parse_touchstone, parse_touchstone_bytes, DataFormat, FrequencyUnit, TouchstoneError,
    TouchstoneErrorKind, TouchstoneFile, TouchstoneRow, TwoPort,
};

/// Filesystem failure with the path involved.
#[derive(Debug, thiserror::Error)]
#[error("{}: {source}", path.display())]
pub struct FileError {
    pub path: PathBuf,
    #[source]
    pub source: std::io::Error,
}

impl FileError {
    pub fn new(path: &Path, source: std::io::Error) -> Self {
        Self { path: path.to_path_buf(), source }
    }
}

/// Writes `contents` next to `path` in a temporary file and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), FileError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| FileError::new(path, e))?;
    tmp.write_all(contents).map_err(|e| FileError::new(path, e))?;
    tmp.as_file().sync_all().map_err(|e| FileError::new(path, e))?;
    tmp.persist(path).map_err(|e| FileError::new(path, e.error))?;
    Ok(())
}

pub fn read_text(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|e| FileError::new(path, e))
}

/// 1-based line and column of byte offset `pos` in `text`.
pub(crate) fn line_col(text: &str, pos: usize) -> (usize, usize) {
    let pos = pos.min(text.len());
    let before = &text.as_bytes()[..pos];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let col = pos - before.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}
