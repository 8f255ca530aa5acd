use std::path::Path;

use super::{read_text, write_atomic, FileError};
use crate::model::ReflectivityMap;

#[derive(Debug, thiserror::Error)]
pub enum HeatmapError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    File(#[from] FileError),
}

fn cell(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.6}")
    }
}

/// CSV text: first row bistatic angles in degrees after an empty corner,
/// first column path length in m, cells in dB with six decimals, masked
/// cells as `nan`. Comma separated, LF line endings.
pub fn format_heatmap(map: &ReflectivityMap) -> String {
    let nb = map.betas_deg().len();
    let mut out = String::new();
    for b in map.betas_deg() {
        out.push(',');
        out.push_str(&b.to_string());
    }
    out.push('\n');
    for (row, p) in map.path_m().iter().enumerate() {
        out.push_str(&p.to_string());
        for v in &map.cells()[row * nb..(row + 1) * nb] {
            out.push(',');
            out.push_str(&cell(*v));
        }
        out.push('\n');
    }
    out
}

fn field(tok: &str, line: usize, column: usize) -> Result<f64, HeatmapError> {
    let v = tok.trim();
    if v == "nan" {
        return Ok(f64::NAN);
    }
    v.parse::<f64>().map_err(|_| HeatmapError::Parse { line, column, message: format!("'{v}' is not a number") })
}

pub fn parse_heatmap(text: &str) -> Result<ReflectivityMap, HeatmapError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| HeatmapError::Shape("empty heatmap".into()))?;
    let mut head = header.split(',');
    if head.next().map(str::trim) != Some("") {
        return Err(HeatmapError::Parse { line: 1, column: 1, message: "top-left cell must be empty".into() });
    }
    let betas = head.enumerate().map(|(i, t)| field(t, 1, i + 2)).collect::<Result<Vec<_>, _>>()?;
    let mut path = Vec::new();
    let mut cells = Vec::new();
    for (idx, l) in lines {
        if l.is_empty() {
            continue;
        }
        let mut it = l.split(',');
        path.push(field(it.next().unwrap_or(""), idx + 1, 1)?);
        let row = it.enumerate().map(|(i, t)| field(t, idx + 1, i + 2)).collect::<Result<Vec<_>, _>>()?;
        if row.len() != betas.len() {
            return Err(HeatmapError::Parse {
                line: idx + 1,
                column: 1,
                message: format!("expected {} cells, found {}", betas.len(), row.len()),
            });
        }
        cells.extend(row);
    }
    ReflectivityMap::new(betas, path, cells).map_err(|e| HeatmapError::Shape(e.to_string()))
}

pub fn write_heatmap(map: &ReflectivityMap, path: &Path) -> Result<(), FileError> {
    write_atomic(path, format_heatmap(map).as_bytes())
}

pub fn read_heatmap(path: &Path) -> Result<ReflectivityMap, HeatmapError> {
    parse_heatmap(&read_text(path)?)
}

/// Column CSV with a header row; all columns must have equal length.
pub fn format_columns(headers: &[&str], columns: &[&[f64]]) -> String {
    assert_eq!(headers.len(), columns.len());
    let n = columns.first().map_or(0, |c| c.len());
    let mut out = headers.join(",");
    out.push('\n');
    for i in 0..n {
        let row: Vec<String> = columns.iter().map(|c| format!("{:?}", c[i])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
