use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{line_col, read_text, write_atomic, FileError};
use crate::model::{FrequencyGrid, SweepRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarization {
    VV,
    HH,
    HV,
    VH,
}

impl Polarization {
    pub const ALL: [Self; 4] = [Self::VV, Self::HH, Self::HV, Self::VH];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::VV => "VV",
            Self::HH => "HH",
            Self::HV => "HV",
            Self::VH => "VH",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.as_str().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RoleText {
    Cal,
    Target,
    Background,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridText {
    start_hz: f64,
    stop_hz: f64,
    points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryText {
    r_tx: f64,
    r_rx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryText {
    role: RoleText,
    beta: f64,
    #[serde(default = "default_elevation")]
    theta_ill: f64,
    #[serde(default = "default_elevation")]
    theta_obs: f64,
    polarization: Polarization,
    path: String,
}

fn default_elevation() -> f64 {
    90.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestText {
    grid: GridText,
    geometry: GeometryText,
    #[serde(rename = "entry", default)]
    entries: Vec<EntryText>,
}

/// One sweep file of a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub role: SweepRole,
    pub beta_deg: f64,
    pub theta_ill_deg: f64,
    pub theta_obs_deg: f64,
    pub polarization: Polarization,
    /// Path as written, relative to the manifest directory unless absolute.
    pub path: String,
}

/// Structure of a measurement campaign: grid, antenna distances and the
/// list of calibration, target and background sweep files.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepManifest {
    pub grid: FrequencyGrid,
    pub r_tx: f64,
    pub r_rx: f64,
    pub entries: Vec<ManifestEntry>,
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("entry {index}: {message}")]
    Entry { index: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("duplicate {polarization} cal entries: entry {first} ('{first_path}') and entry {second} ('{second_path}')")]
    DuplicateCal {
        polarization: Polarization,
        first: usize,
        first_path: String,
        second: usize,
        second_path: String,
    },
    #[error("no cal entry for polarization {0}")]
    MissingCal(Polarization),
    #[error("entry {index}: referenced file '{}' does not exist", path.display())]
    DanglingReference { index: usize, path: PathBuf },
    #[error(transparent)]
    File(#[from] FileError),
}

fn role_from_text(r: RoleText) -> SweepRole {
    match r {
        RoleText::Cal => SweepRole::Cal,
        RoleText::Target => SweepRole::Target,
        RoleText::Background => SweepRole::Background,
    }
}

impl SweepManifest {
    /// Parses and validates manifest text without touching the filesystem.
    pub fn parse(text: &str) -> Result<Self, ManifestError> {
        let raw: ManifestText = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
            ManifestError::Syntax { line, column, message: e.message().trim().to_string() }
        })?;
        let grid = FrequencyGrid::new(raw.grid.start_hz, raw.grid.stop_hz, raw.grid.points)
            .map_err(|e| ManifestError::Invalid(format!("grid: {e}")))?;
        let (r_tx, r_rx) = (raw.geometry.r_tx, raw.geometry.r_rx);
        if !(r_tx.is_finite() && r_rx.is_finite() && r_tx > 0.0 && r_rx > 0.0) {
            return Err(ManifestError::Invalid(format!("geometry: radii must be positive, got {r_tx}, {r_rx}")));
        }
        let mut entries = Vec::with_capacity(raw.entries.len());
        for (index, e) in raw.entries.into_iter().enumerate() {
            for (name, v) in [("beta", e.beta), ("theta_ill", e.theta_ill), ("theta_obs", e.theta_obs)] {
                if !v.is_finite() {
                    return Err(ManifestError::Entry { index, message: format!("{name} is not finite") });
                }
            }
            if e.path.is_empty() {
                return Err(ManifestError::Entry { index, message: "empty path".into() });
            }
            entries.push(ManifestEntry {
                role: role_from_text(e.role),
                beta_deg: e.beta,
                theta_ill_deg: e.theta_ill,
                theta_obs_deg: e.theta_obs,
                polarization: e.polarization,
                path: e.path,
            });
        }
        let m = Self { grid, r_tx, r_rx, entries };
        m.check_roles()?;
        Ok(m)
    }

    fn check_roles(&self) -> Result<(), ManifestError> {
        for pol in Polarization::ALL {
            let cals: Vec<usize> = self
                .entries
                .iter()
                .enumerate()
                .filter(|(_, e)| e.polarization == pol && e.role == SweepRole::Cal)
                .map(|(i, _)| i)
                .collect();
            let used = self.entries.iter().any(|e| e.polarization == pol);
            match cals.as_slice() {
                [] if used => return Err(ManifestError::MissingCal(pol)),
                [first, second, ..] => {
                    return Err(ManifestError::DuplicateCal {
                        polarization: pol,
                        first: *first,
                        first_path: self.entries[*first].path.clone(),
                        second: *second,
                        second_path: self.entries[*second].path.clone(),
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn polarizations(&self) -> Vec<Polarization> {
        let mut p: Vec<Polarization> = self.entries.iter().map(|e| e.polarization).collect();
        p.sort();
        p.dedup();
        p
    }

    pub fn cal_entry(&self, pol: Polarization) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.polarization == pol && e.role == SweepRole::Cal)
    }

    /// Entries of one role and polarization, sorted by bistatic angle.
    pub fn entries_for(&self, role: SweepRole, pol: Polarization) -> Vec<&ManifestEntry> {
        let mut v: Vec<&ManifestEntry> =
            self.entries.iter().filter(|e| e.role == role && e.polarization == pol).collect();
        v.sort_by(|a, b| a.beta_deg.total_cmp(&b.beta_deg).then_with(|| a.path.cmp(&b.path)));
        v
    }

    pub fn to_toml_string(&self) -> String {
        let text = ManifestText {
            grid: GridText { start_hz: self.grid.f_start(), stop_hz: self.grid.f_stop(), points: self.grid.len() },
            geometry: GeometryText { r_tx: self.r_tx, r_rx: self.r_rx },
            entries: self
                .entries
                .iter()
                .map(|e| EntryText {
                    role: match e.role {
                        SweepRole::Cal => RoleText::Cal,
                        SweepRole::Background => RoleText::Background,
                        _ => RoleText::Target,
                    },
                    beta: e.beta_deg,
                    theta_ill: e.theta_ill_deg,
                    theta_obs: e.theta_obs_deg,
                    polarization: e.polarization,
                    path: e.path.clone(),
                })
                .collect(),
        };
        toml::to_string(&text).expect("manifest fields are always representable")
    }

    pub fn write(&self, path: &Path) -> Result<(), FileError> {
        write_atomic(path, self.to_toml_string().as_bytes())
    }
}

/// Absolute location of an entry's file for a manifest stored at `manifest_path`.
pub fn resolve_entry_path(manifest_path: &Path, entry: &ManifestEntry) -> PathBuf {
    let p = Path::new(&entry.path);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        manifest_path.parent().unwrap_or(Path::new(".")).join(p)
    }
}

/// Reads and validates a manifest, including that every referenced file exists.
pub fn load_manifest(path: &Path) -> Result<SweepManifest, ManifestError> {
    let m = SweepManifest::parse(&read_text(path)?)?;
    for (index, e) in m.entries.iter().enumerate() {
        let p = resolve_entry_path(path, e);
        if !p.is_file() {
            return Err(ManifestError::DanglingReference { index, path: p });
        }
    }
    Ok(m)
}
