use std::path::PathBuf;

use anyhow::{bail, Result};
use bistatic_cal::io::{read_heatmap, write_atomic, write_heatmap};
use bistatic_cal::model::specular_path_length;
use bistatic_cal::ReflectivityMap;
use clap::Args;
use serde_json::{json, Value};

use crate::parse_band;

/// Agreement threshold for the summary statistics.
pub const AGREEMENT_DB: f64 = 3.0;

/// Slack on the agreement threshold so that a difference of exactly 3 dB
/// survives CSV quantization and floating-point subtraction.
const AGREEMENT_SLACK_DB: f64 = 1e-9;

#[derive(Debug, Clone, Args)]
pub struct CompareConfig {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// Difference heatmap output.
    #[arg(long)]
    pub out: PathBuf,
    /// Cells below this level on either side are masked.
    #[arg(long, default_value_t = -55.0, allow_negative_numbers = true)]
    pub floor_dbsm: f64,
    /// Skip the specular-track statistics.
    #[arg(long)]
    pub no_track: bool,
    #[arg(long, default_value_t = 0.1524)]
    pub sphere_radius: f64,
    #[arg(long, default_value_t = 3.04)]
    pub r_tx: f64,
    #[arg(long, default_value_t = 3.04)]
    pub r_rx: f64,
    /// Bistatic angles excluded from the track statistics, `lo:hi` in degrees.
    #[arg(long, value_parser = parse_band, default_value = "150:210")]
    pub exclude: (f64, f64),
    /// Rows on each side of the model track searched for the ridge maximum.
    #[arg(long, default_value_t = 1)]
    pub track_search_rows: usize,
    /// Also write the JSON summary to this file.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

impl CompareConfig {
    pub fn new(a: impl Into<PathBuf>, b: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
            out: out.into(),
            floor_dbsm: -55.0,
            no_track: false,
            sphere_radius: 0.1524,
            r_tx: 3.04,
            r_rx: 3.04,
            exclude: (150.0, 210.0),
            track_search_rows: 1,
            summary: None,
        }
    }
}

/// Specular ridge of a sphere at the focal point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackSpec {
    pub sphere_radius: f64,
    pub antenna_radius: f64,
    pub exclude: (f64, f64),
    pub search_rows: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CompareSummary {
    pub cells_compared: usize,
    pub cells_masked: usize,
    pub max_abs_diff_db: f64,
    pub cells_within: usize,
    pub track_evaluated: usize,
    pub track_masked: usize,
    pub track_excluded: usize,
    pub track_within: usize,
    pub track_max_abs_diff_db: f64,
}

impl CompareSummary {
    pub fn fraction_within(&self) -> f64 {
        ratio(self.cells_within, self.cells_compared)
    }

    pub fn track_fraction_within(&self) -> f64 {
        ratio(self.track_within, self.track_evaluated)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cells_compared": self.cells_compared,
            "cells_masked": self.cells_masked,
            "max_abs_diff_db": self.max_abs_diff_db,
            "fraction_within_3db": self.fraction_within(),
            "track": {
                "angles_evaluated": self.track_evaluated,
                "angles_masked": self.track_masked,
                "angles_excluded": self.track_excluded,
                "within_3db": self.track_within,
                "fraction_within_3db": self.track_fraction_within(),
                "max_abs_diff_db": self.track_max_abs_diff_db,
            },
        })
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn within(d: f64) -> bool {
    d.abs() <= AGREEMENT_DB + AGREEMENT_SLACK_DB
}

fn same_axis(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9 * x.abs().max(1.0))
}

/// Signed difference `a − b` in dB, masked (NaN) where either side is below
/// `floor` or missing.
pub fn compare_maps(
    a: &ReflectivityMap,
    b: &ReflectivityMap,
    floor: f64,
    track: Option<&TrackSpec>,
) -> Result<(ReflectivityMap, CompareSummary)> {
    if !same_axis(a.betas_deg(), b.betas_deg()) {
        bail!("angle axes differ ({} vs {} columns)", a.betas_deg().len(), b.betas_deg().len());
    }
    if !same_axis(a.path_m(), b.path_m()) {
        bail!("path axes differ ({} vs {} rows)", a.path_m().len(), b.path_m().len());
    }
    let masked = |x: f64| !(x >= floor);
    let mut s = CompareSummary::default();
    let cells: Vec<f64> = a
        .cells()
        .iter()
        .zip(b.cells())
        .map(|(&x, &y)| {
            if masked(x) || masked(y) {
                s.cells_masked += 1;
                f64::NAN
            } else {
                let d = x - y;
                s.cells_compared += 1;
                s.cells_within += within(d) as usize;
                s.max_abs_diff_db = s.max_abs_diff_db.max(d.abs());
                d
            }
        })
        .collect();

    if let Some(t) = track {
        let rows = a.path_m().len();
        for (col, &beta) in a.betas_deg().iter().enumerate() {
            if beta >= t.exclude.0 && beta <= t.exclude.1 {
                s.track_excluded += 1;
                continue;
            }
            let r0 = a.nearest_row(specular_path_length(beta, t.sphere_radius, t.antenna_radius));
            let span = r0.saturating_sub(t.search_rows)..=(r0 + t.search_rows).min(rows - 1);
            let peak = |m: &ReflectivityMap| span.clone().map(|r| m.get(r, col)).fold(f64::NEG_INFINITY, f64::max);
            let (x, y) = (peak(a), peak(b));
            if masked(x) || masked(y) {
                s.track_masked += 1;
                continue;
            }
            let d = x - y;
            s.track_evaluated += 1;
            s.track_within += within(d) as usize;
            s.track_max_abs_diff_db = s.track_max_abs_diff_db.max(d.abs());
        }
    }
    let diff = ReflectivityMap::new(a.betas_deg().to_vec(), a.path_m().to_vec(), cells)?;
    Ok((diff, s))
}

pub fn cmd_compare(cfg: &CompareConfig) -> Result<Value> {
    let a = read_heatmap(&cfg.a)?;
    let b = read_heatmap(&cfg.b)?;
    if !cfg.floor_dbsm.is_finite() {
        bail!("--floor-dbsm must be finite");
    }
    let track = TrackSpec {
        sphere_radius: cfg.sphere_radius,
        antenna_radius: 0.5 * (cfg.r_tx + cfg.r_rx),
        exclude: cfg.exclude,
        search_rows: cfg.track_search_rows,
    };
    let (diff, summary) = compare_maps(&a, &b, cfg.floor_dbsm, (!cfg.no_track).then_some(&track))?;
    write_heatmap(&diff, &cfg.out)?;
    let mut v = summary.to_json();
    v["status"] = json!("ok");
    v["command"] = json!("compare");
    v["out"] = json!(cfg.out.display().to_string());
    if let Some(p) = &cfg.summary {
        write_atomic(p, format!("{v}\n").as_bytes())?;
    }
    Ok(v)
}
