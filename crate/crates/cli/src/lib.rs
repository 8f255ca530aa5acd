//! Batch pipeline behind the `bistatic-cal` binary: simulate campaigns,
//! calibrate them, inspect and gate single sweeps, and compare maps.

use std::path::Path;

use anyhow::{bail, Context, Result};
use bistatic_cal::dsp::{GateEdge, Window};
use bistatic_cal::io::{parse_touchstone, read_text, Polarization, TwoPort};
use bistatic_cal::FrequencyGrid;
use clap::{Parser, Subcommand};
use serde_json::Value;

mod analyze;
mod calibrate;
mod compare;
mod simulate;

pub use analyze::{cmd_gate, cmd_pdp, GateConfig, GateMethod, PdpConfig};
pub use calibrate::{cmd_calibrate, CalibrateConfig};
pub use compare::{cmd_compare, compare_maps, CompareConfig, CompareSummary, TrackSpec};
pub use simulate::{cmd_simulate, SimulateConfig};

#[derive(Debug, Parser)]
#[command(name = "bistatic-cal", version, about = "Bistatic reflectivity simulation and over-the-air calibration")]
pub struct Cli {
    #[command(subcommand)]
    pub command: RunConfig,
}

#[derive(Debug, Clone, Subcommand)]
pub enum RunConfig {
    /// Synthesize a measurement campaign (Touchstone files plus manifest).
    Simulate(SimulateConfig),
    /// Calibrate a campaign and write reflectivity heatmaps.
    Calibrate(CalibrateConfig),
    /// Power delay profile of one sweep as column CSV.
    Pdp(PdpConfig),
    /// Time-gate one sweep.
    Gate(GateConfig),
    /// Difference of two heatmaps with track statistics.
    Compare(CompareConfig),
}

impl RunConfig {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Simulate(_) => "simulate",
            Self::Calibrate(_) => "calibrate",
            Self::Pdp(_) => "pdp",
            Self::Gate(_) => "gate",
            Self::Compare(_) => "compare",
        }
    }
}

/// Runs one subcommand and returns its JSON summary.
pub fn run(config: &RunConfig) -> Result<Value> {
    match config {
        RunConfig::Simulate(c) => cmd_simulate(c),
        RunConfig::Calibrate(c) => cmd_calibrate(c),
        RunConfig::Pdp(c) => cmd_pdp(c),
        RunConfig::Gate(c) => cmd_gate(c),
        RunConfig::Compare(c) => cmd_compare(c),
    }
}

/// `start_hz:stop_hz:points`
pub fn parse_grid(s: &str) -> Result<FrequencyGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("expected start_hz:stop_hz:points, got '{s}'"));
    };
    let a: f64 = a.trim().parse().map_err(|_| format!("bad start frequency '{a}'"))?;
    let b: f64 = b.trim().parse().map_err(|_| format!("bad stop frequency '{b}'"))?;
    let n: usize = n.trim().parse().map_err(|_| format!("bad point count '{n}'"))?;
    FrequencyGrid::new(a, b, n).map_err(|e| e.to_string())
}

pub fn parse_polarization(s: &str) -> Result<Polarization, String> {
    Polarization::parse(s).ok_or_else(|| format!("unknown polarization '{s}' (VV, HH, HV, VH)"))
}

pub fn parse_window(s: &str) -> Result<Window, String> {
    Window::parse(s).ok_or_else(|| format!("unknown window '{s}'"))
}

pub fn parse_gate_edge(s: &str) -> Result<GateEdge, String> {
    GateEdge::parse(s).ok_or_else(|| format!("unknown gate edge '{s}' (rect, tukey, tukey:<fraction>)"))
}

/// `lo:hi` in degrees.
pub fn parse_band(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: f64 = a.trim().parse().map_err(|_| format!("bad bound '{a}'"))?;
    let hi: f64 = b.trim().parse().map_err(|_| format!("bad bound '{b}'"))?;
    if !(lo <= hi) {
        return Err(format!("empty band {lo}:{hi}"));
    }
    Ok((lo, hi))
}

pub(crate) fn read_two_port(path: &Path) -> Result<TwoPort> {
    let text = read_text(path)?;
    parse_touchstone(&text).with_context(|| format!("{}", path.display()))
}

pub(crate) fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    if jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

pub(crate) fn ensure_output_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let probe = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("output directory {} is not writable", dir.display()))?;
    drop(probe);
    Ok(())
}

/// Single-line JSON error report.
pub fn error_json(command: &str, err: &anyhow::Error) -> String {
    // library errors print their source inline, so skip causes already shown
    let mut message = String::new();
    for cause in err.chain().map(|e| e.to_string()) {
        if message.ends_with(&cause) {
            continue;
        }
        if !message.is_empty() {
            message.push_str(": ");
        }
        message.push_str(&cause);
    }
    serde_json::json!({ "status": "error", "command": command, "message": message }).to_string()
}
