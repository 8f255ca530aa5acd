use std::path::PathBuf;

use anyhow::{Context, Result};
use bistatic_cal::dsp::{impulse_response, pdp, time_gate_fd, time_gate_td, GateEdge, GateSpec, Window};
use bistatic_cal::io::{format_columns, write_atomic, FrequencyUnit, TouchstoneFile};
use bistatic_cal::ComplexSweep;
use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use crate::{parse_gate_edge, parse_window, read_two_port};

#[derive(Debug, Clone, Args)]
pub struct PdpConfig {
    /// Touchstone sweep; S21 is analysed.
    #[arg(long)]
    pub input: PathBuf,
    /// Column CSV output (`path_m,power_db`).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_parser = parse_window, default_value = "hann")]
    pub window: Window,
}

pub fn cmd_pdp(cfg: &PdpConfig) -> Result<Value> {
    let tp = read_two_port(&cfg.input)?;
    let ir = impulse_response(&tp.s21, cfg.window);
    let p = pdp(&ir);
    let mut bins: Vec<usize> = (0..ir.len()).collect();
    bins.sort_by_key(|&k| ir.signed_bin(k));
    let path: Vec<f64> = bins.iter().map(|&k| ir.path_length(k)).collect();
    let power: Vec<f64> = bins.iter().map(|&k| p[k]).collect();
    write_atomic(&cfg.out, format_columns(&["path_m", "power_db"], &[&path, &power]).as_bytes())?;
    let peak = ir.peak();
    Ok(json!({
        "status": "ok",
        "command": "pdp",
        "out": cfg.out.display().to_string(),
        "peak_path_m": ir.path_length(peak),
        "peak_db": p[peak],
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateMethod {
    /// Inverse FFT, weight, forward FFT.
    Td,
    /// Circular convolution with the gate's frequency-domain kernel.
    Fd,
}

#[derive(Debug, Clone, Args)]
pub struct GateConfig {
    #[arg(long)]
    pub input: PathBuf,
    /// Gated Touchstone output.
    #[arg(long)]
    pub out: PathBuf,
    /// Gate center on the excess-path axis in m.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub center_m: f64,
    #[arg(long, default_value_t = 2.0)]
    pub gate_halfwidth_m: f64,
    #[arg(long, value_parser = parse_gate_edge, default_value = "tukey")]
    pub gate_edge: GateEdge,
    #[arg(long, value_enum, default_value_t = GateMethod::Td)]
    pub method: GateMethod,
}

pub fn cmd_gate(cfg: &GateConfig) -> Result<Value> {
    let tp = read_two_port(&cfg.input)?;
    let spec = GateSpec { center_m: cfg.center_m, half_width_m: cfg.gate_halfwidth_m, edge: cfg.gate_edge };
    spec.validate(tp.grid())?;
    let gate = |s: &ComplexSweep| match cfg.method {
        GateMethod::Td => time_gate_td(s, &spec),
        GateMethod::Fd => time_gate_fd(s, &spec),
    };
    let gated = bistatic_cal::io::TwoPort { s11: gate(&tp.s11)?, s21: gate(&tp.s21)?, s12: gate(&tp.s12)?, s22: gate(&tp.s22)? };
    let comment = format!(
        " gated {:?} at {} m, half width {} m, {:?}",
        cfg.method, cfg.center_m, cfg.gate_halfwidth_m, cfg.gate_edge
    );
    let file = TouchstoneFile::from_two_port(&gated, FrequencyUnit::GHz, vec![comment]);
    write_atomic(&cfg.out, file.to_text().as_bytes()).with_context(|| "writing gated sweep")?;
    let e_in: f64 = tp.s21.power().iter().sum();
    let e_out: f64 = gated.s21.power().iter().sum();
    Ok(json!({
        "status": "ok",
        "command": "gate",
        "out": cfg.out.display().to_string(),
        "retained_energy_fraction": if e_in > 0.0 { e_out / e_in } else { 0.0 },
    }))
}
