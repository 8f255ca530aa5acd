use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bistatic_cal::io::{
    load_scene, scene_to_toml, write_atomic, FrequencyUnit, ManifestEntry, Polarization, SweepManifest,
    TouchstoneFile, TwoPort,
};
use bistatic_cal::sim::{
    simulate_background, simulate_calibration, simulate_scene, AntennaPattern, MeasurementSystem, NoiseSpec,
    RippleSpec, Scene, SystemResponse,
};
use bistatic_cal::{BistaticGeometry, ComplexSweep, FrequencyGrid, SweepRole};
use clap::Args;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{ensure_output_dir, parse_grid, parse_polarization, thread_pool};

#[derive(Debug, Clone, Args)]
pub struct SimulateConfig {
    /// Output directory; created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Scene description file. Defaults to a one-foot sphere on a foam pillar.
    #[arg(long)]
    pub scene: Option<PathBuf>,
    #[arg(long, value_parser = parse_grid, default_value = "76e9:81e9:1001")]
    pub grid: FrequencyGrid,
    #[arg(long, default_value_t = 3.04)]
    pub r_tx: f64,
    #[arg(long, default_value_t = 3.04)]
    pub r_rx: f64,
    #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
    pub beta_start: f64,
    #[arg(long, default_value_t = 243.0, allow_negative_numbers = true)]
    pub beta_stop: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta_step: f64,
    #[arg(long, value_delimiter = ',', value_parser = parse_polarization, default_value = "VV,HH")]
    pub polarizations: Vec<Polarization>,
    /// Receiver noise power per frequency point in dB.
    #[arg(long, default_value_t = -100.0, allow_negative_numbers = true)]
    pub noise_db: f64,
    #[arg(long)]
    pub no_noise: bool,
    /// Use a flat 0 dB system response instead of seeded ripple.
    #[arg(long)]
    pub flat_system: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl SimulateConfig {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self {
            out: out.into(),
            scene: None,
            grid: FrequencyGrid::default(),
            r_tx: 3.04,
            r_rx: 3.04,
            beta_start: 8.0,
            beta_stop: 243.0,
            beta_step: 1.0,
            polarizations: vec![Polarization::VV, Polarization::HH],
            noise_db: -100.0,
            no_noise: false,
            flat_system: false,
            seed: 1,
            jobs: 1,
        }
    }

    pub fn betas(&self) -> Result<Vec<f64>> {
        let ok = [self.beta_start, self.beta_stop, self.beta_step].iter().all(|v| v.is_finite());
        if !ok || self.beta_step <= 0.0 || self.beta_stop < self.beta_start {
            bail!("invalid angle range {}:{}:{}", self.beta_start, self.beta_stop, self.beta_step);
        }
        let n = ((self.beta_stop - self.beta_start) / self.beta_step + 1e-9).floor() as usize + 1;
        Ok((0..n).map(|k| self.beta_start + k as f64 * self.beta_step).collect())
    }
}

#[derive(Clone, Copy)]
enum Role {
    Cal = 0,
    Target = 1,
    Background = 2,
}

fn noise(cfg: &SimulateConfig, pol_index: usize, role: Role, angle_index: usize) -> NoiseSpec {
    if cfg.no_noise {
        return NoiseSpec::off();
    }
    let stream = ((pol_index as u64) << 40) | ((role as u64) << 32) | angle_index as u64;
    NoiseSpec::new(cfg.noise_db, cfg.seed).with_stream(stream)
}

/// Antenna pair for a co-polarized channel. Rotating both horns for H
/// polarization swaps their E- and H-plane beamwidths.
fn antennas(pol: Polarization) -> (AntennaPattern, AntennaPattern) {
    let mut a = AntennaPattern::default();
    if pol == Polarization::HH {
        std::mem::swap(&mut a.beamwidth_e_deg, &mut a.beamwidth_h_deg);
    }
    (a, a)
}

fn beta_label(beta: f64) -> String {
    format!("{beta}")
}

fn write_sweep(dir: &Path, name: &str, sweep: ComplexSweep, comments: Vec<String>) -> Result<()> {
    let file = TouchstoneFile::from_two_port(&TwoPort::from_s21(sweep), FrequencyUnit::GHz, comments);
    write_atomic(&dir.join(name), file.to_text().as_bytes())?;
    Ok(())
}

pub fn cmd_simulate(cfg: &SimulateConfig) -> Result<Value> {
    let scene = match &cfg.scene {
        Some(p) => load_scene(p).with_context(|| format!("invalid scene {}", p.display()))?,
        None => Scene::default_sphere(),
    };
    let betas = cfg.betas()?;
    if cfg.polarizations.is_empty() {
        bail!("no polarizations requested");
    }
    let mut pols = cfg.polarizations.clone();
    pols.sort();
    pols.dedup();
    if !cfg.no_noise && !cfg.noise_db.is_finite() {
        bail!("noise level must be finite");
    }
    let cal_geometry = BistaticGeometry::anti_parallel(cfg.r_tx, cfg.r_rx)?;
    let pool = thread_pool(cfg.jobs)?;
    ensure_output_dir(&cfg.out)?;

    let grid = cfg.grid;
    let sys = if cfg.flat_system {
        SystemResponse::flat(&grid, 0.0)
    } else {
        SystemResponse::synthetic(&grid, cfg.seed, &RippleSpec::default())
    };

    let mut entries = Vec::new();
    for (pi, &pol) in pols.iter().enumerate() {
        let (tx, rx) = antennas(pol);
        let ms = MeasurementSystem::new(grid, sys.clone(), tx, rx)?;
        let cal = simulate_calibration(&ms, &cal_geometry, &scene.calibration_echoes, &noise(cfg, pi, Role::Cal, 0))?;
        let cal_name = format!("cal_{pol}.s2p");
        write_sweep(&cfg.out, &cal_name, cal, vec![format!(" calibration, polarization {pol}, seed {}", cfg.seed)])?;
        entries.push(ManifestEntry {
            role: SweepRole::Cal,
            beta_deg: 180.0,
            theta_ill_deg: 90.0,
            theta_obs_deg: 90.0,
            polarization: pol,
            path: cal_name,
        });

        let per_angle: Vec<Vec<ManifestEntry>> = pool.install(|| {
            betas
                .par_iter()
                .enumerate()
                .map(|(ai, &beta)| -> Result<Vec<ManifestEntry>> {
                    let geometry = BistaticGeometry::new(cfg.r_tx, cfg.r_rx, beta)?;
                    let target = simulate_scene(&ms, &geometry, &scene, &noise(cfg, pi, Role::Target, ai))?;
                    let background =
                        simulate_background(&ms, &geometry, &scene, &noise(cfg, pi, Role::Background, ai))?;
                    let mut out = Vec::with_capacity(2);
                    for (role, sweep, tag) in
                        [(SweepRole::Target, target, "target"), (SweepRole::Background, background, "background")]
                    {
                        let name = format!("{tag}_{pol}_b{}.s2p", beta_label(beta));
                        let comment = format!(" {tag}, polarization {pol}, beta {beta} deg, seed {}", cfg.seed);
                        write_sweep(&cfg.out, &name, sweep, vec![comment])?;
                        out.push(ManifestEntry {
                            role,
                            beta_deg: beta,
                            theta_ill_deg: 90.0,
                            theta_obs_deg: 90.0,
                            polarization: pol,
                            path: name,
                        });
                    }
                    Ok(out)
                })
                .collect::<Result<_>>()
        })?;
        entries.extend(per_angle.into_iter().flatten());
    }

    let manifest = SweepManifest { grid, r_tx: cfg.r_tx, r_rx: cfg.r_rx, entries };
    manifest.write(&cfg.out.join("manifest.toml"))?;
    write_atomic(&cfg.out.join("scene.toml"), scene_to_toml(&scene).as_bytes())?;

    let files = manifest.entries.len();
    Ok(json!({
        "status": "ok",
        "command": "simulate",
        "out": cfg.out.display().to_string(),
        "angles": betas.len(),
        "polarizations": pols.iter().map(|p| p.as_str()).collect::<Vec<_>>(),
        "sweep_files": files,
        "manifest": cfg.out.join("manifest.toml").display().to_string(),
    }))
}
