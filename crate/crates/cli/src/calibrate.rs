use std::collections::HashMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use bistatic_cal::calib::{background_subtract, ota_calibrate_with, type1_calibrate_with, DivisionPolicy};
use bistatic_cal::dsp::{impulse_response, pdp, time_gate_td, GateEdge, GateSpec, Window, DEFAULT_GUARD_BINS, PDP_FLOOR_DB};
use bistatic_cal::io::{
    format_columns, load_manifest, resolve_entry_path, write_atomic, write_heatmap, FrequencyUnit, ManifestEntry,
    Polarization, SweepManifest, TouchstoneFile, TwoPort,
};
use bistatic_cal::model::{specular_path_length, to_db};
use bistatic_cal::{ComplexSweep, Reflectivity, ReflectivityMap, SweepRole};
use clap::Args;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::{ensure_output_dir, parse_gate_edge, parse_window, read_two_port, thread_pool};

#[derive(Debug, Clone, Args)]
pub struct CalibrateConfig {
    /// Campaign manifest.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output directory; created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the manifest's Tx distance.
    #[arg(long)]
    pub r_tx: Option<f64>,
    /// Overrides the manifest's Rx distance.
    #[arg(long)]
    pub r_rx: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub gate_halfwidth_m: f64,
    #[arg(long, value_parser = parse_gate_edge, default_value = "tukey")]
    pub gate_edge: GateEdge,
    /// Window applied before the impulse-response transform.
    #[arg(long, value_parser = parse_window, default_value = "hann")]
    pub window: Window,
    /// Ignore background entries.
    #[arg(long)]
    pub no_background: bool,
    /// Reference-object sweep for substitution (Type-1) calibration.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Radius of the spherical reference object in m.
    #[arg(long, default_value_t = 0.1524)]
    pub reference_radius: f64,
    /// Sphere radius for the specular model column of the ridge table.
    #[arg(long, default_value_t = 0.1524)]
    pub sphere_radius: f64,
    /// Tikhonov regularization, relative to the peak calibration magnitude.
    #[arg(long)]
    pub regularize: Option<f64>,
    /// Also write the calibrated sweep of every angle.
    #[arg(long)]
    pub write_sweeps: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

impl CalibrateConfig {
    pub fn new(manifest: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self {
            manifest: manifest.into(),
            out: out.into(),
            r_tx: None,
            r_rx: None,
            gate_halfwidth_m: 2.0,
            gate_edge: GateEdge::Tukey { taper_fraction: 0.1 },
            window: Window::Hann,
            no_background: false,
            reference: None,
            reference_radius: 0.1524,
            sphere_radius: 0.1524,
            regularize: None,
            write_sweeps: false,
            jobs: 1,
        }
    }
}

struct AngleResult {
    beta: f64,
    calibrated: Vec<f64>,
    uncalibrated: Vec<f64>,
    ridge_path: f64,
    ridge_dbsm: f64,
    type1: Option<[f64; 3]>,
}

fn load_s21(manifest_path: &std::path::Path, manifest: &SweepManifest, entry: &ManifestEntry) -> Result<ComplexSweep> {
    let path = resolve_entry_path(manifest_path, entry);
    let s21 = read_two_port(&path)?.s21.with_role(entry.role);
    if !s21.grid().approx_eq(&manifest.grid) {
        bail!("{}: frequency grid does not match the manifest", path.display());
    }
    Ok(s21)
}

pub fn cmd_calibrate(cfg: &CalibrateConfig) -> Result<Value> {
    let manifest = load_manifest(&cfg.manifest).with_context(|| format!("manifest {}", cfg.manifest.display()))?;
    let r_tx = cfg.r_tx.unwrap_or(manifest.r_tx);
    let r_rx = cfg.r_rx.unwrap_or(manifest.r_rx);
    let reference = match &cfg.reference {
        Some(p) => {
            let s21 = read_two_port(p)?.s21;
            if !s21.grid().approx_eq(&manifest.grid) {
                bail!("{}: frequency grid does not match the manifest", p.display());
            }
            Some(s21)
        }
        None => None,
    };
    if !(cfg.reference_radius > 0.0) || !(cfg.sphere_radius > 0.0) {
        bail!("sphere radii must be positive");
    }
    let policy = match cfg.regularize {
        Some(eps) if eps.is_finite() && eps > 0.0 => DivisionPolicy::regularized(eps),
        Some(eps) => bail!("--regularize must be positive, got {eps}"),
        None => DivisionPolicy::default(),
    };
    let h = cfg.gate_halfwidth_m;
    let gate = GateSpec { center_m: 0.0, half_width_m: h, edge: cfg.gate_edge };
    gate.validate(&manifest.grid)?;
    let pool = thread_pool(cfg.jobs)?;
    ensure_output_dir(&cfg.out)?;

    let focal = r_tx + r_rx;
    let mean_r = 0.5 * (r_tx + r_rx);
    let mut outputs = Vec::new();
    let mut pol_summaries = Vec::new();
    for pol in manifest.polarizations() {
        let targets = manifest.entries_for(SweepRole::Target, pol);
        if targets.is_empty() {
            continue;
        }
        if let Some(w) = targets.windows(2).find(|w| w[0].beta_deg == w[1].beta_deg) {
            bail!("two {pol} target entries at beta {}: '{}' and '{}'", w[0].beta_deg, w[0].path, w[1].path);
        }
        let mut backgrounds: HashMap<u64, &ManifestEntry> = HashMap::new();
        if !cfg.no_background {
            for b in manifest.entries_for(SweepRole::Background, pol) {
                if let Some(prev) = backgrounds.insert(b.beta_deg.to_bits(), b) {
                    bail!("two {pol} background entries at beta {}: '{}' and '{}'", b.beta_deg, prev.path, b.path);
                }
            }
        }
        let cal_entry = manifest.cal_entry(pol).with_context(|| format!("missing cal entry for {pol}"))?;
        let cal = load_s21(&cfg.manifest, &manifest, cal_entry)?;
        let cal_ir = impulse_response(&cal, Window::Hann);
        let cal_gate = gate.centered_at(cal_ir.path_length(cal_ir.peak()));
        let gated_cal = time_gate_td(&cal, &cal_gate)?;
        let type1_gate = gate.centered_at(focal);
        let gated_ref = match &reference {
            Some(r) => Some(time_gate_td(r, &type1_gate)?),
            None => None,
        };
        let sigma_ref = Reflectivity::flat(std::f64::consts::PI * cfg.reference_radius.powi(2))?;

        let results: Vec<AngleResult> = pool.install(|| {
            targets
                .par_iter()
                .map(|entry| -> Result<AngleResult> {
                    let beta = entry.beta_deg;
                    let target = load_s21(&cfg.manifest, &manifest, entry)?;
                    let measured = match backgrounds.get(&beta.to_bits()) {
                        Some(b) => background_subtract(&target, &load_s21(&cfg.manifest, &manifest, b)?)?,
                        None => target.clone(),
                    };
                    let calibrated = ota_calibrate_with(&measured, &gated_cal, r_tx, r_rx, &policy)
                        .with_context(|| format!("{pol} beta {beta}"))?;
                    let gated = time_gate_td(calibrated.as_sweep(), &gate)?;
                    if cfg.write_sweeps {
                        let file = TouchstoneFile::from_two_port(
                            &TwoPort::from_s21(gated.clone()),
                            FrequencyUnit::GHz,
                            vec![format!(" calibrated reflectivity amplitude (m), polarization {pol}, beta {beta} deg")],
                        );
                        let name = format!("calibrated_{pol}_b{beta}.s2p");
                        write_atomic(&cfg.out.join(name), file.to_text().as_bytes())?;
                    }

                    let ir = impulse_response(&gated, cfg.window);
                    let rows = ir.bins_in_path_interval(-h, h);
                    let p = pdp(&ir);
                    let peak = ir.peak_in(&rows).context("empty gate")?;
                    let ridge_dbsm = to_db(ir.band_power(peak, DEFAULT_GUARD_BINS)).max(PDP_FLOOR_DB);

                    let raw_ir = impulse_response(&target, cfg.window);
                    let raw_rows = raw_ir.bins_in_path_interval(focal - h, focal + h);
                    let raw_p = pdp(&raw_ir);
                    let top = raw_rows.iter().map(|&k| raw_p[k]).fold(f64::NEG_INFINITY, f64::max);

                    let type1 = match &gated_ref {
                        Some(r) => {
                            let t = time_gate_td(&measured, &type1_gate)?;
                            let sigma = type1_calibrate_with(&t, r, &sigma_ref, &policy)
                                .with_context(|| format!("{pol} beta {beta} (Type-1)"))?;
                            let v = sigma.values(t.len());
                            let mean = v.iter().sum::<f64>() / v.len() as f64;
                            let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
                            let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                            Some([mean, lo, hi].map(|s| to_db(s).max(PDP_FLOOR_DB)))
                        }
                        None => None,
                    };

                    Ok(AngleResult {
                        beta,
                        calibrated: rows.iter().map(|&k| p[k]).collect(),
                        uncalibrated: raw_rows.iter().map(|&k| raw_p[k] - top).collect(),
                        ridge_path: ir.path_length(peak),
                        ridge_dbsm,
                        type1,
                    })
                })
                .collect::<Result<_>>()
        })?;

        let grid_ir = impulse_response(&gated_cal, cfg.window);
        let cal_paths: Vec<f64> = grid_ir.bins_in_path_interval(-h, h).iter().map(|&k| grid_ir.path_length(k)).collect();
        let raw_paths: Vec<f64> = grid_ir
            .bins_in_path_interval(focal - h, focal + h)
            .iter()
            .map(|&k| grid_ir.path_length(k) - focal)
            .collect();
        let betas: Vec<f64> = results.iter().map(|r| r.beta).collect();

        let cal_map = ReflectivityMap::from_columns(
            betas.clone(),
            cal_paths,
            &results.iter().map(|r| r.calibrated.clone()).collect::<Vec<_>>(),
        )?;
        let raw_map = ReflectivityMap::from_columns(
            betas.clone(),
            raw_paths,
            &results.iter().map(|r| r.uncalibrated.clone()).collect::<Vec<_>>(),
        )?;
        let cal_path = cfg.out.join(format!("calibrated_{pol}.csv"));
        let raw_path = cfg.out.join(format!("uncalibrated_{pol}.csv"));
        write_heatmap(&cal_map, &cal_path)?;
        write_heatmap(&raw_map, &raw_path)?;

        let ridge_paths: Vec<f64> = results.iter().map(|r| r.ridge_path).collect();
        let ridge_db: Vec<f64> = results.iter().map(|r| r.ridge_dbsm).collect();
        let model: Vec<f64> = betas.iter().map(|&b| specular_path_length(b, cfg.sphere_radius, mean_r)).collect();
        let ridge_path = cfg.out.join(format!("ridge_{pol}.csv"));
        let text = format_columns(
            &["beta_deg", "ridge_path_m", "ridge_dbsm", "model_path_m"],
            &[&betas, &ridge_paths, &ridge_db, &model],
        );
        write_atomic(&ridge_path, text.as_bytes())?;
        outputs.extend([cal_path, raw_path, ridge_path]);

        if reference.is_some() {
            let cols: Vec<Vec<f64>> =
                (0..3).map(|j| results.iter().map(|r| r.type1.map_or(f64::NAN, |t| t[j])).collect()).collect();
            let p = cfg.out.join(format!("type1_{pol}.csv"));
            let text = format_columns(
                &["beta_deg", "sigma_mean_dbsm", "sigma_min_dbsm", "sigma_max_dbsm"],
                &[&betas, &cols[0], &cols[1], &cols[2]],
            );
            write_atomic(&p, text.as_bytes())?;
            outputs.push(p);
        }
        pol_summaries.push(pol_summary(pol, &results, cal_gate.center_m));
    }
    if pol_summaries.is_empty() {
        bail!("manifest has no target entries");
    }
    Ok(json!({
        "status": "ok",
        "command": "calibrate",
        "polarizations": pol_summaries,
        "outputs": outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    }))
}

fn pol_summary(pol: Polarization, results: &[AngleResult], cal_center: f64) -> Value {
    json!({
        "polarization": pol.as_str(),
        "angles": results.len(),
        "cal_gate_center_m": cal_center,
        "ridge_dbsm_max": results.iter().map(|r| r.ridge_dbsm).fold(f64::NEG_INFINITY, f64::max),
    })
}
