use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{line_col, read_text, FileError};
use crate::model::{from_dbsm, to_dbsm};
use crate::sim::{AngularProfile, Echo, Placement, Scatterer, Scene};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Sphere,
    Point,
    Direct,
    Path,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScattererText {
    kind: Option<Kind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    position: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    excess_path_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_m2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma_dbsm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phase_deg: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EchoText {
    excess_path_m: f64,
    level_db: f64,
    #[serde(default)]
    phase_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneText {
    #[serde(rename = "target", default)]
    targets: Vec<ScattererText>,
    #[serde(rename = "background", default)]
    background: Vec<ScattererText>,
    #[serde(rename = "cal_echo", default)]
    cal_echoes: Vec<EchoText>,
}

#[derive(Debug, thiserror::Error)]
pub enum SceneError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{section}[{index}]: {message}")]
    Item { section: &'static str, index: usize, message: String },
    #[error(transparent)]
    File(#[from] FileError),
}

fn finite(v: f64, what: &str) -> Result<f64, String> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{what} is not finite"))
    }
}

fn scatterer(t: &ScattererText) -> Result<Scatterer, String> {
    let kind = t.kind.ok_or("missing key 'kind'")?;
    let reject = |present: bool, key: &str| {
        if present {
            Err(format!("key '{key}' does not apply to this kind"))
        } else {
            Ok(())
        }
    };
    let placement = match kind {
        Kind::Sphere => {
            reject(t.position.is_some(), "position")?;
            reject(t.excess_path_m.is_some(), "excess_path_m")?;
            let r = finite(t.radius.ok_or("sphere needs 'radius'")?, "radius")?;
            if r <= 0.0 {
                return Err(format!("radius must be positive, got {r}"));
            }
            Placement::SphereSpecular { radius: r }
        }
        Kind::Point => {
            reject(t.radius.is_some(), "radius")?;
            reject(t.excess_path_m.is_some(), "excess_path_m")?;
            let p = t.position.ok_or("point needs 'position'")?;
            for v in p {
                finite(v, "position")?;
            }
            Placement::Point(p)
        }
        Kind::Direct => {
            reject(t.radius.is_some(), "radius")?;
            reject(t.position.is_some(), "position")?;
            reject(t.excess_path_m.is_some(), "excess_path_m")?;
            Placement::Direct
        }
        Kind::Path => {
            reject(t.radius.is_some(), "radius")?;
            reject(t.position.is_some(), "position")?;
            Placement::ExcessPath(finite(t.excess_path_m.ok_or("path needs 'excess_path_m'")?, "excess_path_m")?)
        }
    };
    let sigma = match (t.sigma_m2, t.sigma_dbsm, placement) {
        (Some(_), Some(_), _) => return Err("give only one of 'sigma_m2' and 'sigma_dbsm'".into()),
        (Some(s), None, _) => finite(s, "sigma_m2")?,
        (None, Some(db), _) => from_dbsm(finite(db, "sigma_dbsm")?),
        (None, None, Placement::SphereSpecular { radius }) => std::f64::consts::PI * radius * radius,
        (None, None, _) => return Err("missing 'sigma_m2' or 'sigma_dbsm'".into()),
    };
    if sigma < 0.0 {
        return Err(format!("sigma must be non-negative, got {sigma}"));
    }
    let mut s = Scatterer::from_sigma(placement, sigma, finite(t.phase_deg.unwrap_or(0.0), "phase_deg")?);
    if let Some(points) = &t.profile {
        let pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
        let profile = AngularProfile::new(pts)
            .ok_or("profile needs at least one point with finite, strictly increasing angles")?;
        s = s.with_profile(profile);
    }
    Ok(s)
}

/// Parses scene text. Sections: `[[target]]`, `[[background]]` with
/// `kind = "sphere" | "point" | "direct" | "path"`, and `[[cal_echo]]`.
pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let raw: SceneText = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        SceneError::Syntax { line, column, message: e.message().trim().to_string() }
    })?;
    let convert = |section: &'static str, items: &[ScattererText]| {
        items
            .iter()
            .enumerate()
            .map(|(index, t)| scatterer(t).map_err(|message| SceneError::Item { section, index, message }))
            .collect::<Result<Vec<_>, _>>()
    };
    let targets = convert("target", &raw.targets)?;
    let background = convert("background", &raw.background)?;
    let mut calibration_echoes = Vec::new();
    for (index, e) in raw.cal_echoes.iter().enumerate() {
        let ok = e.excess_path_m.is_finite() && e.level_db.is_finite() && e.phase_deg.is_finite();
        if !ok {
            return Err(SceneError::Item { section: "cal_echo", index, message: "values must be finite".into() });
        }
        calibration_echoes.push(Echo { excess_path_m: e.excess_path_m, level_db: e.level_db, phase_deg: e.phase_deg });
    }
    Ok(Scene { targets, background, calibration_echoes })
}

pub fn load_scene(path: &Path) -> Result<Scene, SceneError> {
    parse_scene(&read_text(path)?)
}

fn scatterer_text(s: &Scatterer) -> ScattererText {
    let mut t = ScattererText {
        sigma_dbsm: Some(to_dbsm(s.amplitude.norm_sqr())),
        phase_deg: Some(s.amplitude.arg().to_degrees()),
        profile: s.angular_profile.as_ref().map(|p| p.points().iter().map(|&(b, g)| [b, g]).collect()),
        ..Default::default()
    };
    match s.placement {
        Placement::SphereSpecular { radius } => {
            t.kind = Some(Kind::Sphere);
            t.radius = Some(radius);
        }
        Placement::Point(p) => {
            t.kind = Some(Kind::Point);
            t.position = Some(p);
        }
        Placement::Direct => t.kind = Some(Kind::Direct),
        Placement::ExcessPath(l) => {
            t.kind = Some(Kind::Path);
            t.excess_path_m = Some(l);
        }
    }
    t
}

/// Scene as text accepted by [`parse_scene`].
pub fn scene_to_toml(scene: &Scene) -> String {
    let text = SceneText {
        targets: scene.targets.iter().map(scatterer_text).collect(),
        background: scene.background.iter().map(scatterer_text).collect(),
        cal_echoes: scene
            .calibration_echoes
            .iter()
            .map(|e| EchoText { excess_path_m: e.excess_path_m, level_db: e.level_db, phase_deg: e.phase_deg })
            .collect(),
    };
    toml::to_string(&text).expect("scene fields are always representable")
}
