use super::ModelError;

/// dB-valued map over bistatic angle (columns) and path length (rows).
///
/// Holds calibrated reflectivity in dBsm, or normalised power in dB for
/// uncalibrated maps.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectivityMap {
    betas_deg: Vec<f64>,
    path_m: Vec<f64>,
    /// Row-major: `cells[row * betas.len() + col]`, row = path index.
    cells: Vec<f64>,
}

impl ReflectivityMap {
    pub fn new(betas_deg: Vec<f64>, path_m: Vec<f64>, cells: Vec<f64>) -> Result<Self, ModelError> {
        if betas_deg.is_empty() || path_m.is_empty() {
            return Err(ModelError::InvalidMap("empty axis".into()));
        }
        if cells.len() != betas_deg.len() * path_m.len() {
            return Err(ModelError::InvalidMap(format!(
                "{} cells for {}x{} axes",
                cells.len(),
                path_m.len(),
                betas_deg.len()
            )));
        }
        for (name, axis) in [("beta", &betas_deg), ("path", &path_m)] {
            if !axis.iter().all(|v| v.is_finite()) || axis.windows(2).any(|w| w[1] <= w[0]) {
                return Err(ModelError::InvalidMap(format!("{name} axis must be finite and strictly increasing")));
            }
        }
        Ok(Self { betas_deg, path_m, cells })
    }

    /// Builds a map from per-angle columns, each sampled on `path_m`.
    pub fn from_columns(betas_deg: Vec<f64>, path_m: Vec<f64>, columns: &[Vec<f64>]) -> Result<Self, ModelError> {
        if columns.len() != betas_deg.len() || columns.iter().any(|c| c.len() != path_m.len()) {
            return Err(ModelError::InvalidMap("column shape does not match axes".into()));
        }
        let nb = betas_deg.len();
        let mut cells = vec![0.0; nb * path_m.len()];
        for (c, col) in columns.iter().enumerate() {
            for (r, &v) in col.iter().enumerate() {
                cells[r * nb + c] = v;
            }
        }
        Self::new(betas_deg, path_m, cells)
    }

    pub fn betas_deg(&self) -> &[f64] {
        &self.betas_deg
    }

    pub fn path_m(&self) -> &[f64] {
        &self.path_m
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.cells[row * self.betas_deg.len() + col]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.path_m.len()).map(|r| self.get(r, col)).collect()
    }

    /// Index of the path sample closest to `path`.
    pub fn nearest_row(&self, path: f64) -> usize {
        nearest(&self.path_m, path)
    }

    pub fn nearest_col(&self, beta_deg: f64) -> usize {
        nearest(&self.betas_deg, beta_deg)
    }

    /// Same shape with cells replaced.
    pub fn with_cells(&self, cells: Vec<f64>) -> Result<Self, ModelError> {
        Self::new(self.betas_deg.clone(), self.path_m.clone(), cells)
    }
}

fn nearest(axis: &[f64], x: f64) -> usize {
    axis.iter()
        .enumerate()
        .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}
