use super::ModelError;

pub type Vec3 = [f64; 3];

/// In-plane spherical bistatic geometry.
///
/// The Tx aperture sits at azimuth 0 on a sphere of radius `r_tx`, the Rx
/// aperture at azimuth `beta` on a sphere of radius `r_rx`; co-elevations are
/// measured from +z. Both boresights point at the focal point (origin), so
/// no boresight direction is stored. `beta = 0` is monostatic backscatter and
/// `beta = 180` the anti-parallel (line-of-sight) calibration position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BistaticGeometry {
    r_tx: f64,
    r_rx: f64,
    beta_deg: f64,
    theta_ill_deg: f64,
    theta_obs_deg: f64,
}

impl BistaticGeometry {
    pub fn new(r_tx: f64, r_rx: f64, beta_deg: f64) -> Result<Self, ModelError> {
        Self::with_elevations(r_tx, r_rx, beta_deg, 90.0, 90.0)
    }

    pub fn with_elevations(
        r_tx: f64,
        r_rx: f64,
        beta_deg: f64,
        theta_ill_deg: f64,
        theta_obs_deg: f64,
    ) -> Result<Self, ModelError> {
        if !(r_tx.is_finite() && r_tx > 0.0) || !(r_rx.is_finite() && r_rx > 0.0) {
            return Err(ModelError::InvalidGeometry(format!(
                "radii must be positive and finite (r_tx={r_tx}, r_rx={r_rx})"
            )));
        }
        if !(beta_deg.is_finite() && theta_ill_deg.is_finite() && theta_obs_deg.is_finite()) {
            return Err(ModelError::InvalidGeometry("non-finite angle".into()));
        }
        Ok(Self {
            r_tx,
            r_rx,
            beta_deg: beta_deg.rem_euclid(360.0),
            theta_ill_deg,
            theta_obs_deg,
        })
    }

    /// Tx and Rx facing each other through the empty focal point.
    pub fn anti_parallel(r_tx: f64, r_rx: f64) -> Result<Self, ModelError> {
        Self::new(r_tx, r_rx, 180.0)
    }

    pub fn r_tx(&self) -> f64 {
        self.r_tx
    }

    pub fn r_rx(&self) -> f64 {
        self.r_rx
    }

    pub fn beta_deg(&self) -> f64 {
        self.beta_deg
    }

    pub fn theta_ill_deg(&self) -> f64 {
        self.theta_ill_deg
    }

    pub fn theta_obs_deg(&self) -> f64 {
        self.theta_obs_deg
    }

    pub fn with_beta(&self, beta_deg: f64) -> Self {
        Self { beta_deg: beta_deg.rem_euclid(360.0), ..*self }
    }

    /// Path through the focal point, `r_tx + r_rx`.
    pub fn focal_path(&self) -> f64 {
        self.r_tx + self.r_rx
    }

    pub fn tx_position(&self) -> Vec3 {
        let th = self.theta_ill_deg.to_radians();
        [self.r_tx * th.sin(), 0.0, self.r_tx * th.cos()]
    }

    pub fn rx_position(&self) -> Vec3 {
        let th = self.theta_obs_deg.to_radians();
        let b = self.beta_deg.to_radians();
        [
            self.r_rx * th.sin() * b.cos(),
            self.r_rx * th.sin() * b.sin(),
            self.r_rx * th.cos(),
        ]
    }

    /// Tx → point → Rx path minus the focal path.
    pub fn excess_path_via(&self, point: Vec3) -> f64 {
        distance(self.tx_position(), point) + distance(point, self.rx_position()) - self.focal_path()
    }

    /// Direct Tx → Rx path minus the focal path (antenna crosstalk).
    pub fn direct_excess_path(&self) -> f64 {
        distance(self.tx_position(), self.rx_position()) - self.focal_path()
    }

    /// Angles (radians) between each boresight and the direction to `point`,
    /// as `(tx, rx)`.
    pub fn off_boresight(&self, point: Vec3) -> (f64, f64) {
        let tx = self.tx_position();
        let rx = self.rx_position();
        (angle_between(neg(tx), sub(point, tx)), angle_between(neg(rx), sub(point, rx)))
    }

    /// Off-boresight direction to `point` split into (horizontal, vertical)
    /// angles in radians in each antenna's frame, as `(tx, rx)`.
    pub fn off_boresight_components(&self, point: Vec3) -> ((f64, f64), (f64, f64)) {
        (
            local_angles(self.tx_position(), point),
            local_angles(self.rx_position(), point),
        )
    }
}

fn local_angles(aperture: Vec3, point: Vec3) -> (f64, f64) {
    let n = norm(aperture);
    let b = [-aperture[0] / n, -aperture[1] / n, -aperture[2] / n];
    // vertical reference: +z projected off the boresight, x if degenerate
    let mut up = [-b[2] * b[0], -b[2] * b[1], 1.0 - b[2] * b[2]];
    if norm(up) < 1e-12 {
        up = [1.0 - b[0] * b[0], -b[0] * b[1], -b[0] * b[2]];
    }
    let un = norm(up);
    let up = [up[0] / un, up[1] / un, up[2] / un];
    let horiz = cross(b, up);
    let d = sub(point, aperture);
    let along = dot(d, b);
    (dot(d, horiz).atan2(along), dot(d, up).atan2(along))
}

/// Excess two-way path of the specular reflection off a sphere of radius `r`
/// centred in a spherical geometry of antenna radius `antenna_radius`, for
/// bistatic angle `beta_deg`; the reference is the focal path `2R`.
///
/// Even and 360°-periodic in `beta_deg`, equal to `-2r` at backscatter.
pub fn specular_path_length(beta_deg: f64, r: f64, antenna_radius: f64) -> f64 {
    debug_assert!(r > 0.0 && antenna_radius > r);
    // Fold onto [0, 180] first; both steps are exact in binary64.
    let mut folded = beta_deg.abs() % 360.0;
    if folded > 180.0 {
        folded = 360.0 - folded;
    }
    let half = folded.to_radians() / 2.0;
    let along = antenna_radius - r * half.cos().abs();
    let across = r * half.sin().abs();
    2.0 * along.hypot(across) - 2.0 * antenna_radius
}

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn neg(a: Vec3) -> Vec3 {
    [-a[0], -a[1], -a[2]]
}

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: Vec3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

fn distance(a: Vec3, b: Vec3) -> f64 {
    norm(sub(a, b))
}

fn angle_between(a: Vec3, b: Vec3) -> f64 {
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    let cos = dot(a, b) / (na * nb);
    cos.clamp(-1.0, 1.0).acos()
}
