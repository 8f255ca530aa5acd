//! Reference values computed independently in double precision and frozen.

use bistatic_cal::calib::{equal_radii_scale, ota_scale};
use bistatic_cal::model::{specular_path_length, sphere_rcs_optical, to_dbsm, FrequencyGrid, SphereTarget};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn default_grid_delay_axis() {
    let g = FrequencyGrid::default();
    assert!(close(g.range_bin(), 0.05989859300699301, 1e-14));
    assert!(close(g.unambiguous_path(), 59.9584916, 1e-14));
}

#[test]
fn one_foot_sphere_cross_section() {
    let s = SphereTarget::one_foot();
    let sigma = sphere_rcs_optical(&s).at(0);
    assert!(close(sigma, 0.07296587699003967, 1e-14));
    assert!(close(to_dbsm(sigma), -11.368801932987028, 1e-13));
}

#[test]
fn aperture_scale_factors() {
    assert!(close(equal_radii_scale(3.04), 5.388259706752768, 1e-14));
    assert!(close(ota_scale(3.04, 3.04), 5.388259706752768, 1e-14));
    assert!(close(ota_scale(2.0, 5.0), 5.0641538597300455, 1e-14));
}

#[test]
fn specular_ridge_path() {
    let r = 0.1524;
    assert!(close(specular_path_length(0.0, r, 3.04), -0.3048000000000002, 1e-12));
    assert!(close(specular_path_length(90.0, r, 3.04), -0.21156706661589464, 1e-12));
    assert!(close(specular_path_length(180.0, r, 3.04), 0.007635258456275551, 1e-10));
}
