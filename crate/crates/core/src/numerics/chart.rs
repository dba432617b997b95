//! Shared tangent-frame and gnomonic-chart helpers for the scan, index and
//! degree machinery.

use crate::geometry::vec3::Vec3;
use crate::geometry::SpherePoint;

/// Deterministic orthonormal tangent basis at a sphere point.
pub(crate) fn tangent_basis(p: &SpherePoint) -> (Vec3, Vec3) {
    let v = p.as_vec3();
    let helper = if v.z.abs() < 0.9 {
        Vec3::new(0.0, 0.0, 1.0)
    } else {
        Vec3::new(1.0, 0.0, 0.0)
    };
    let e1 = v.cross(&helper).normalized();
    let e2 = v.cross(&e1).normalized();
    (e1, e2)
}

/// Gnomonic chart at `center` with the given tangent basis; `None` when
/// `y` leaves the usable part of the hemisphere.
pub(crate) fn gnomonic(
    center: &SpherePoint,
    basis: &(Vec3, Vec3),
    y: &SpherePoint,
    min_dot: f64,
) -> Option<[f64; 2]> {
    let w = y.as_vec3().dot(center.as_vec3());
    if w <= min_dot {
        return None;
    }
    Some([y.as_vec3().dot(&basis.0) / w, y.as_vec3().dot(&basis.1) / w])
}
