//! Fixed point index as a boundary winding number.
//!
//! The index of an isolated fixed point is the winding number of the
//! displacement field `v(x) = chart(x) − chart(f(x))` around a small circle
//! centred at the fixed point, computed in a gnomonic chart to stay clear
//! of pole singularities. Sampling is adaptive: the sample count doubles
//! until two consecutive counts agree on the integer.

use serde::Serialize;

use crate::geometry::vec3::Vec3;
use crate::geometry::{RP2Point, SpherePoint};
use crate::numerics::NumericsError;

/// Winding result: a certified integer or an explicit refusal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IndexResult {
    Integer(i64),
    /// Sampling failed to stabilize; no integer is asserted.
    Unreliable,
}

const MIN_SAMPLES: usize = 64;
const MAX_SAMPLES: usize = 1024;
/// A sample counts as a zero of the field when its norm drops this far
/// below the largest norm seen on the circle.
const ZERO_RATIO: f64 = 1e-12;

/// Winding number of the closed curve `s ↦ field(s)`, `s ∈ [0, 2π)`.
///
/// Errors with `ZeroOnCircle` if the field (nearly) vanishes at a sample
/// point relative to its scale on the circle; the caller should change the
/// radius and retry.
pub fn winding_number<F>(field: &F) -> Result<IndexResult, NumericsError>
where
    F: Fn(f64) -> [f64; 2],
{
    let mut samples = MIN_SAMPLES;
    let mut last: Option<i64> = None;
    while samples <= MAX_SAMPLES {
        let values: Vec<[f64; 2]> = (0..samples)
            .map(|k| field(2.0 * std::f64::consts::PI * k as f64 / samples as f64))
            .collect();
        let norms: Vec<f64> = values
            .iter()
            .map(|v| (v[0] * v[0] + v[1] * v[1]).sqrt())
            .collect();
        let max_norm = norms.iter().fold(0.0f64, |a, &b| a.max(b));
        if !max_norm.is_finite() {
            return Err(NumericsError::ZeroOnCircle { sample: 0 });
        }
        if let Some(sample) = norms
            .iter()
            .position(|&n| !n.is_finite() || n <= ZERO_RATIO * max_norm)
        {
            return Err(NumericsError::ZeroOnCircle { sample });
        }
        let mut total = 0.0;
        for k in 0..samples {
            let v = &values[k];
            let w = &values[(k + 1) % samples];
            let cross = v[0] * w[1] - v[1] * w[0];
            let dot = v[0] * w[0] + v[1] * w[1];
            total += cross.atan2(dot);
        }
        let turns = total / (2.0 * std::f64::consts::PI);
        let rounded = turns.round();
        // a clean winding leaves essentially no fractional residue
        if (turns - rounded).abs() < 0.05 {
            let n = rounded as i64;
            if last == Some(n) {
                return Ok(IndexResult::Integer(n));
            }
            last = Some(n);
        } else {
            last = None;
        }
        samples *= 2;
    }
    Ok(IndexResult::Unreliable)
}

/// Winding of a plane vector field around a circle — used for torus charts.
pub fn winding_number_plane<F>(
    field: &F,
    center: [f64; 2],
    radius: f64,
) -> Result<IndexResult, NumericsError>
where
    F: Fn([f64; 2]) -> [f64; 2],
{
    winding_number(&|s: f64| {
        let (sin, cos) = s.sin_cos();
        field([center[0] + radius * cos, center[1] + radius * sin])
    })
}

fn gnomonic(center: &SpherePoint, basis: &(Vec3, Vec3), y: &SpherePoint) -> Option<[f64; 2]> {
    let w = y.as_vec3().dot(center.as_vec3());
    if w <= 1e-9 {
        return None; // left the chart hemisphere
    }
    Some([y.as_vec3().dot(&basis.0) / w, y.as_vec3().dot(&basis.1) / w])
}

fn circle_point(center: &SpherePoint, basis: &(Vec3, Vec3), radius: f64, s: f64) -> SpherePoint {
    let (sin_s, cos_s) = s.sin_cos();
    let (sin_r, cos_r) = radius.sin_cos();
    let v = center
        .as_vec3()
        .scaled(cos_r)
        .add(&basis.0.scaled(sin_r * cos_s))
        .add(&basis.1.scaled(sin_r * sin_s));
    SpherePoint::new(v.x, v.y, v.z).expect("unit")
}

fn chart_basis(center: &SpherePoint) -> (Vec3, Vec3) {
    let v = center.as_vec3();
    let helper = if v.z.abs() < 0.9 {
        Vec3::new(0.0, 0.0, 1.0)
    } else {
        Vec3::new(1.0, 0.0, 0.0)
    };
    let e1 = v.cross(&helper).normalized();
    let e2 = v.cross(&e1).normalized();
    (e1, e2)
}

/// Index of a sphere map at an isolated fixed point `center`.
pub fn fixed_point_index_sphere<F>(
    f: &F,
    center: &SpherePoint,
    radius: f64,
) -> Result<IndexResult, NumericsError>
where
    F: Fn(&SpherePoint) -> SpherePoint,
{
    let basis = chart_basis(center);
    let chart_failed = std::cell::Cell::new(false);
    let result = winding_number(&|s: f64| {
        let x = circle_point(center, &basis, radius, s);
        let image = f(&x);
        let gx = gnomonic(center, &basis, &x).expect("circle stays in chart");
        match gnomonic(center, &basis, &image) {
            Some(gi) => [gx[0] - gi[0], gx[1] - gi[1]],
            None => {
                chart_failed.set(true);
                [1.0, 0.0] // placeholder; discarded below
            }
        }
    });
    if chart_failed.get() {
        return Ok(IndexResult::Unreliable);
    }
    result
}

/// Index of a projective-plane map at an isolated fixed point.
///
/// The winding is computed in the chart at the canonical representative;
/// image classes are represented by the lift lying in the chart hemisphere.
pub fn fixed_point_index_rp2<F>(
    f: &F,
    center: &RP2Point,
    radius: f64,
) -> Result<IndexResult, NumericsError>
where
    F: Fn(&RP2Point) -> RP2Point,
{
    let c = *center.representative();
    let basis = chart_basis(&c);
    let chart_failed = std::cell::Cell::new(false);
    let result = winding_number(&|s: f64| {
        let x = circle_point(&c, &basis, radius, s);
        let image_class = f(&RP2Point::from_sphere(&x));
        let rep = image_class.representative();
        let image = if rep.as_vec3().dot(c.as_vec3()) >= 0.0 {
            *rep
        } else {
            rep.antipode()
        };
        let gx = gnomonic(&c, &basis, &x).expect("circle stays in chart");
        match gnomonic(&c, &basis, &image) {
            Some(gi) => [gx[0] - gi[0], gx[1] - gi[1]],
            None => {
                chart_failed.set(true);
                [1.0, 0.0]
            }
        }
    });
    if chart_failed.get() {
        return Ok(IndexResult::Unreliable);
    }
    result
}
