//! Coordinate realizations of the catalog maps on the sphere and the
//! projective plane: the antipodal map, constants, the near-identity
//! degree-1 map `f1`, the degree-2 map `f2`, the hemisphere-doubling map
//! `U_P` and the projective-plane map `W_P` it covers.
//!
//! `U_P` is `(θ, φ) ↦ (θ, 2φ − π/2)` in a spherical frame adapted to `P`;
//! in Cartesian form the rule collapses to `U_P(v) = 2⟨P,v⟩v − P`, which
//! is frame-free and absorbs the out-of-range latitude identification
//! without branches. `W_P` acts on classes by `W_P(p(x)) = p(U_P(x))`,
//! well defined because `U_P ∘ A = U_P`.

pub mod vec3;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use vec3::{rotation_taking, Vec3};

const NORTH_V: Vec3 = Vec3::new(0.0, 0.0, 1.0);

/// Chordal displacement bound required of `f1`: `2·sin(π/4)`, the chord of
/// a quarter turn. Anything below it keeps `A ∘ f1` fixed point free.
pub const F1_DISPLACEMENT_BOUND: f64 = std::f64::consts::SQRT_2;

/// Default translation parameter for [`make_f1`].
pub const F1_DEFAULT_EPSILON: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("point cannot be normalized to the unit sphere: ({0}, {1}, {2})")]
    InvalidPoint(f64, f64, f64),
    #[error("map expects a {expected} point, got a {found} point")]
    DomainMismatch {
        expected: SurfaceSpace,
        found: SurfaceSpace,
    },
    #[error("epsilon {epsilon} too large: grid displacement {max_displacement} ≥ {bound}",
            bound = F1_DISPLACEMENT_BOUND)]
    EpsilonTooLarge { epsilon: f64, max_displacement: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("representative validation failed: coordinates {i} and {j} come within {min}")]
    ValidationFailed { i: usize, j: usize, min: f64 },
    #[error("cannot parse catalog map {0:?}: {1}")]
    Parse(String, String),
}

/// Which surface a point or a map side lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurfaceSpace {
    Sphere,
    Projective,
}

impl fmt::Display for SurfaceSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceSpace::Sphere => write!(f, "S²"),
            SurfaceSpace::Projective => write!(f, "RP²"),
        }
    }
}

/// A point of the unit sphere in ℝ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint(Vec3);

impl SpherePoint {
    pub const NORTH: SpherePoint = SpherePoint(Vec3::new(0.0, 0.0, 1.0));
    pub const SOUTH: SpherePoint = SpherePoint(Vec3::new(0.0, 0.0, -1.0));

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, GeometryError> {
        let v = Vec3::new(x, y, z);
        let n = v.norm();
        if !n.is_finite() || n < 1e-12 {
            return Err(GeometryError::InvalidPoint(x, y, z));
        }
        Ok(SpherePoint(v.scaled(1.0 / n)))
    }

    fn from_unit(v: Vec3) -> Self {
        // renormalize to absorb rounding from rotations and chart trips
        SpherePoint(v.scaled(1.0 / v.norm()))
    }

    pub fn coords(&self) -> (f64, f64, f64) {
        (self.0.x, self.0.y, self.0.z)
    }

    pub(crate) fn as_vec3(&self) -> &Vec3 {
        &self.0
    }

    pub fn antipode(&self) -> SpherePoint {
        SpherePoint(self.0.neg())
    }

    /// Euclidean (chordal) distance in ℝ³.
    pub fn chordal_distance(&self, other: &SpherePoint) -> f64 {
        self.0.sub(&other.0).norm()
    }

    /// Geodesic angle in `[0, π]`.
    pub fn angular_distance(&self, other: &SpherePoint) -> f64 {
        self.0.dot(&other.0).clamp(-1.0, 1.0).acos()
    }
}

impl Serialize for SpherePoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (x, y, z) = self.coords();
        [x, y, z].serialize(serializer)
    }
}

/// Spherical coordinates `(θ, φ)` with `θ ∈ [0, 2π)` and `φ ∈ [−π/2, π/2]`;
/// Cartesian rule `(cos φ cos θ, cos φ sin θ, sin φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCoord {
    pub theta: f64,
    pub phi: f64,
}

impl SphericalCoord {
    pub fn new(theta: f64, phi: f64) -> Result<Self, GeometryError> {
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&phi) {
            return Err(GeometryError::InvalidParameter(format!(
                "phi {phi} outside [-π/2, π/2]"
            )));
        }
        let mut theta = theta % TAU;
        if theta < 0.0 {
            theta += TAU;
        }
        Ok(SphericalCoord { theta, phi })
    }

    pub fn to_point(&self) -> SpherePoint {
        let (sp, cp) = self.phi.sin_cos();
        let (st, ct) = self.theta.sin_cos();
        SpherePoint::from_unit(Vec3::new(cp * ct, cp * st, sp))
    }

    pub fn from_point(p: &SpherePoint) -> SphericalCoord {
        let (x, y, z) = p.coords();
        let mut theta = y.atan2(x);
        if theta < 0.0 {
            theta += TAU;
        }
        SphericalCoord {
            theta,
            phi: z.clamp(-1.0, 1.0).asin(),
        }
    }
}

/// A point of the projective plane, stored as the canonical representative
/// of its antipodal pair: `z > 0`, or `z = 0` and `y > 0`, or
/// `z = y = 0` and `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RP2Point {
    rep: SpherePoint,
}

impl RP2Point {
    /// Class of a sphere point under the antipodal identification.
    pub fn from_sphere(p: &SpherePoint) -> RP2Point {
        let (x, y, z) = p.coords();
        let keep = if z != 0.0 {
            z > 0.0
        } else if y != 0.0 {
            y > 0.0
        } else {
            x > 0.0
        };
        RP2Point {
            rep: if keep { *p } else { p.antipode() },
        }
    }

    pub fn representative(&self) -> &SpherePoint {
        &self.rep
    }

    /// Quotient metric `d(p(a), p(b)) = min(‖a − b‖, ‖a + b‖)`.
    pub fn distance(&self, other: &RP2Point) -> f64 {
        rp2_distance(&self.rep, &other.rep)
    }
}

impl Serialize for RP2Point {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.rep.serialize(serializer)
    }
}

/// The quotient metric evaluated on arbitrary representatives.
pub fn rp2_distance(a: &SpherePoint, b: &SpherePoint) -> f64 {
    a.chordal_distance(b).min(a.chordal_distance(&b.antipode()))
}

/// A lift `RP² → S²` of a projective-plane catalog map.
pub type Rp2Lift = Box<dyn Fn(&RP2Point) -> SpherePoint + Sync>;

/// A point of either surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SurfacePoint {
    Sphere(SpherePoint),
    Projective(RP2Point),
}

impl SurfacePoint {
    pub fn space(&self) -> SurfaceSpace {
        match self {
            SurfacePoint::Sphere(_) => SurfaceSpace::Sphere,
            SurfacePoint::Projective(_) => SurfaceSpace::Projective,
        }
    }
}

/// The catalog of concrete maps.
///
/// `F1` translates by `epsilon` in the stereographic chart from its pole,
/// so the pole is its only fixed point. `F2` is the degree-2 rational map
/// `w ↦ w + 1/w` in the stereographic chart from the north pole; its only
/// fixed point is the north pole (the suspension basepoint), and the only
/// fixed point of `A ∘ F2` is the south pole (the suspension class of
/// `(−1, 1/2)`).
#[derive(Debug, Clone, PartialEq)]
pub enum CatalogMap {
    /// `x ↦ −x` on the sphere.
    Antipodal,
    /// Constant sphere map.
    Constant(SpherePoint),
    /// Stereographic translation with a single fixed point at `pole`.
    F1 { pole: SpherePoint, epsilon: f64 },
    /// Degree-2 map with a single fixed point at the north pole.
    F2,
    /// Hemisphere doubling `(θ, φ) ↦ (θ, 2φ − π/2)` in the frame with pole `P`.
    UP(SpherePoint),
    /// The projective-plane map covered by `U_P`.
    WP(SpherePoint),
    /// Constant projective-plane map.
    ConstantRp2(RP2Point),
    /// Post-composition with the antipodal map (sphere maps only).
    AntipodalCompose(Box<CatalogMap>),
}

impl CatalogMap {
    pub fn domain(&self) -> SurfaceSpace {
        match self {
            CatalogMap::WP(_) | CatalogMap::ConstantRp2(_) => SurfaceSpace::Projective,
            CatalogMap::AntipodalCompose(inner) => inner.domain(),
            _ => SurfaceSpace::Sphere,
        }
    }

    pub fn codomain(&self) -> SurfaceSpace {
        self.domain()
    }

    /// Evaluates the map, checking the point lies in its domain.
    pub fn eval(&self, point: &SurfacePoint) -> Result<SurfacePoint, GeometryError> {
        match (self.domain(), point) {
            (SurfaceSpace::Sphere, SurfacePoint::Sphere(p)) => {
                Ok(SurfacePoint::Sphere(self.sphere_image(p)))
            }
            (SurfaceSpace::Projective, SurfacePoint::Projective(p)) => {
                Ok(SurfacePoint::Projective(self.rp2_image(p)))
            }
            (expected, found) => Err(GeometryError::DomainMismatch {
                expected,
                found: found.space(),
            }),
        }
    }

    /// Direct evaluation for sphere-to-sphere catalog maps.
    ///
    /// Panics if the map is a projective-plane map; gate on [`Self::domain`]
    /// first when the variant is not statically known.
    pub fn sphere_image(&self, p: &SpherePoint) -> SpherePoint {
        match self {
            CatalogMap::Antipodal => p.antipode(),
            CatalogMap::Constant(c) => *c,
            CatalogMap::F1 { pole, epsilon } => f1_eval(pole, *epsilon, p),
            CatalogMap::F2 => f2_eval(p),
            CatalogMap::UP(pole) => up_eval(pole, p),
            CatalogMap::AntipodalCompose(inner) => inner.sphere_image(p).antipode(),
            CatalogMap::WP(_) | CatalogMap::ConstantRp2(_) => {
                panic!("sphere_image called on a projective-plane map")
            }
        }
    }

    /// Direct evaluation for projective-plane catalog maps.
    pub fn rp2_image(&self, p: &RP2Point) -> RP2Point {
        match self {
            CatalogMap::WP(pole) => {
                RP2Point::from_sphere(&up_eval(pole, p.representative()))
            }
            CatalogMap::ConstantRp2(c) => *c,
            _ => panic!("rp2_image called on a sphere map"),
        }
    }

    /// The lift `RP² → S²` of a projective-plane catalog map, where one
    /// exists: `W_P` lifts to `x̄ ↦ U_P(x)`, a constant lifts to a constant.
    pub fn rp2_lift(&self) -> Option<Rp2Lift> {
        match self {
            CatalogMap::WP(pole) => {
                let pole = *pole;
                Some(Box::new(move |p: &RP2Point| {
                    up_eval(&pole, p.representative())
                }))
            }
            CatalogMap::ConstantRp2(c) => {
                let value = *c.representative();
                Some(Box::new(move |_: &RP2Point| value))
            }
            _ => None,
        }
    }

    /// Identifier string accepted back by [`CatalogMap::parse`].
    pub fn id_string(&self) -> String {
        fn pt(p: &SpherePoint) -> String {
            let (x, y, z) = p.coords();
            format!("[{x},{y},{z}]")
        }
        match self {
            CatalogMap::Antipodal => "antipodal".into(),
            CatalogMap::Constant(c) => format!("constant(P={})", pt(c)),
            CatalogMap::F1 { pole, epsilon } => format!("f1(P={},eps={epsilon})", pt(pole)),
            CatalogMap::F2 => "f2".into(),
            CatalogMap::UP(p) => format!("up(P={})", pt(p)),
            CatalogMap::WP(p) => format!("wp(P={})", pt(p)),
            CatalogMap::ConstantRp2(c) => {
                format!("constant_rp2(P={})", pt(c.representative()))
            }
            CatalogMap::AntipodalCompose(inner) => format!("A*{}", inner.id_string()),
        }
    }

    /// Parses an id string: `antipodal`, `f2`, `constant(P=…)`,
    /// `f1(P=…,eps=…)`, `up(P=…)`, `wp(P=…)`, `constant_rp2(P=…)`, or a
    /// composition `A*…`. Points are Cartesian triples `[x,y,z]`, spherical
    /// pairs `[θ,φ]`, or the alias `north`.
    pub fn parse(input: &str) -> Result<CatalogMap, GeometryError> {
        let s = input.trim();
        let fail = |reason: &str| GeometryError::Parse(input.to_string(), reason.to_string());
        if let Some(rest) = s.strip_prefix("A*") {
            let inner = CatalogMap::parse(rest)?;
            if inner.domain() != SurfaceSpace::Sphere {
                return Err(fail("A* composition applies to sphere maps"));
            }
            return Ok(CatalogMap::AntipodalCompose(Box::new(inner)));
        }
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "antipodal" | "a" => return Ok(CatalogMap::Antipodal),
            "f2" => return Ok(CatalogMap::F2),
            _ => {}
        }
        let (head, args) = match lower.split_once('(') {
            Some((h, rest)) => {
                let rest = rest.strip_suffix(')').ok_or_else(|| fail("missing ')'"))?;
                (h.trim(), rest)
            }
            None => return Err(fail("unknown map id")),
        };
        let fields = parse_fields(args).map_err(|e| fail(&e))?;
        let point = |key: &str| -> Result<SpherePoint, GeometryError> {
            let raw = fields
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.as_str())
                .ok_or_else(|| fail(&format!("missing field {key}")))?;
            parse_point(raw).map_err(|e| fail(&e))
        };
        match head {
            "constant" => Ok(CatalogMap::Constant(point("p")?)),
            "constant_rp2" => Ok(CatalogMap::ConstantRp2(RP2Point::from_sphere(&point("p")?))),
            "up" => Ok(CatalogMap::UP(point("p")?)),
            "wp" => Ok(CatalogMap::WP(point("p")?)),
            "f1" => {
                let eps = fields
                    .iter()
                    .find(|(k, _)| k == "eps")
                    .map(|(_, v)| v.parse::<f64>())
                    .transpose()
                    .map_err(|e| fail(&format!("bad eps: {e}")))?
                    .unwrap_or(F1_DEFAULT_EPSILON);
                make_f1(&point("p")?, eps)
            }
            other => Err(fail(&format!("unknown map id {other:?}"))),
        }
    }
}

fn parse_fields(args: &str) -> Result<Vec<(String, String)>, String> {
    // split on commas not inside brackets
    let mut fields = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in args.chars() {
        match ch {
            '[' => {
                depth += 1;
                current.push(ch);
            }
            ']' => {
                depth = depth.checked_sub(1).ok_or("unbalanced brackets")?;
                current.push(ch);
            }
            ',' if depth == 0 => {
                fields.push(std::mem::take(&mut current));
                // continue
            }
            _ => current.push(ch),
        }
    }
    if !current.is_empty() {
        fields.push(current);
    }
    fields
        .into_iter()
        .map(|f| {
            let (k, v) = f.split_once('=').ok_or(format!("field {f:?} missing '='"))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn parse_point(raw: &str) -> Result<SpherePoint, String> {
    match raw {
        "north" | "n" => return Ok(SpherePoint::NORTH),
        "south" | "s" => return Ok(SpherePoint::SOUTH),
        _ => {}
    }
    let body = raw
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or(format!("point {raw:?} is not [..] or an alias"))?;
    let parts: Vec<f64> = body
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("bad coordinate: {e}"))?;
    match parts.as_slice() {
        [theta, phi] => Ok(SphericalCoord::new(*theta, *phi)
            .map_err(|e| e.to_string())?
            .to_point()),
        [x, y, z] => SpherePoint::new(*x, *y, *z).map_err(|e| e.to_string()),
        _ => Err(format!("point {raw:?} must have 2 or 3 coordinates")),
    }
}

// ---------------------------------------------------------------------------
// map formulas
// ---------------------------------------------------------------------------

fn stereo(p: &SpherePoint) -> Option<Complex64> {
    let (x, y, z) = p.coords();
    let denom = 1.0 - z;
    if denom < 1e-14 {
        None // the projection pole itself
    } else {
        Some(Complex64::new(x / denom, y / denom))
    }
}

fn inv_stereo(w: Complex64) -> SpherePoint {
    let n = w.norm_sqr();
    if !n.is_finite() || n > 1e300 {
        return SpherePoint::NORTH;
    }
    let d = 1.0 + n;
    SpherePoint::from_unit(Vec3::new(2.0 * w.re / d, 2.0 * w.im / d, (n - 1.0) / d))
}

fn up_eval(pole: &SpherePoint, p: &SpherePoint) -> SpherePoint {
    // Cartesian form of (θ, φ) ↦ (θ, 2φ − π/2) in a P-adapted frame:
    // with c = ⟨P, v⟩ the image is 2c·v − P, which is exactly unit and
    // exactly invariant under v ↦ −v, absorbing the out-of-range latitude
    // identification without branches.
    let c = pole.as_vec3().dot(p.as_vec3());
    let v = p.as_vec3().scaled(2.0 * c).sub(pole.as_vec3());
    SpherePoint(v)
}

fn f1_eval(pole: &SpherePoint, epsilon: f64, p: &SpherePoint) -> SpherePoint {
    let r = rotation_taking(pole.as_vec3(), &NORTH_V);
    let q = SpherePoint::from_unit(r.mul_vec(p.as_vec3()));
    let image = match stereo(&q) {
        None => SpherePoint::NORTH, // f1 fixes its pole
        Some(w) => inv_stereo(w + epsilon),
    };
    SpherePoint::from_unit(r.transpose().mul_vec(image.as_vec3()))
}

fn f2_eval(p: &SpherePoint) -> SpherePoint {
    match stereo(p) {
        None => SpherePoint::NORTH, // f2 fixes the north pole
        Some(w) => {
            if w.norm_sqr() < 1e-28 {
                return SpherePoint::NORTH; // south pole maps to the pole at infinity
            }
            inv_stereo(w + w.inv())
        }
    }
}

/// The suspension basepoint of `F2` — its unique fixed point.
pub fn f2_basepoint() -> SpherePoint {
    SpherePoint::NORTH
}

/// The image of the suspension class `(−1, 1/2)` under the fixed coordinate
/// identification — the unique fixed point of `A ∘ F2`.
pub fn f2_antipodal_fixed_point() -> SpherePoint {
    SpherePoint::SOUTH
}

/// Builds the near-identity degree-1 map with unique fixed point `pole`,
/// validating the chordal displacement bound on a coarse grid.
///
/// The translation realization keeps displacement below `2 sin(π/4)` for
/// `epsilon` up to `2√2 − 2 ≈ 0.828`.
pub fn make_f1(pole: &SpherePoint, epsilon: f64) -> Result<CatalogMap, GeometryError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(GeometryError::InvalidParameter(format!(
            "epsilon {epsilon} outside (0, 1)"
        )));
    }
    let map = CatalogMap::F1 {
        pole: *pole,
        epsilon,
    };
    let mut max_displacement: f64 = 0.0;
    for p in crate::numerics::grid::sphere_grid_points(0.02) {
        let d = p.chordal_distance(&map.sphere_image(&p));
        max_displacement = max_displacement.max(d);
    }
    if max_displacement >= F1_DISPLACEMENT_BOUND {
        return Err(GeometryError::EpsilonTooLarge {
            epsilon,
            max_displacement,
        });
    }
    Ok(map)
}

/// Homotopy class selector for projective-plane representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rp2Class {
    Trivial,
    NonTrivial,
}

/// The `n` arc points `(cos α_k, 0, sin α_k)`, `α_k = kπ / (2(n+1))`, on
/// the geodesic between `(1,0,0)` and `(0,0,1)`.
pub fn arc_points(n: usize) -> Vec<SpherePoint> {
    (1..=n)
        .map(|k| {
            let alpha = k as f64 * PI / (2.0 * (n as f64 + 1.0));
            SpherePoint::new(alpha.cos(), 0.0, alpha.sin()).expect("unit")
        })
        .collect()
}

/// Builds the `n`-coordinate Wecken representative of the requested
/// homotopy class: `(W_{P_1}, …, W_{P_n})` for the non-trivial class,
/// constants at the `p(P_k)` for the trivial one. Pairwise
/// coincidence-freeness is validated by a grid scan.
pub fn build_rp2_representative(
    n: usize,
    class: Rp2Class,
    grid: &crate::numerics::GridSpec,
) -> Result<Vec<CatalogMap>, GeometryError> {
    if n == 0 {
        return Err(GeometryError::InvalidParameter("n must be ≥ 1".into()));
    }
    let points = arc_points(n);
    let maps: Vec<CatalogMap> = match class {
        Rp2Class::NonTrivial => points.iter().map(|p| CatalogMap::WP(*p)).collect(),
        Rp2Class::Trivial => points
            .iter()
            .map(|p| CatalogMap::ConstantRp2(RP2Point::from_sphere(p)))
            .collect(),
    };
    const MIN_SEPARATION: f64 = 1e-6;
    for i in 0..n {
        for j in (i + 1)..n {
            let scan = crate::numerics::coincidence_min_distance_rp2(
                |p: &RP2Point| maps[i].rp2_image(p),
                |p: &RP2Point| maps[j].rp2_image(p),
                grid,
            );
            if scan.min <= MIN_SEPARATION {
                return Err(GeometryError::ValidationFailed {
                    i: i + 1,
                    j: j + 1,
                    min: scan.min,
                });
            }
        }
    }
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sp(x: f64, y: f64, z: f64) -> SpherePoint {
        SpherePoint::new(x, y, z).unwrap()
    }

    fn assert_points_close(a: &SpherePoint, b: &SpherePoint, tol: f64) {
        assert!(
            a.chordal_distance(b) <= tol,
            "{:?} vs {:?} (distance {})",
            a.coords(),
            b.coords(),
            a.chordal_distance(b)
        );
    }

    #[test]
    fn antipodal_of_north_is_south() {
        let a = CatalogMap::Antipodal;
        assert_points_close(
            &a.sphere_image(&SpherePoint::NORTH),
            &SpherePoint::SOUTH,
            1e-15,
        );
    }

    #[test]
    fn spherical_roundtrip_away_from_poles() {
        for &(theta, phi) in &[
            (0.3, 0.2),
            (4.5, -1.1),
            (std::f64::consts::PI, 0.0),
            (6.2, 1.4),
        ] {
            let c = SphericalCoord::new(theta, phi).unwrap();
            let back = SphericalCoord::from_point(&c.to_point());
            assert_relative_eq!(back.theta, c.theta, epsilon = 1e-9);
            assert_relative_eq!(back.phi, c.phi, epsilon = 1e-9);
        }
    }

    #[test]
    fn up_agrees_with_the_spherical_coordinate_rule() {
        // with the pole at north, compare against a literal evaluation of
        // (θ, φ) ↦ (θ, 2φ − π/2) through the Cartesian conversion
        let up = CatalogMap::UP(SpherePoint::NORTH);
        for &(theta, phi) in &[
            (0.0, 0.7),
            (1.3, -0.2),
            (2.9, 1.55),
            (4.1, -1.55),
            (5.5, 0.0),
            (0.77, -1.2),
        ] {
            let p = SphericalCoord::new(theta, phi).unwrap().to_point();
            let phi2: f64 = 2.0 * phi - FRAC_PI_2;
            let expected = SpherePoint::new(
                phi2.cos() * theta.cos(),
                phi2.cos() * theta.sin(),
                phi2.sin(),
            )
            .unwrap();
            assert_points_close(&up.sphere_image(&p), &expected, 1e-12);
        }
    }

    #[test]
    fn up_fixes_its_pole() {
        let pole = sp(0.3, -0.5, 0.4);
        let up = CatalogMap::UP(pole);
        assert_points_close(&up.sphere_image(&pole), &pole, 1e-12);
    }

    #[test]
    fn up_sends_equator_to_antipode_of_pole() {
        let pole = sp(0.1, 0.7, 0.3);
        let up = CatalogMap::UP(pole);
        // equator of the pole frame: any unit vector orthogonal to pole
        let e1 = pole.as_vec3().cross(&Vec3::new(0.0, 0.0, 1.0)).normalized();
        let e2 = pole.as_vec3().cross(&e1).normalized();
        for k in 0..17 {
            let t = k as f64 * TAU / 17.0;
            let q = SpherePoint::from_unit(e1.scaled(t.cos()).add(&e2.scaled(t.sin())));
            assert_points_close(&up.sphere_image(&q), &pole.antipode(), 1e-9);
        }
    }

    #[test]
    fn up_preserves_great_circles_through_its_pole() {
        // the image of any point stays in the plane spanned by the pole
        // and the point, so great circles through the pole map to
        // themselves
        let pole = sp(0.48, -0.6, 0.64);
        for seed in [sp(1.0, 0.0, 0.0), sp(0.0, 0.3, -0.9), sp(0.7, 0.7, 0.1)] {
            let normal = pole.as_vec3().cross(seed.as_vec3()).normalized();
            let e1 = *pole.as_vec3();
            let e2 = normal.cross(&e1).normalized();
            let up = CatalogMap::UP(pole);
            for k in 0..40 {
                let t = k as f64 * TAU / 40.0;
                let x = SpherePoint::from_unit(e1.scaled(t.cos()).add(&e2.scaled(t.sin())));
                let image = up.sphere_image(&x);
                assert!(
                    image.as_vec3().dot(&normal).abs() <= 1e-12,
                    "image left the great circle plane"
                );
            }
        }
    }

    #[test]
    fn up_maps_antipode_of_pole_to_pole() {
        let pole = SpherePoint::NORTH;
        let up = CatalogMap::UP(pole);
        assert_points_close(&up.sphere_image(&SpherePoint::SOUTH), &pole, 1e-12);
    }

    #[test]
    fn wp_fixes_class_of_pole() {
        let pole = sp(0.6, 0.0, 0.8);
        let wp = CatalogMap::WP(pole);
        let class = RP2Point::from_sphere(&pole);
        assert!(wp.rp2_image(&class).distance(&class) <= 1e-12);
    }

    #[test]
    fn wp_equals_w_minus_p_on_samples() {
        let pole = sp(0.2, 0.9, 0.1);
        let wp = CatalogMap::WP(pole);
        let wm = CatalogMap::WP(pole.antipode());
        for p in crate::numerics::grid::sphere_grid_points(0.05) {
            let class = RP2Point::from_sphere(&p);
            assert!(
                wp.rp2_image(&class).distance(&wm.rp2_image(&class)) <= 1e-9,
                "W_P ≠ W_(−P) at {:?}",
                p.coords()
            );
        }
    }

    #[test]
    fn up_is_equivariant_under_antipodal() {
        let pole = sp(-0.3, 0.4, 0.85);
        let up = CatalogMap::UP(pole);
        for p in crate::numerics::grid::sphere_grid_points(0.05) {
            let via_a = up.sphere_image(&p.antipode());
            let direct = up.sphere_image(&p);
            assert!(via_a.chordal_distance(&direct) <= 1e-9);
        }
    }

    #[test]
    fn diagram_commutes_projection_after_up_is_wp_after_projection() {
        let pole = sp(0.5, -0.5, 0.7);
        let up = CatalogMap::UP(pole);
        let wp = CatalogMap::WP(pole);
        for p in crate::numerics::grid::sphere_grid_points(0.05) {
            let left = RP2Point::from_sphere(&up.sphere_image(&p));
            let right = wp.rp2_image(&RP2Point::from_sphere(&p));
            assert!(left.distance(&right) <= 1e-9);
        }
    }

    #[test]
    fn canonicalization_is_idempotent_and_kills_antipodes() {
        for p in crate::numerics::grid::sphere_grid_points(0.2) {
            let c1 = RP2Point::from_sphere(&p);
            let c2 = RP2Point::from_sphere(c1.representative());
            assert_eq!(c1.representative().coords(), c2.representative().coords());
            let ca = RP2Point::from_sphere(&p.antipode());
            assert_eq!(c1.distance(&ca), 0.0);
        }
    }

    #[test]
    fn f1_fixes_pole_and_nothing_else_nearby() {
        let pole = sp(0.0, 0.6, 0.8);
        let f1 = make_f1(&pole, 0.1).unwrap();
        assert_points_close(&f1.sphere_image(&pole), &pole, 1e-12);
        // displacement is strictly positive off the pole
        for p in crate::numerics::grid::sphere_grid_points(0.05) {
            if p.angular_distance(&pole) > 1e-3 {
                assert!(p.chordal_distance(&f1.sphere_image(&p)) > 1e-9);
            }
        }
    }

    #[test]
    fn f1_rejects_oversized_epsilon() {
        let err = make_f1(&SpherePoint::NORTH, 0.9).unwrap_err();
        assert!(matches!(err, GeometryError::EpsilonTooLarge { .. }));
        assert!(make_f1(&SpherePoint::NORTH, 0.8).is_ok());
        assert!(matches!(
            make_f1(&SpherePoint::NORTH, 0.0),
            Err(GeometryError::InvalidParameter(_))
        ));
    }

    #[test]
    fn antipodal_after_f1_never_fixes() {
        let pole = sp(0.3, 0.3, 0.9);
        let f1 = make_f1(&pole, 0.1).unwrap();
        let af1 = CatalogMap::AntipodalCompose(Box::new(f1));
        let mut min = f64::INFINITY;
        for p in crate::numerics::grid::sphere_grid_points(0.05) {
            min = min.min(p.chordal_distance(&af1.sphere_image(&p)));
        }
        assert!(min > 1e-2, "min displacement {min}");
    }

    #[test]
    fn f2_fixes_north_and_maps_south_to_north() {
        assert_points_close(
            &CatalogMap::F2.sphere_image(&SpherePoint::NORTH),
            &SpherePoint::NORTH,
            1e-15,
        );
        assert_points_close(
            &CatalogMap::F2.sphere_image(&SpherePoint::SOUTH),
            &SpherePoint::NORTH,
            1e-15,
        );
    }

    #[test]
    fn antipodal_after_f2_fixes_south_only_on_axis() {
        let af2 = CatalogMap::AntipodalCompose(Box::new(CatalogMap::F2));
        assert_points_close(
            &af2.sphere_image(&SpherePoint::SOUTH),
            &SpherePoint::SOUTH,
            1e-15,
        );
        assert!(
            af2.sphere_image(&SpherePoint::NORTH)
                .chordal_distance(&SpherePoint::NORTH)
                > 1.0
        );
    }

    #[test]
    fn eval_rejects_domain_mismatch() {
        let wp = CatalogMap::WP(SpherePoint::NORTH);
        let err = wp
            .eval(&SurfacePoint::Sphere(SpherePoint::NORTH))
            .unwrap_err();
        assert!(matches!(err, GeometryError::DomainMismatch { .. }));
        let ok = CatalogMap::F2.eval(&SurfacePoint::Sphere(SpherePoint::SOUTH));
        assert!(ok.is_ok());
    }

    #[test]
    fn arc_points_are_distinct_and_non_antipodal() {
        let pts = arc_points(5);
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                assert!(pts[i].chordal_distance(&pts[j]) > 0.1);
                assert!(pts[i].chordal_distance(&pts[j].antipode()) > 0.1);
            }
        }
    }

    #[test]
    fn parse_catalog_ids() {
        assert_eq!(CatalogMap::parse("antipodal").unwrap(), CatalogMap::Antipodal);
        assert_eq!(CatalogMap::parse("f2").unwrap(), CatalogMap::F2);
        let f1 = CatalogMap::parse("f1(P=north,eps=0.1)").unwrap();
        assert!(matches!(f1, CatalogMap::F1 { .. }));
        let wp = CatalogMap::parse("wp(P=[0.0,0.5])").unwrap();
        assert!(matches!(wp, CatalogMap::WP(_)));
        let c = CatalogMap::parse("constant(P=[0,0,1])").unwrap();
        assert_eq!(c, CatalogMap::Constant(SpherePoint::NORTH));
        let comp = CatalogMap::parse("A*f2").unwrap();
        assert_eq!(
            comp,
            CatalogMap::AntipodalCompose(Box::new(CatalogMap::F2))
        );
        assert!(CatalogMap::parse("A*wp(P=north)").is_err());
        assert!(CatalogMap::parse("nonsense").is_err());
        // id_string round-trips
        for id in ["antipodal", "f2", "constant(P=[0,0,1])", "up(P=[0,0,1])"] {
            let m = CatalogMap::parse(id).unwrap();
            assert_eq!(CatalogMap::parse(&m.id_string()).unwrap(), m);
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_sphere_point() -> impl Strategy<Value = SpherePoint> {
            (
                -1.0f64..1.0,
                -1.0f64..1.0,
                -1.0f64..1.0,
            )
                .prop_filter_map("norm too small", |(x, y, z)| {
                    SpherePoint::new(x, y, z).ok()
                })
        }

        proptest! {
            #[test]
            fn rp2_metric_is_symmetric_and_rep_free(a in arb_sphere_point(), b in arb_sphere_point()) {
                let ca = RP2Point::from_sphere(&a);
                let cb = RP2Point::from_sphere(&b);
                prop_assert!((ca.distance(&cb) - cb.distance(&ca)).abs() < 1e-12);
                let from_reps = rp2_distance(&a, &b);
                prop_assert!((ca.distance(&cb) - from_reps).abs() < 1e-12);
            }

            #[test]
            fn rp2_metric_triangle_inequality(
                a in arb_sphere_point(),
                b in arb_sphere_point(),
                c in arb_sphere_point(),
            ) {
                let (ca, cb, cc) = (
                    RP2Point::from_sphere(&a),
                    RP2Point::from_sphere(&b),
                    RP2Point::from_sphere(&c),
                );
                prop_assert!(ca.distance(&cc) <= ca.distance(&cb) + cb.distance(&cc) + 1e-12);
                prop_assert!(ca.distance(&ca) == 0.0);
            }

            #[test]
            fn up_images_are_unit(p in arb_sphere_point(), q in arb_sphere_point()) {
                let up = CatalogMap::UP(q);
                let (x, y, z) = up.sphere_image(&p).coords();
                prop_assert!(((x * x + y * y + z * z).sqrt() - 1.0).abs() <= 1e-12);
            }
        }
    }
}
