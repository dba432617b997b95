//! Degree of sphere self-maps by signed preimage counting at a regular
//! value, the mod-2 (absolute) degree of lifts `RP² → S²`, and the
//! homotopy classifiers built on them.
//!
//! Candidate regular values come from a seeded pseudo-random sequence for
//! reproducibility; a value is retried whenever a preimage looks singular,
//! and two distinct regular values must agree before a degree is reported.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{CatalogMap, RP2Point, Rp2Class, SpherePoint};
use crate::numerics::chart::{gnomonic, tangent_basis};
use crate::numerics::grid::GridSpec;
use crate::numerics::scan::{min_clusters, Domain};
use crate::numerics::NumericsError;

const MAX_VALUE_ATTEMPTS: usize = 12;
const FD_STEP: f64 = 1e-5;
const SINGULAR_DET_TOL: f64 = 1e-3;

fn random_point(rng: &mut ChaCha8Rng) -> SpherePoint {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    SpherePoint::new(r * theta.cos(), r * theta.sin(), z).expect("unit")
}

fn move_along(p: &SpherePoint, dir: &crate::geometry::vec3::Vec3, t: f64) -> SpherePoint {
    let v = p.as_vec3().add(&dir.scaled(t));
    SpherePoint::new(v.x, v.y, v.z).expect("unit")
}

/// Sign of the Jacobian determinant of `f` at `x`, in gnomonic charts at
/// `x` (domain) and `y = f(x)` (target); `None` when the preimage looks
/// singular and the regular value should be rejected.
fn jacobian_sign<F>(f: &F, x: &SpherePoint, y: &SpherePoint) -> Option<i64>
where
    F: Fn(&SpherePoint) -> SpherePoint,
{
    let dom = tangent_basis(x);
    let tgt = tangent_basis(y);
    let mut columns = [[0.0; 2]; 2];
    for (k, dir) in [dom.0, dom.1].iter().enumerate() {
        let plus = gnomonic(y, &tgt, &f(&move_along(x, dir, FD_STEP)), 0.05)?;
        let minus = gnomonic(y, &tgt, &f(&move_along(x, dir, -FD_STEP)), 0.05)?;
        columns[k] = [
            (plus[0] - minus[0]) / (2.0 * FD_STEP),
            (plus[1] - minus[1]) / (2.0 * FD_STEP),
        ];
    }
    let det = columns[0][0] * columns[1][1] - columns[0][1] * columns[1][0];
    if !det.is_finite() || det.abs() < SINGULAR_DET_TOL {
        return None;
    }
    Some(det.signum() as i64)
}

/// Signed preimage sum at one candidate regular value; `None` to retry.
fn signed_count_at<F>(f: &F, y: &SpherePoint, grid: &GridSpec) -> Option<i64>
where
    F: Fn(&SpherePoint) -> SpherePoint + Sync,
{
    let objective = |x: &SpherePoint| f(x).chordal_distance(y);
    let target_basis = tangent_basis(y);
    let residual =
        |_anchor: &SpherePoint, x: &SpherePoint| gnomonic(y, &target_basis, &f(x), 0.05);
    let clusters = match min_clusters(Domain::Sphere, &objective, &residual, grid) {
        Ok(c) => c,
        Err(NumericsError::GridTooCoarse { .. }) => return None,
        Err(_) => return None,
    };
    let mut sum = 0;
    for c in &clusters {
        sum += jacobian_sign(f, &c.point, y)?;
    }
    Some(sum)
}

/// Degree of a sphere self-map by signed preimage counting.
///
/// Two distinct regular values must agree; disagreement after the retry
/// budget is a `DegreeUnstable` error.
pub fn degree_sphere<F>(f: &F, grid: &GridSpec, seed: u64) -> Result<i64, NumericsError>
where
    F: Fn(&SpherePoint) -> SpherePoint + Sync,
{
    grid.validate().map_err(NumericsError::InvalidGrid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6465_6772);
    let mut sums: Vec<i64> = Vec::new();
    for _ in 0..MAX_VALUE_ATTEMPTS {
        let y = random_point(&mut rng);
        if let Some(sum) = signed_count_at(f, &y, grid) {
            if sums.contains(&sum) {
                return Ok(sum);
            }
            sums.push(sum);
        }
    }
    Err(NumericsError::DegreeUnstable { sums })
}

/// Degree of a sphere catalog map.
pub fn degree_sphere_map(map: &CatalogMap, grid: &GridSpec, seed: u64) -> Result<i64, NumericsError> {
    if map.domain() != crate::geometry::SurfaceSpace::Sphere {
        return Err(NumericsError::InvalidInput(format!(
            "degree_sphere expects a sphere map, got {}",
            map.id_string()
        )));
    }
    degree_sphere(&|p: &SpherePoint| map.sphere_image(p), grid, seed)
}

/// The degree of the 2-valued sphere map `{f, A∘f}`: the absolute degree of
/// its coordinate lift. The sign collapses because the two lift orderings
/// differ by composition with the antipodal map.
pub fn classify_2valued_sphere<F>(f: &F, grid: &GridSpec, seed: u64) -> Result<u64, NumericsError>
where
    F: Fn(&SpherePoint) -> SpherePoint + Sync,
{
    Ok(degree_sphere(f, grid, seed)?.unsigned_abs())
}

/// Parity (mod-2 degree) of a lift `RP² → S²`: the number of preimages of
/// a regular value, mod 2. Two regular values must agree on the parity.
pub fn mod2_degree_rp2_lift<F>(lift: &F, grid: &GridSpec, seed: u64) -> Result<u8, NumericsError>
where
    F: Fn(&RP2Point) -> SpherePoint + Sync,
{
    grid.validate().map_err(NumericsError::InvalidGrid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6c69_6674);
    let mut parities: Vec<u8> = Vec::new();
    for _ in 0..MAX_VALUE_ATTEMPTS {
        let y = random_point(&mut rng);
        let objective =
            |rep: &SpherePoint| lift(&RP2Point::from_sphere(rep)).chordal_distance(&y);
        let target_basis = tangent_basis(&y);
        let residual = |_anchor: &SpherePoint, rep: &SpherePoint| {
            gnomonic(&y, &target_basis, &lift(&RP2Point::from_sphere(rep)), 0.05)
        };
        let clusters = match min_clusters(Domain::Projective, &objective, &residual, grid) {
            Ok(c) => c,
            Err(NumericsError::GridTooCoarse { .. }) => continue,
            Err(e) => return Err(e),
        };
        let parity = (clusters.len() % 2) as u8;
        if parities.contains(&parity) {
            return Ok(parity);
        }
        parities.push(parity);
    }
    Err(NumericsError::DegreeUnstable {
        sums: parities.iter().map(|&p| p as i64).collect(),
    })
}

/// Classifies an ordered list of projective-plane coordinates by the parity
/// of their lift degrees: all even is the trivial class, all odd the
/// non-trivial one. Mixed parities cannot come from a genuine n-ordered
/// map and are rejected.
pub fn classify_rp2(
    maps: &[CatalogMap],
    grid: &GridSpec,
    seed: u64,
) -> Result<Rp2Class, NumericsError> {
    if maps.is_empty() {
        return Err(NumericsError::InvalidInput(
            "classify_rp2 needs at least one coordinate".into(),
        ));
    }
    let mut parities = Vec::with_capacity(maps.len());
    for (k, map) in maps.iter().enumerate() {
        let lift = map.rp2_lift().ok_or_else(|| {
            NumericsError::InvalidInput(format!(
                "coordinate {} ({}) is not a projective-plane catalog map",
                k + 1,
                map.id_string()
            ))
        })?;
        parities.push(mod2_degree_rp2_lift(&lift, grid, seed.wrapping_add(k as u64))?);
    }
    if parities.iter().all(|&p| p == 0) {
        Ok(Rp2Class::Trivial)
    } else if parities.iter().all(|&p| p == 1) {
        Ok(Rp2Class::NonTrivial)
    } else {
        Err(NumericsError::InconsistentClass { parities })
    }
}
