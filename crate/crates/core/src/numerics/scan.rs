//! Grid scan engine: candidate collection, pattern-search refinement and
//! cluster merging for zero sets of displacement-like objectives, plus the
//! fixed point and coincidence front-ends built on it.
//!
//! Scans are data-parallel over latitude bands; candidates are gathered in
//! band order and all subsequent steps are sequential and deterministic, so
//! results do not depend on the thread count.

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::vec3::Vec3;
use crate::geometry::{rp2_distance, CatalogMap, RP2Point, SpherePoint, SurfacePoint, SurfaceSpace};
use crate::numerics::chart::{gnomonic, tangent_basis};
use crate::numerics::grid::{rp2_bands, sphere_bands, Band, GridSpec};
use crate::numerics::index::{self, IndexResult};
use crate::numerics::NumericsError;

/// Candidates are kept when the objective falls below
/// `CANDIDATE_FACTOR * resolution`.
const CANDIDATE_FACTOR: f64 = 10.0;
/// A refined minimum counts as a zero when below
/// `ACCEPT_FACTOR * final_scale`.
const ACCEPT_FACTOR: f64 = 100.0;
/// Pattern-search steps never expand beyond this chordal scale.
const MAX_STEP: f64 = 0.3;

/// Scan domain: the sphere, or the projective plane via canonical
/// representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Domain {
    Sphere,
    Projective,
}

impl Domain {
    fn bands(&self, resolution: f64) -> Vec<Band> {
        match self {
            Domain::Sphere => sphere_bands(resolution),
            Domain::Projective => rp2_bands(resolution),
        }
    }

    fn metric(&self, a: &SpherePoint, b: &SpherePoint) -> f64 {
        match self {
            Domain::Sphere => a.chordal_distance(b),
            Domain::Projective => rp2_distance(a, b),
        }
    }

    fn canonical(&self, p: SpherePoint) -> SpherePoint {
        match self {
            Domain::Sphere => p,
            Domain::Projective => *RP2Point::from_sphere(&p).representative(),
        }
    }
}

fn step(domain: Domain, p: &SpherePoint, dir: (f64, f64), basis: &(Vec3, Vec3)) -> SpherePoint {
    let moved = p
        .as_vec3()
        .add(&basis.0.scaled(dir.0))
        .add(&basis.1.scaled(dir.1));
    domain.canonical(SpherePoint::new(moved.x, moved.y, moved.z).expect("step stays off origin"))
}

const DIRECTIONS: [(f64, f64); 8] = [
    (1.0, 0.0),
    (-1.0, 0.0),
    (0.0, 1.0),
    (0.0, -1.0),
    (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
    (std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2),
    (-std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
    (-std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2),
];

/// Pattern search with step expansion and contraction; returns the local
/// minimizer and its value at `final_scale` accuracy.
fn pattern_search<F>(
    domain: Domain,
    objective: &F,
    start: SpherePoint,
    start_scale: f64,
    final_scale: f64,
) -> (SpherePoint, f64)
where
    F: Fn(&SpherePoint) -> f64,
{
    let mut current = start;
    let mut value = objective(&current);
    let mut scale = start_scale;
    let mut iterations = 0usize;
    // contract one decade past final_scale so locations resolve to well
    // within the advertised scale
    while scale >= 0.1 * final_scale && iterations < 600 {
        iterations += 1;
        let basis = tangent_basis(&current);
        let mut best: Option<(SpherePoint, f64)> = None;
        for dir in DIRECTIONS {
            let cand = step(
                domain,
                &current,
                (dir.0 * scale, dir.1 * scale),
                &basis,
            );
            let v = objective(&cand);
            if v < value && best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                best = Some((cand, v));
            }
        }
        match best {
            Some((p, v)) => {
                current = p;
                value = v;
                scale = (scale * 2.0).min(MAX_STEP);
            }
            None => scale /= 2.0,
        }
    }
    (current, value)
}

/// Finite-difference step for residual Jacobians.
const NEWTON_FD_STEP: f64 = 1e-5;
const NEWTON_MAX_ITER: usize = 80;
const NEWTON_STEP_CAP: f64 = 0.1;

/// Newton polish on a 2-D residual field: quadratic convergence into
/// genuine zeros, and it slides along the narrow valleys of degenerate
/// displacement fields where coordinate pattern search stalls.
///
/// `residual(anchor, x)` evaluates the field at `x` in an output chart
/// fixed by `anchor`; the anchor is re-set to the current iterate each
/// step so the whole finite-difference stencil shares one chart.
fn newton_polish<F, R>(
    domain: Domain,
    scalar: &F,
    residual: &R,
    start: SpherePoint,
    start_value: f64,
) -> (SpherePoint, f64)
where
    F: Fn(&SpherePoint) -> f64,
    R: Fn(&SpherePoint, &SpherePoint) -> Option<[f64; 2]>,
{
    let mut current = start;
    let mut value = start_value;
    for _ in 0..NEWTON_MAX_ITER {
        let Some(v) = residual(&current, &current) else {
            break;
        };
        let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
        if norm < 1e-14 {
            break;
        }
        let basis = tangent_basis(&current);
        let mut jac = [[0.0f64; 2]; 2];
        let mut ok = true;
        for (k, dir) in [(1.0, 0.0), (0.0, 1.0)].into_iter().enumerate() {
            let plus = step(
                domain,
                &current,
                (dir.0 * NEWTON_FD_STEP, dir.1 * NEWTON_FD_STEP),
                &basis,
            );
            let minus = step(
                domain,
                &current,
                (-dir.0 * NEWTON_FD_STEP, -dir.1 * NEWTON_FD_STEP),
                &basis,
            );
            match (residual(&current, &plus), residual(&current, &minus)) {
                (Some(rp), Some(rm)) => {
                    jac[0][k] = (rp[0] - rm[0]) / (2.0 * NEWTON_FD_STEP);
                    jac[1][k] = (rp[1] - rm[1]) / (2.0 * NEWTON_FD_STEP);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            break;
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if !det.is_finite() || det.abs() < 1e-18 {
            break;
        }
        let mut d = [
            -(jac[1][1] * v[0] - jac[0][1] * v[1]) / det,
            -(-jac[1][0] * v[0] + jac[0][0] * v[1]) / det,
        ];
        let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
        if !len.is_finite() {
            break;
        }
        if len > NEWTON_STEP_CAP {
            d = [d[0] * NEWTON_STEP_CAP / len, d[1] * NEWTON_STEP_CAP / len];
        }
        // damped acceptance on the scalar objective
        let mut accepted = false;
        let mut factor = 1.0;
        for _ in 0..=5 {
            let cand = step(domain, &current, (d[0] * factor, d[1] * factor), &basis);
            let cv = scalar(&cand);
            if cv < value {
                current = cand;
                value = cv;
                accepted = true;
                break;
            }
            factor *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (current, value)
}

/// A refined local minimum of the scan objective.
#[derive(Debug, Clone)]
pub(crate) struct RefinedMin {
    pub point: SpherePoint,
    pub value: f64,
    pub diameter: f64,
    pub merged: usize,
}

/// Locates the zero clusters of `objective` on the domain.
///
/// Grid candidates below the candidate threshold are thinned to one per
/// `cluster_radius`, refined by pattern search, merged, and accepted as
/// zeros only when the refined value is consistent with an actual zero;
/// an intermediate value is reported as `GridTooCoarse`.
pub(crate) fn min_clusters<F, R>(
    domain: Domain,
    objective: &F,
    residual: &R,
    grid: &GridSpec,
) -> Result<Vec<RefinedMin>, NumericsError>
where
    F: Fn(&SpherePoint) -> f64 + Sync,
    R: Fn(&SpherePoint, &SpherePoint) -> Option<[f64; 2]> + Sync,
{
    grid.validate().map_err(NumericsError::InvalidGrid)?;
    let threshold = CANDIDATE_FACTOR * grid.resolution;
    let bands = domain.bands(grid.resolution);
    // keep only sub-threshold points that are local minima along their
    // band; any zero has such a point next to it, and this keeps the
    // candidate set small even when the objective is shallow over a large
    // region
    let mut candidates: Vec<(SpherePoint, f64)> = bands
        .par_iter()
        .map(|band| {
            let points: Vec<SpherePoint> = band.points().collect();
            let values: Vec<f64> = points.iter().map(objective).collect();
            let m = points.len();
            let mut local = Vec::new();
            for k in 0..m {
                if values[k] >= threshold {
                    continue;
                }
                let keep = if m == 1 {
                    true
                } else {
                    let prev = values[(k + m - 1) % m];
                    let next = values[(k + 1) % m];
                    // strict on one side so exactly-tied pairs keep one point,
                    // and full plateaus are not dropped entirely
                    (values[k] < prev && values[k] <= next)
                        || (values[k] == prev && values[k] == next)
                };
                if keep {
                    local.push((points[k], values[k]));
                }
            }
            local
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    candidates.sort_by(|a, b| a.1.total_cmp(&b.1));

    // one seed per cluster_radius neighbourhood
    let mut seeds: Vec<(SpherePoint, f64)> = Vec::new();
    for (p, v) in candidates {
        if seeds
            .iter()
            .all(|(s, _)| domain.metric(s, &p) > grid.cluster_radius)
        {
            seeds.push((p, v));
        }
    }

    let final_scale = grid.final_scale();
    let refined: Vec<(SpherePoint, f64)> = seeds
        .par_iter()
        .map(|(p, _)| {
            let (p1, v1) = pattern_search(domain, objective, *p, grid.resolution, final_scale);
            newton_polish(domain, objective, residual, p1, v1)
        })
        .collect();

    let mut sorted = refined;
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut clusters: Vec<RefinedMin> = Vec::new();
    for (p, v) in sorted {
        match clusters
            .iter_mut()
            .find(|c| domain.metric(&c.point, &p) <= grid.cluster_radius)
        {
            Some(c) => {
                c.diameter = c.diameter.max(domain.metric(&c.point, &p));
                c.merged += 1;
            }
            None => clusters.push(RefinedMin {
                point: p,
                value: v,
                diameter: 0.0,
                merged: 1,
            }),
        }
    }

    let accept = ACCEPT_FACTOR * final_scale;
    for c in &clusters {
        if c.value > accept {
            let (x, y, z) = c.point.coords();
            return Err(NumericsError::GridTooCoarse {
                value: c.value,
                location: [x, y, z],
            });
        }
    }
    clusters.sort_by(|a, b| {
        let (ax, ay, az) = a.point.coords();
        let (bx, by, bz) = b.point.coords();
        (ax, ay, az)
            .partial_cmp(&(bx, by, bz))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(clusters)
}

/// Deterministic global minimum of an objective over the grid, with one
/// pattern-search refinement pass from the best grid point.
pub(crate) fn global_min<F>(domain: Domain, objective: &F, grid: &GridSpec) -> (SpherePoint, f64)
where
    F: Fn(&SpherePoint) -> f64 + Sync,
{
    let bands = domain.bands(grid.resolution);
    let per_band: Vec<(SpherePoint, f64)> = bands
        .par_iter()
        .map(|band| {
            let mut best: Option<(SpherePoint, f64)> = None;
            for p in band.points() {
                let v = objective(&p);
                if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                    best = Some((p, v));
                }
            }
            best.expect("bands are non-empty")
        })
        .collect();
    let coarse = per_band
        .into_iter()
        .reduce(|a, b| if b.1 < a.1 { b } else { a })
        .expect("grid has at least one band");
    pattern_search(domain, objective, coarse.0, grid.resolution, grid.final_scale())
}

// ---------------------------------------------------------------------------
// fixed point scans
// ---------------------------------------------------------------------------

/// One isolated fixed point cluster.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointCluster {
    pub location: SurfacePoint,
    pub index: IndexResult,
    pub diameter: f64,
    /// Residual displacement at the refined location.
    pub displacement: f64,
    /// Coordinate of the split map this cluster came from (1-based), if the
    /// scan ran per coordinate.
    pub source: Option<usize>,
}

/// Clustered fixed points of a map at a given grid.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub map_id: String,
    pub grid: GridSpec,
    pub clusters: Vec<FixedPointCluster>,
    pub total_count: usize,
}

fn sphere_displacement<'a, F>(f: &'a F) -> impl Fn(&SpherePoint) -> f64 + Sync + 'a
where
    F: Fn(&SpherePoint) -> SpherePoint + Sync,
{
    move |p: &SpherePoint| p.chordal_distance(&f(p))
}

/// Chart residual `v(x) = g_a(x) − g_a(f(x))` for sphere fixed points.
pub(crate) fn fixed_point_residual_sphere<'a, F>(
    f: &'a F,
) -> impl Fn(&SpherePoint, &SpherePoint) -> Option<[f64; 2]> + Sync + 'a
where
    F: Fn(&SpherePoint) -> SpherePoint + Sync,
{
    move |anchor: &SpherePoint, x: &SpherePoint| {
        let basis = tangent_basis(anchor);
        let gx = gnomonic(anchor, &basis, x, 0.05)?;
        let gf = gnomonic(anchor, &basis, &f(x), 0.05)?;
        Some([gx[0] - gf[0], gx[1] - gf[1]])
    }
}

/// Chart residual for projective-plane fixed points; both the evaluation
/// point and the image class are represented by the lift nearest the
/// anchor, so the residual is continuous across the canonical-rep seam.
pub(crate) fn fixed_point_residual_rp2<'a, F>(
    f: &'a F,
) -> impl Fn(&SpherePoint, &SpherePoint) -> Option<[f64; 2]> + Sync + 'a
where
    F: Fn(&RP2Point) -> RP2Point + Sync,
{
    move |anchor: &SpherePoint, x: &SpherePoint| {
        let basis = tangent_basis(anchor);
        let x_branch = if x.as_vec3().dot(anchor.as_vec3()) >= 0.0 {
            *x
        } else {
            x.antipode()
        };
        let image = f(&RP2Point::from_sphere(x));
        let rep = image.representative();
        let image_branch = if rep.as_vec3().dot(anchor.as_vec3()) >= 0.0 {
            *rep
        } else {
            rep.antipode()
        };
        let gx = gnomonic(anchor, &basis, &x_branch, 0.05)?;
        let gf = gnomonic(anchor, &basis, &image_branch, 0.05)?;
        Some([gx[0] - gf[0], gx[1] - gf[1]])
    }
}

fn rp2_displacement<'a, F>(f: &'a F) -> impl Fn(&SpherePoint) -> f64 + Sync + 'a
where
    F: Fn(&RP2Point) -> RP2Point + Sync,
{
    move |rep: &SpherePoint| {
        let class = RP2Point::from_sphere(rep);
        class.distance(&f(&class))
    }
}

fn index_radii(grid: &GridSpec, min_separation: f64) -> Vec<f64> {
    let base = (2e-3f64)
        .max(200.0 * grid.final_scale())
        .min(0.3 * min_separation)
        .min(0.2);
    vec![base, base * 0.6, base * 1.6, base * 0.36]
}

/// Scans a sphere self-map for fixed points.
pub fn find_fixed_points_sphere<F>(
    f: &F,
    grid: &GridSpec,
    map_id: &str,
) -> Result<FixedPointReport, NumericsError>
where
    F: Fn(&SpherePoint) -> SpherePoint + Sync,
{
    let objective = sphere_displacement(f);
    let residual = fixed_point_residual_sphere(f);
    let mins = min_clusters(Domain::Sphere, &objective, &residual, grid)?;
    let clusters = attach_indices_sphere(f, grid, &mins, None);
    Ok(FixedPointReport {
        map_id: map_id.to_string(),
        grid: *grid,
        total_count: clusters.len(),
        clusters,
    })
}

/// Scans a projective-plane self-map for fixed points.
pub fn find_fixed_points_rp2<F>(
    f: &F,
    grid: &GridSpec,
    map_id: &str,
) -> Result<FixedPointReport, NumericsError>
where
    F: Fn(&RP2Point) -> RP2Point + Sync,
{
    let objective = rp2_displacement(f);
    let residual = fixed_point_residual_rp2(f);
    let mins = min_clusters(Domain::Projective, &objective, &residual, grid)?;
    let clusters = attach_indices_rp2(f, grid, &mins, None);
    Ok(FixedPointReport {
        map_id: map_id.to_string(),
        grid: *grid,
        total_count: clusters.len(),
        clusters,
    })
}

fn min_separation(mins: &[RefinedMin], k: usize, domain: Domain) -> f64 {
    mins.iter()
        .enumerate()
        .filter(|(j, _)| *j != k)
        .map(|(_, other)| domain.metric(&mins[k].point, &other.point))
        .fold(f64::INFINITY, f64::min)
}

fn attach_indices_sphere<F>(
    f: &F,
    grid: &GridSpec,
    mins: &[RefinedMin],
    source: Option<usize>,
) -> Vec<FixedPointCluster>
where
    F: Fn(&SpherePoint) -> SpherePoint + Sync,
{
    mins.iter()
        .enumerate()
        .map(|(k, m)| {
            let sep = min_separation(mins, k, Domain::Sphere);
            let index = index_radii(grid, sep)
                .into_iter()
                .find_map(|r| index::fixed_point_index_sphere(f, &m.point, r).ok())
                .unwrap_or(IndexResult::Unreliable);
            FixedPointCluster {
                location: SurfacePoint::Sphere(m.point),
                index,
                diameter: m.diameter,
                displacement: m.value,
                source,
            }
        })
        .collect()
}

fn attach_indices_rp2<F>(
    f: &F,
    grid: &GridSpec,
    mins: &[RefinedMin],
    source: Option<usize>,
) -> Vec<FixedPointCluster>
where
    F: Fn(&RP2Point) -> RP2Point + Sync,
{
    mins.iter()
        .enumerate()
        .map(|(k, m)| {
            let class = RP2Point::from_sphere(&m.point);
            let sep = min_separation(mins, k, Domain::Projective);
            let index = index_radii(grid, sep)
                .into_iter()
                .find_map(|r| index::fixed_point_index_rp2(f, &class, r).ok())
                .unwrap_or(IndexResult::Unreliable);
            FixedPointCluster {
                location: SurfacePoint::Projective(class),
                index,
                diameter: m.diameter,
                displacement: m.value,
                source,
            }
        })
        .collect()
}

/// Scans a catalog map for fixed points, dispatching on its surface.
pub fn find_fixed_points(map: &CatalogMap, grid: &GridSpec) -> Result<FixedPointReport, NumericsError> {
    match map.domain() {
        SurfaceSpace::Sphere => {
            find_fixed_points_sphere(&|p: &SpherePoint| map.sphere_image(p), grid, &map.id_string())
        }
        SurfaceSpace::Projective => {
            find_fixed_points_rp2(&|p: &RP2Point| map.rp2_image(p), grid, &map.id_string())
        }
    }
}

/// Scans each coordinate of a split map and returns the combined report,
/// with per-cluster provenance. Coordinates of a genuine split map are
/// pairwise coincidence-free, so clusters from different coordinates are
/// kept separate.
pub fn find_fixed_points_split(
    maps: &[CatalogMap],
    grid: &GridSpec,
) -> Result<FixedPointReport, NumericsError> {
    let mut clusters = Vec::new();
    let mut ids = Vec::new();
    for (k, map) in maps.iter().enumerate() {
        ids.push(map.id_string());
        match map.domain() {
            SurfaceSpace::Sphere => {
                let f = |p: &SpherePoint| map.sphere_image(p);
                let mins = min_clusters(
                    Domain::Sphere,
                    &sphere_displacement(&f),
                    &fixed_point_residual_sphere(&f),
                    grid,
                )?;
                clusters.extend(attach_indices_sphere(&f, grid, &mins, Some(k + 1)));
            }
            SurfaceSpace::Projective => {
                let f = |p: &RP2Point| map.rp2_image(p);
                let mins = min_clusters(
                    Domain::Projective,
                    &rp2_displacement(&f),
                    &fixed_point_residual_rp2(&f),
                    grid,
                )?;
                clusters.extend(attach_indices_rp2(&f, grid, &mins, Some(k + 1)));
            }
        }
    }
    Ok(FixedPointReport {
        map_id: ids.join(" + "),
        grid: *grid,
        total_count: clusters.len(),
        clusters,
    })
}

/// Result of a coincidence or displacement minimum scan.
#[derive(Debug, Clone, Serialize)]
pub struct MinScan {
    pub min: f64,
    pub argmin: SurfacePoint,
}

/// Minimum over the grid of `d(f(x), g(x))` for two projective-plane maps,
/// refined once around the argmin.
pub fn coincidence_min_distance_rp2<F, G>(f: F, g: G, grid: &GridSpec) -> MinScan
where
    F: Fn(&RP2Point) -> RP2Point + Sync,
    G: Fn(&RP2Point) -> RP2Point + Sync,
{
    let objective = move |rep: &SpherePoint| {
        let class = RP2Point::from_sphere(rep);
        f(&class).distance(&g(&class))
    };
    let (p, v) = global_min(Domain::Projective, &objective, grid);
    MinScan {
        min: v,
        argmin: SurfacePoint::Projective(RP2Point::from_sphere(&p)),
    }
}

/// Minimum over the grid of `d(f(x), g(x))` for two sphere maps.
pub fn coincidence_min_distance_sphere<F, G>(f: F, g: G, grid: &GridSpec) -> MinScan
where
    F: Fn(&SpherePoint) -> SpherePoint + Sync,
    G: Fn(&SpherePoint) -> SpherePoint + Sync,
{
    let objective = move |p: &SpherePoint| f(p).chordal_distance(&g(p));
    let (p, v) = global_min(Domain::Sphere, &objective, grid);
    MinScan {
        min: v,
        argmin: SurfacePoint::Sphere(p),
    }
}

/// Minimum displacement `d(x, f(x))` of a catalog map over its surface —
/// the fixed-point-freeness certificate when strictly positive.
pub fn min_displacement(map: &CatalogMap, grid: &GridSpec) -> MinScan {
    match map.domain() {
        SurfaceSpace::Sphere => {
            let f = |p: &SpherePoint| map.sphere_image(p);
            let objective = sphere_displacement(&f);
            let (p, v) = global_min(Domain::Sphere, &objective, grid);
            MinScan {
                min: v,
                argmin: SurfacePoint::Sphere(p),
            }
        }
        SurfaceSpace::Projective => {
            let f = |p: &RP2Point| map.rp2_image(p);
            let objective = rp2_displacement(&f);
            let (p, v) = global_min(Domain::Projective, &objective, grid);
            MinScan {
                min: v,
                argmin: SurfacePoint::Projective(RP2Point::from_sphere(&p)),
            }
        }
    }
}
