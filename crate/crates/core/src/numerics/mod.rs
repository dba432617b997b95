//! Grid-based fixed point and coincidence detection, winding-number fixed
//! point indices, sphere degrees by signed preimage counting, and the
//! homotopy classifiers built on these.
//!
//! All tolerances are governed by [`GridSpec`]; scans are deterministic for
//! a fixed grid and seed regardless of thread count.

pub(crate) mod chart;
pub mod degree;
pub mod grid;
pub mod index;
pub mod scan;

use thiserror::Error;

pub use degree::{
    classify_2valued_sphere, classify_rp2, degree_sphere, degree_sphere_map, mod2_degree_rp2_lift,
};
pub use grid::GridSpec;
pub use index::{
    fixed_point_index_rp2, fixed_point_index_sphere, winding_number, winding_number_plane,
    IndexResult,
};
pub use scan::{
    coincidence_min_distance_rp2, coincidence_min_distance_sphere, find_fixed_points,
    find_fixed_points_rp2, find_fixed_points_split, find_fixed_points_sphere, min_displacement,
    FixedPointCluster, FixedPointReport, MinScan,
};

use crate::geometry::{CatalogMap, SurfacePoint, SurfaceSpace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid too coarse: refined residual {value} at {location:?} is neither a certified zero nor clearly positive")]
    GridTooCoarse { value: f64, location: [f64; 3] },
    #[error("displacement field vanishes at circle sample {sample}; change the radius")]
    ZeroOnCircle { sample: usize },
    #[error("degree did not stabilize; observed sums {sums:?}")]
    DegreeUnstable { sums: Vec<i64> },
    #[error("coordinates disagree in lift parity {parities:?}; not a valid n-ordered representative")]
    InconsistentClass { parities: Vec<u8> },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Index of a catalog map at an isolated fixed point.
pub fn fixed_point_index(
    map: &CatalogMap,
    point: &SurfacePoint,
    radius: f64,
) -> Result<IndexResult, NumericsError> {
    match (map.domain(), point) {
        (SurfaceSpace::Sphere, SurfacePoint::Sphere(p)) => {
            fixed_point_index_sphere(&|x| map.sphere_image(x), p, radius)
        }
        (SurfaceSpace::Projective, SurfacePoint::Projective(p)) => {
            fixed_point_index_rp2(&|x| map.rp2_image(x), p, radius)
        }
        (expected, found) => Err(NumericsError::InvalidInput(format!(
            "map on {expected} evaluated at a {} point",
            found.space()
        ))),
    }
}
