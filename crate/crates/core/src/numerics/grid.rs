//! Deterministic latitude-band grids on the sphere and the projective
//! plane, plus the scan parameters shared by all grid-based operations.

use serde::{Deserialize, Serialize};

use crate::geometry::SpherePoint;

/// Parameters of a grid scan.
///
/// `resolution` is the angular step between neighbouring grid points;
/// `refinement_depth` counts the decades of local refinement below the grid
/// scale (depth 3 refines a 1e-3 grid down to 1e-6 locations);
/// `cluster_radius` is the minimal separation between reported clusters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub resolution: f64,
    pub refinement_depth: u32,
    pub cluster_radius: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            resolution: 1e-3,
            refinement_depth: 3,
            cluster_radius: 5e-3,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.resolution > 0.0 && self.resolution.is_finite()) {
            return Err(format!("resolution {} must be positive", self.resolution));
        }
        if self.cluster_radius <= self.resolution {
            return Err(format!(
                "cluster_radius {} must exceed resolution {}",
                self.cluster_radius, self.resolution
            ));
        }
        Ok(())
    }

    /// Smallest refinement scale: `resolution / 10^depth`.
    pub fn final_scale(&self) -> f64 {
        self.resolution / 10f64.powi(self.refinement_depth as i32)
    }

    /// A grid with the same refinement but a coarser step.
    pub fn with_resolution(&self, resolution: f64) -> GridSpec {
        GridSpec {
            resolution,
            cluster_radius: self.cluster_radius.max(5.0 * resolution),
            ..*self
        }
    }
}

/// One latitude band: a circle of constant `phi` sampled at `count` equal
/// theta steps starting at `theta0`, spanning `theta_span`.
#[derive(Debug, Clone, Copy)]
pub struct Band {
    pub phi: f64,
    pub count: usize,
    pub theta0: f64,
    pub theta_span: f64,
}

impl Band {
    pub fn points(&self) -> impl Iterator<Item = SpherePoint> + '_ {
        let (sp, cp) = self.phi.sin_cos();
        (0..self.count).map(move |j| {
            let theta = self.theta0 + self.theta_span * j as f64 / self.count as f64;
            let (st, ct) = theta.sin_cos();
            SpherePoint::new(cp * ct, cp * st, sp).expect("unit vector")
        })
    }
}

fn band_at(phi: f64, resolution: f64, theta_span: f64) -> Band {
    let circumference = theta_span * phi.cos().abs();
    let count = ((circumference / resolution).ceil() as usize).max(1);
    Band {
        phi,
        count,
        theta0: 0.0,
        theta_span,
    }
}

/// Bands covering the whole sphere at the given angular resolution.
pub fn sphere_bands(resolution: f64) -> Vec<Band> {
    use std::f64::consts::{FRAC_PI_2, PI, TAU};
    let steps = (PI / resolution).ceil() as usize;
    (0..=steps)
        .map(|i| band_at(-FRAC_PI_2 + PI * i as f64 / steps as f64, resolution, TAU))
        .collect()
}

/// Bands covering the projective plane by canonical representatives: the
/// open upper hemisphere plus half of the equator.
pub fn rp2_bands(resolution: f64) -> Vec<Band> {
    use std::f64::consts::{FRAC_PI_2, PI, TAU};
    let steps = (FRAC_PI_2 / resolution).ceil() as usize;
    (0..=steps)
        .map(|i| {
            let phi = FRAC_PI_2 * i as f64 / steps as f64;
            if i == 0 {
                // equator: antipodal identification halves the circle
                band_at(phi, resolution, PI)
            } else {
                band_at(phi, resolution, TAU)
            }
        })
        .collect()
}

/// Lazy iterator over all sphere grid points at `resolution`.
pub fn sphere_grid_points(resolution: f64) -> impl Iterator<Item = SpherePoint> {
    sphere_bands(resolution)
        .into_iter()
        .flat_map(|band| band.points().collect::<Vec<_>>())
}

/// Total number of points in a band list.
pub fn point_count(bands: &[Band]) -> usize {
    bands.iter().map(|b| b.count).sum()
}

/// A resolution giving approximately `n` points on the full sphere.
pub fn resolution_for_points(n: usize) -> f64 {
    (4.0 * std::f64::consts::PI / n as f64).sqrt()
}
