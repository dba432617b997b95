//! Symbolic model of an n-valued self-map of a surface: the surface, the
//! multiplicity, and the permutation images of the fundamental group
//! generators under the composite homomorphism into `S_n`, with validation,
//! splitness detection, and the finite covering analysis that drives the
//! orbit-sum Nielsen formula.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::CatalogMap;
use crate::perm::{
    generate_group, is_free_stabilizer_action, orbit_partition, stabilizer, FreenessReport,
    GroupError, OrbitPartition, PermGroup, Permutation,
};
use crate::torus::TorusLinearPayload;

/// The four supported surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Surface {
    Disc,
    Sphere,
    ProjectivePlane,
    Torus,
}

impl Surface {
    /// Number of generators in the fundamental group presentation used for
    /// sigma: trivial for the disc and sphere, one involution generator for
    /// the projective plane, two commuting generators (meridian, longitude)
    /// for the torus.
    pub fn pi1_generator_count(&self) -> usize {
        match self {
            Surface::Disc | Surface::Sphere => 0,
            Surface::ProjectivePlane => 1,
            Surface::Torus => 2,
        }
    }

    pub fn orientable(&self) -> bool {
        !matches!(self, Surface::ProjectivePlane)
    }

    /// Presentation tag of the fundamental group.
    pub fn pi1_tag(&self) -> &'static str {
        match self {
            Surface::Disc | Surface::Sphere => "trivial",
            Surface::ProjectivePlane => "Z2",
            Surface::Torus => "ZxZ",
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Surface::Disc => "disc",
            Surface::Sphere => "sphere",
            Surface::ProjectivePlane => "projective_plane",
            Surface::Torus => "torus",
        };
        write!(f, "{name}")
    }
}

impl FromStr for Surface {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "disc" | "disk" | "d2" => Ok(Surface::Disc),
            "sphere" | "s2" => Ok(Surface::Sphere),
            "projective_plane" | "rp2" => Ok(Surface::ProjectivePlane),
            "torus" | "t2" => Ok(Surface::Torus),
            other => Err(format!("unknown surface {other:?}")),
        }
    }
}

/// Geometric payload for sphere / projective-plane instances: explicit
/// catalog coordinates of a split map.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogPayload {
    pub maps: Vec<CatalogMap>,
}

/// Optional concrete data attached to a descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    TorusLinear(TorusLinearPayload),
    Catalog(CatalogPayload),
}

/// The symbolic identity of an n-valued self-map.
#[derive(Debug, Clone, PartialEq)]
pub struct NValuedMapDescriptor {
    pub surface: Surface,
    pub n: usize,
    /// Images of the fundamental group generators in `S_n`.
    pub sigma: Vec<Permutation>,
    pub payload: Option<Payload>,
}

/// A single validation failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("n must be at least 1")]
    InvalidN,
    #[error("sigma must list {expected} permutation(s) for this surface, got {found}")]
    SigmaArity { expected: usize, found: usize },
    #[error("sigma[{index}] has degree {found}, expected n = {expected}")]
    DegreeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("relation violation: {0}")]
    RelationViolation(String),
    #[error("not realizable: {0}")]
    NotRealizable(String),
    #[error("payload mismatch: {0}")]
    PayloadMismatch(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DescriptorError {
    #[error("invalid descriptor: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Group(#[from] GroupError),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl NValuedMapDescriptor {
    pub fn new(surface: Surface, n: usize, sigma: Vec<Permutation>) -> Self {
        NValuedMapDescriptor {
            surface,
            n,
            sigma,
            payload: None,
        }
    }

    pub fn with_payload(mut self, payload: Payload) -> Self {
        self.payload = Some(payload);
        self
    }

    /// Checks that sigma is a genuine homomorphism respecting the surface
    /// presentation, that degrees line up, and that any payload matches.
    ///
    /// A projective-plane descriptor with non-trivial sigma is rejected:
    /// every n-valued map of the projective plane splits, so no such map
    /// exists to be analyzed.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        if self.n == 0 {
            violations.push(Violation::InvalidN);
        }
        let expected = self.surface.pi1_generator_count();
        if self.sigma.len() != expected {
            violations.push(Violation::SigmaArity {
                expected,
                found: self.sigma.len(),
            });
        }
        for (i, s) in self.sigma.iter().enumerate() {
            if s.degree() != self.n {
                violations.push(Violation::DegreeMismatch {
                    index: i,
                    expected: self.n,
                    found: s.degree(),
                });
            }
        }
        if violations.is_empty() {
            match self.surface {
                Surface::Torus => {
                    let ab = self.sigma[0].compose(&self.sigma[1]);
                    let ba = self.sigma[1].compose(&self.sigma[0]);
                    if ab != ba {
                        violations.push(Violation::RelationViolation(format!(
                            "torus generator images must commute: {}∘{} ≠ {}∘{}",
                            self.sigma[0], self.sigma[1], self.sigma[1], self.sigma[0]
                        )));
                    }
                }
                Surface::ProjectivePlane => {
                    let s = &self.sigma[0];
                    if !s.compose(s).is_identity() {
                        violations.push(Violation::RelationViolation(format!(
                            "projective-plane generator image {s} must square to the identity"
                        )));
                    } else if !s.is_identity() {
                        violations.push(Violation::NotRealizable(
                            "every n-valued map of the projective plane is split; \
                             non-trivial sigma does not correspond to any map"
                                .into(),
                        ));
                    }
                }
                _ => {}
            }
        }
        if let Some(payload) = &self.payload {
            match payload {
                Payload::TorusLinear(_) => {
                    if self.surface != Surface::Torus {
                        violations.push(Violation::PayloadMismatch(
                            "torus linear payload on a non-torus descriptor".into(),
                        ));
                    } else if self.n != 2 {
                        violations.push(Violation::PayloadMismatch(format!(
                            "torus linear payload requires n = 2, got n = {}",
                            self.n
                        )));
                    }
                }
                Payload::Catalog(catalog) => {
                    if self.surface == Surface::Torus {
                        violations.push(Violation::PayloadMismatch(
                            "catalog payload on a torus descriptor".into(),
                        ));
                    }
                    if catalog.maps.len() != self.n {
                        violations.push(Violation::PayloadMismatch(format!(
                            "catalog payload lists {} map(s) for n = {}",
                            catalog.maps.len(),
                            self.n
                        )));
                    }
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// True iff every generator image is the identity, i.e. the composite
    /// homomorphism lands in the pure braid group and the map lifts.
    pub fn is_split(&self) -> Result<bool, DescriptorError> {
        self.validate().map_err(DescriptorError::Invalid)?;
        Ok(self.sigma.iter().all(|s| s.is_identity()))
    }

    /// Full covering analysis of the descriptor.
    pub fn covering_analysis(&self) -> Result<CoveringAnalysis, DescriptorError> {
        self.validate().map_err(DescriptorError::Invalid)?;
        let l_prime = generate_group(&self.sigma, self.n)?;
        Ok(CoveringAnalysis::from_group(l_prime))
    }
}

/// The finite covering data determined by the image subgroup `L'`:
/// its order (the index of the kernel subgroup), the orbits of coordinate
/// indices with canonical representatives, per-index stabilizers, the
/// freeness verdict, and the lift count `n!`.
#[derive(Debug, Clone, Serialize)]
pub struct CoveringAnalysis {
    pub l_prime: PermGroup,
    /// `[π₁ : H] = |L'|`.
    pub index_h: usize,
    pub orbits: OrbitPartition,
    /// Stabilizer subgroups `L'_{i,i}`, indexed by `i - 1`.
    pub stabilizers: Vec<PermGroup>,
    /// `|L'_{i,i}|` per index: the number of coincidence points of the
    /// corresponding pair in one covering fiber.
    pub fiber_coincidence_counts: Vec<usize>,
    pub freeness: FreenessReport,
    /// Number of lifts of the composed split map: `n!`.
    pub lift_count: u64,
}

impl CoveringAnalysis {
    /// Analysis of an explicitly given image subgroup.
    pub fn from_group(l_prime: PermGroup) -> Self {
        let n = l_prime.degree();
        let orbits = orbit_partition(&l_prime);
        let stabilizers: Vec<PermGroup> = (1..=n)
            .map(|i| stabilizer(&l_prime, i).expect("index in range"))
            .collect();
        let fiber_coincidence_counts = stabilizers.iter().map(|s| s.order()).collect();
        let freeness = is_free_stabilizer_action(&l_prime);
        CoveringAnalysis {
            index_h: l_prime.order(),
            orbits,
            stabilizers,
            fiber_coincidence_counts,
            freeness,
            lift_count: (1..=n as u64).product(),
            l_prime,
        }
    }

    pub fn degree(&self) -> usize {
        self.l_prime.degree()
    }

    pub fn is_free(&self) -> bool {
        self.freeness.free
    }

    /// Canonical orbit representatives `I₀`.
    pub fn representatives(&self) -> &[usize] {
        &self.orbits.representatives
    }
}
