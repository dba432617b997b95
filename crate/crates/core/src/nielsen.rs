//! Nielsen number computation: additivity over the coordinates of a split
//! map, the orbit-sum formula for non-split maps (valid when every
//! coordinate stabilizer acts freely), per-surface single-map Nielsen
//! numbers, and surface-level homotopy class counts.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::descriptor::{CoveringAnalysis, Surface};
use crate::perm::Permutation;
use crate::torus::IntMatrix2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NielsenError {
    #[error("split Nielsen sum needs at least one coordinate")]
    EmptyInput,
    #[error("stabilizer action is not free: index {witness_index} is fixed by {witness}")]
    NotFree {
        witness_index: usize,
        witness: Permutation,
    },
    #[error("missing per-pair Nielsen number for orbit representative {representative}")]
    MissingRepresentative { representative: usize },
    #[error("per-pair values for orbit of representative {representative} disagree: {a} vs {b}")]
    InconsistentInput {
        representative: usize,
        a: u64,
        b: u64,
    },
    #[error("per-pair key {index} outside 1..={degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("operation not supported on {surface}: {operation}")]
    UnsupportedSurface {
        surface: Surface,
        operation: &'static str,
    },
    #[error("wrong single-map datum for {surface}")]
    DataMismatch { surface: Surface },
}

/// `N(φ) = N(f_1) + ... + N(f_n)` for a split map.
pub fn nielsen_split(ns: &[u64]) -> Result<u64, NielsenError> {
    if ns.is_empty() {
        return Err(NielsenError::EmptyInput);
    }
    Ok(ns.iter().sum())
}

/// Input of the orbit-sum formula: the covering analysis plus the
/// coincidence Nielsen numbers `N(q, f_i)`, keyed by coordinate index.
/// Keys may name any member of an orbit; they are canonicalized to the
/// orbit representative, and values supplied for the same orbit must agree.
#[derive(Debug, Clone)]
pub struct NielsenInput {
    pub analysis: CoveringAnalysis,
    pub per_pair: BTreeMap<usize, u64>,
}

/// `N(φ) = Σ_{j ∈ I₀} N(q, f_{i_j})` for a non-split map whose stabilizer
/// action is free.
pub fn nielsen_nonsplit(input: &NielsenInput) -> Result<u64, NielsenError> {
    let analysis = &input.analysis;
    if let Some((i, alpha)) = analysis.freeness.witness.clone() {
        return Err(NielsenError::NotFree {
            witness_index: i,
            witness: alpha,
        });
    }
    let n = analysis.degree();
    let mut canonical: BTreeMap<usize, u64> = BTreeMap::new();
    for (&key, &value) in &input.per_pair {
        let rep = analysis
            .orbits
            .representative_of(key)
            .ok_or(NielsenError::IndexOutOfRange {
                index: key,
                degree: n,
            })?;
        match canonical.get(&rep) {
            Some(&existing) if existing != value => {
                return Err(NielsenError::InconsistentInput {
                    representative: rep,
                    a: existing,
                    b: value,
                });
            }
            _ => {
                canonical.insert(rep, value);
            }
        }
    }
    let mut total = 0u64;
    for &rep in analysis.representatives() {
        let value = canonical
            .get(&rep)
            .ok_or(NielsenError::MissingRepresentative { representative: rep })?;
        total += value;
    }
    Ok(total)
}

/// Per-surface datum for a single-valued coordinate map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SingleMapData {
    /// Degree of a sphere self-map.
    SphereDegree(i64),
    /// Projective-plane self-maps all have Nielsen number 1.
    ProjectivePlane,
    /// Disc coordinates are constants with Nielsen number 1.
    Disc,
    /// Matrix of a torus self-map on the fundamental group.
    TorusMatrix(IntMatrix2),
}

/// Nielsen number of a single coordinate map.
///
/// Sphere: `L(f) = 1 + deg`, and a simply connected target forces
/// `N ∈ {0, 1}`, so degree −1 is the only fixed-point-free class.
/// Torus: `|det(M − I)|`.
pub fn single_map_nielsen(surface: Surface, data: &SingleMapData) -> Result<u64, NielsenError> {
    match (surface, data) {
        (Surface::Sphere, SingleMapData::SphereDegree(d)) => Ok(if *d == -1 { 0 } else { 1 }),
        (Surface::ProjectivePlane, SingleMapData::ProjectivePlane) => Ok(1),
        (Surface::Disc, SingleMapData::Disc) => Ok(1),
        (Surface::Torus, SingleMapData::TorusMatrix(m)) => {
            Ok(m.sub(&IntMatrix2::IDENTITY).det().unsigned_abs())
        }
        (surface, _) => Err(NielsenError::DataMismatch { surface }),
    }
}

/// Number of homotopy classes of n-valued self-maps of a surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassCount {
    Finite(u64),
    /// Countably infinite, indexed by the degree.
    Countable,
}

/// Homotopy class count: one class on the disc; one on the sphere for
/// n ≥ 3 and countably many (indexed by degree) for n ≤ 2; two on the
/// projective plane. Torus classification is not provided.
pub fn classify_homotopy_count(surface: Surface, n: usize) -> Result<ClassCount, NielsenError> {
    if n == 0 {
        return Err(NielsenError::EmptyInput);
    }
    match surface {
        Surface::Disc => Ok(ClassCount::Finite(1)),
        Surface::Sphere => Ok(if n >= 3 {
            ClassCount::Finite(1)
        } else {
            ClassCount::Countable
        }),
        // for n = 1 the count refers to the classes inducing the trivial
        // homomorphism on the fundamental group, matching the n ≥ 2 picture
        Surface::ProjectivePlane => Ok(ClassCount::Finite(2)),
        Surface::Torus => Err(NielsenError::UnsupportedSurface {
            surface,
            operation: "homotopy class count",
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::{NValuedMapDescriptor, Surface};
    use crate::perm::{generate_group, Permutation};

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    fn analysis_of(gens: &[Permutation], n: usize) -> CoveringAnalysis {
        CoveringAnalysis::from_group(generate_group(gens, n).unwrap())
    }

    #[test]
    fn split_sums() {
        assert_eq!(nielsen_split(&[1, 0]).unwrap(), 1);
        assert_eq!(nielsen_split(&[1, 1]).unwrap(), 2);
        for n in 1..=7usize {
            assert_eq!(nielsen_split(&vec![1; n]).unwrap(), n as u64);
        }
        assert_eq!(nielsen_split(&[]).unwrap_err(), NielsenError::EmptyInput);
    }

    #[test]
    fn nonsplit_single_orbit() {
        let d = NValuedMapDescriptor::new(Surface::Torus, 2, vec![p("(1 2)", 2), p("id", 2)]);
        let analysis = d.covering_analysis().unwrap();
        let input = NielsenInput {
            analysis,
            per_pair: [(1, 3)].into_iter().collect(),
        };
        assert_eq!(nielsen_nonsplit(&input).unwrap(), 3);
    }

    #[test]
    fn nonsplit_two_orbits_sum() {
        // <(1 2)> acting on {1,2,3,4} is not free; use a free example with
        // two orbits instead: <(1 2)(3 4)> on {1..4}
        let analysis = analysis_of(&[p("(1 2)(3 4)", 4)], 4);
        assert_eq!(analysis.representatives(), &[1, 3]);
        let input = NielsenInput {
            analysis,
            per_pair: [(1, 2), (3, 5)].into_iter().collect(),
        };
        assert_eq!(nielsen_nonsplit(&input).unwrap(), 7);
    }

    #[test]
    fn nonsplit_rejects_nonfree_with_witness() {
        let analysis = analysis_of(&[p("(1 2)", 3), p("(1 2 3)", 3)], 3);
        let input = NielsenInput {
            analysis,
            per_pair: [(1, 1)].into_iter().collect(),
        };
        match nielsen_nonsplit(&input).unwrap_err() {
            NielsenError::NotFree {
                witness_index,
                witness,
            } => {
                assert!(!witness.is_identity());
                assert_eq!(witness.apply(witness_index), witness_index);
            }
            other => panic!("expected NotFree, got {other:?}"),
        }
    }

    #[test]
    fn nonsplit_canonicalizes_orbit_keys() {
        let d = NValuedMapDescriptor::new(Surface::Torus, 2, vec![p("(1 2)", 2), p("id", 2)]);
        let analysis = d.covering_analysis().unwrap();
        // keyed by the non-representative member of the orbit {1, 2}
        let input = NielsenInput {
            analysis: analysis.clone(),
            per_pair: [(2, 3)].into_iter().collect(),
        };
        assert_eq!(nielsen_nonsplit(&input).unwrap(), 3);
        // both coordinates supplied and equal: fine (Cor 4.10 equality)
        let input = NielsenInput {
            analysis: analysis.clone(),
            per_pair: [(1, 3), (2, 3)].into_iter().collect(),
        };
        assert_eq!(nielsen_nonsplit(&input).unwrap(), 3);
        // disagreement is an error, never averaged
        let input = NielsenInput {
            analysis,
            per_pair: [(1, 3), (2, 4)].into_iter().collect(),
        };
        assert!(matches!(
            nielsen_nonsplit(&input).unwrap_err(),
            NielsenError::InconsistentInput { .. }
        ));
    }

    #[test]
    fn nonsplit_missing_representative() {
        let analysis = analysis_of(&[p("(1 2)(3 4)", 4)], 4);
        let input = NielsenInput {
            analysis,
            per_pair: [(1, 2)].into_iter().collect(),
        };
        assert_eq!(
            nielsen_nonsplit(&input).unwrap_err(),
            NielsenError::MissingRepresentative { representative: 3 }
        );
    }

    #[test]
    fn nonsplit_rejects_out_of_range_keys() {
        let analysis = analysis_of(&[p("(1 2)", 2)], 2);
        let input = NielsenInput {
            analysis,
            per_pair: [(7, 1)].into_iter().collect(),
        };
        assert!(matches!(
            nielsen_nonsplit(&input).unwrap_err(),
            NielsenError::IndexOutOfRange { index: 7, .. }
        ));
    }

    #[test]
    fn single_map_values() {
        assert_eq!(
            single_map_nielsen(Surface::Sphere, &SingleMapData::SphereDegree(2)).unwrap(),
            1
        );
        assert_eq!(
            single_map_nielsen(Surface::Sphere, &SingleMapData::SphereDegree(-1)).unwrap(),
            0
        );
        assert_eq!(
            single_map_nielsen(Surface::Sphere, &SingleMapData::SphereDegree(0)).unwrap(),
            1
        );
        assert_eq!(
            single_map_nielsen(Surface::ProjectivePlane, &SingleMapData::ProjectivePlane).unwrap(),
            1
        );
        assert_eq!(
            single_map_nielsen(Surface::Disc, &SingleMapData::Disc).unwrap(),
            1
        );
        let m = IntMatrix2([[3, 0], [0, 3]]);
        assert_eq!(
            single_map_nielsen(Surface::Torus, &SingleMapData::TorusMatrix(m)).unwrap(),
            4
        );
        assert_eq!(
            single_map_nielsen(Surface::Torus, &SingleMapData::TorusMatrix(IntMatrix2::ZERO))
                .unwrap(),
            1
        );
        assert!(matches!(
            single_map_nielsen(Surface::Disc, &SingleMapData::SphereDegree(1)),
            Err(NielsenError::DataMismatch { .. })
        ));
    }

    #[test]
    fn homotopy_class_counts() {
        assert_eq!(
            classify_homotopy_count(Surface::Sphere, 5).unwrap(),
            ClassCount::Finite(1)
        );
        assert_eq!(
            classify_homotopy_count(Surface::Sphere, 2).unwrap(),
            ClassCount::Countable
        );
        assert_eq!(
            classify_homotopy_count(Surface::ProjectivePlane, 4).unwrap(),
            ClassCount::Finite(2)
        );
        assert_eq!(
            classify_homotopy_count(Surface::Disc, 9).unwrap(),
            ClassCount::Finite(1)
        );
        assert!(matches!(
            classify_homotopy_count(Surface::Torus, 2),
            Err(NielsenError::UnsupportedSurface { .. })
        ));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn split_sum_is_permutation_invariant_and_additive(
                mut xs in proptest::collection::vec(0u64..50, 1..10),
                ys in proptest::collection::vec(0u64..50, 1..10),
            ) {
                let base = nielsen_split(&xs).unwrap();
                xs.reverse();
                prop_assert_eq!(nielsen_split(&xs).unwrap(), base);
                let concat: Vec<u64> = xs.iter().chain(ys.iter()).copied().collect();
                prop_assert_eq!(
                    nielsen_split(&concat).unwrap(),
                    base + nielsen_split(&ys).unwrap()
                );
            }
        }
    }
}
