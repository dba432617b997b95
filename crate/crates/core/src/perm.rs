//! Finite symmetric-group machinery: generated subgroups, orbits,
//! stabilizers, transporter cosets and the stabilizer-freeness test.
//!
//! Indices are 1-based throughout: a permutation of degree `n` acts on
//! `{1, ..., n}`. Degrees are capped (default 8) so that full closure
//! enumeration stays exact and cheap.

use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Default cap on the permutation degree accepted by [`generate_group`].
pub const DEFAULT_DEGREE_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("degree mismatch: expected degree {expected}, got {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("degree cap exceeded: degree {degree} > cap {cap} (closure may reach {degree}!)")]
    CapExceeded { degree: usize, cap: usize },
    #[error("index {index} out of range 1..={degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("invalid permutation: {0}")]
    Invalid(String),
    #[error("cannot parse permutation {input:?} for degree {degree}: {reason}")]
    Parse {
        input: String,
        degree: usize,
        reason: String,
    },
}

/// A permutation of `{1, ..., n}`, stored as its image list:
/// `images[k]` is the image of `k + 1` and is itself 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// The identity of degree `n`.
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// Builds a permutation from a 1-based image list, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img == 0 || img > n {
                return Err(GroupError::Invalid(format!(
                    "image {img} outside 1..={n}"
                )));
            }
            if seen[img - 1] {
                return Err(GroupError::Invalid(format!("image {img} repeated")));
            }
            seen[img - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of degree `n` from disjoint cycles given with
    /// 1-based entries, e.g. `&[vec![1, 2], vec![3, 4]]` for `(1 2)(3 4)`.
    pub fn from_cycles(cycles: &[Vec<usize>], n: usize) -> Result<Self, GroupError> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut moved = vec![false; n];
        for cycle in cycles {
            for window in 0..cycle.len() {
                let a = cycle[window];
                let b = cycle[(window + 1) % cycle.len()];
                if a == 0 || a > n || b == 0 || b > n {
                    return Err(GroupError::IndexOutOfRange {
                        index: a.max(b),
                        degree: n,
                    });
                }
                if moved[a - 1] {
                    return Err(GroupError::Invalid(format!(
                        "index {a} appears in more than one cycle"
                    )));
                }
                moved[a - 1] = true;
                images[a - 1] = b;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based index `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// Composition acting left-to-right on points: `(a.compose(b))(i) = a(b(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: (1..=self.degree())
                .map(|i| self.apply(other.apply(i)))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v - 1] = k + 1;
        }
        Permutation { images }
    }

    /// Parses either one-line image notation `[2,1,4,3]`, cycle notation
    /// `(1 2)(3 4)`, or `id`/`()` for the identity of degree `n`.
    pub fn parse(input: &str, n: usize) -> Result<Self, GroupError> {
        let s = input.trim();
        let err = |reason: &str| GroupError::Parse {
            input: input.to_string(),
            degree: n,
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Err(err("empty string"));
        }
        if s == "id" || s == "()" || s == "e" {
            return Ok(Permutation::identity(n));
        }
        if s.starts_with('[') {
            if !s.ends_with(']') {
                return Err(err("missing closing bracket"));
            }
            let body = &s[1..s.len() - 1];
            let images: Vec<usize> = body
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| err(&format!("bad image entry: {e}")))?;
            if images.len() != n {
                return Err(GroupError::DegreeMismatch {
                    expected: n,
                    found: images.len(),
                });
            }
            return Permutation::from_images(images);
        }
        if s.starts_with('(') {
            if !s.ends_with(')') {
                return Err(err("missing closing parenthesis"));
            }
            let mut cycles = Vec::new();
            for part in s[1..s.len() - 1].split(")(") {
                let cycle: Vec<usize> = part
                    .split([' ', ','])
                    .filter(|t| !t.is_empty())
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| err(&format!("bad cycle entry: {e}")))?;
                if !cycle.is_empty() {
                    cycles.push(cycle);
                }
            }
            return Permutation::from_cycles(&cycles, n);
        }
        Err(err("expected [..] image notation, (..) cycles, or id"))
    }
}

/// One-line image notation, e.g. `[2,1,4,3]`; this is the emitted form.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A finite subgroup of `S_n` with a full, sorted element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Permutation>,
    generators: Vec<Permutation>,
}

impl PermGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in lexicographic image order; the identity comes first.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    fn check_index(&self, i: usize) -> Result<(), GroupError> {
        if i == 0 || i > self.degree {
            Err(GroupError::IndexOutOfRange {
                index: i,
                degree: self.degree,
            })
        } else {
            Ok(())
        }
    }
}

impl Serialize for PermGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.elements.len()))?;
        for e in &self.elements {
            seq.serialize_element(e)?;
        }
        seq.end()
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Closure of `gens` under composition, as a subgroup of `S_n`.
///
/// Empty `gens` yields the trivial group. Uses the default degree cap;
/// see [`generate_group_with_cap`].
pub fn generate_group(gens: &[Permutation], n: usize) -> Result<PermGroup, GroupError> {
    generate_group_with_cap(gens, n, DEFAULT_DEGREE_CAP)
}

/// Same as [`generate_group`] with an explicit degree cap.
pub fn generate_group_with_cap(
    gens: &[Permutation],
    n: usize,
    cap: usize,
) -> Result<PermGroup, GroupError> {
    if n > cap {
        return Err(GroupError::CapExceeded { degree: n, cap });
    }
    for g in gens {
        if g.degree() != n {
            return Err(GroupError::DegreeMismatch {
                expected: n,
                found: g.degree(),
            });
        }
    }
    let bound = factorial(n) as usize;
    let mut seen: std::collections::HashSet<Permutation> =
        std::collections::HashSet::with_capacity(gens.len().max(1) * 4);
    seen.insert(Permutation::identity(n));
    let mut frontier = vec![Permutation::identity(n)];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = g.compose(&p);
            if seen.insert(q.clone()) {
                frontier.push(q);
                // cannot exceed n! for genuine permutations
                assert!(seen.len() <= bound, "closure exceeded {n}!");
            }
        }
    }
    let mut elements: Vec<Permutation> = seen.into_iter().collect();
    elements.sort();
    Ok(PermGroup {
        degree: n,
        elements,
        generators: gens.to_vec(),
    })
}

/// Orbits of `{1, ..., n}` under a subgroup, plus canonical representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    /// Sorted orbits, ordered by smallest member.
    pub orbits: Vec<Vec<usize>>,
    /// Smallest index of each orbit, ascending.
    pub representatives: Vec<usize>,
}

impl OrbitPartition {
    /// Representative of the orbit containing `i`.
    pub fn representative_of(&self, i: usize) -> Option<usize> {
        self.orbits
            .iter()
            .zip(&self.representatives)
            .find(|(orbit, _)| orbit.contains(&i))
            .map(|(_, &rep)| rep)
    }
}

/// Partition of `{1, ..., n}` into orbits under `g`.
pub fn orbit_partition(g: &PermGroup) -> OrbitPartition {
    let n = g.degree();
    let mut assigned = vec![false; n];
    let mut orbits = Vec::new();
    let mut representatives = Vec::new();
    for start in 1..=n {
        if assigned[start - 1] {
            continue;
        }
        let mut orbit: Vec<usize> = g.elements().iter().map(|p| p.apply(start)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &i in &orbit {
            assigned[i - 1] = true;
        }
        representatives.push(start);
        orbits.push(orbit);
    }
    OrbitPartition {
        orbits,
        representatives,
    }
}

/// The stabilizer subgroup `{α ∈ G : α(i) = i}`.
pub fn stabilizer(g: &PermGroup, i: usize) -> Result<PermGroup, GroupError> {
    g.check_index(i)?;
    let elements: Vec<Permutation> = g
        .elements()
        .iter()
        .filter(|p| p.apply(i) == i)
        .cloned()
        .collect();
    Ok(PermGroup {
        degree: g.degree(),
        generators: elements.clone(),
        elements,
    })
}

/// The transporter set `{α ∈ G : α(i) = j}`; empty or a left coset of the
/// stabilizer of `i`.
pub fn transporter(g: &PermGroup, i: usize, j: usize) -> Result<Vec<Permutation>, GroupError> {
    g.check_index(i)?;
    g.check_index(j)?;
    Ok(g.elements()
        .iter()
        .filter(|p| p.apply(i) == j)
        .cloned()
        .collect())
}

/// Outcome of the stabilizer-freeness test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub free: bool,
    /// For a non-free action: an index together with a non-identity element
    /// fixing it. `None` when free.
    pub witness: Option<(usize, Permutation)>,
}

/// Tests whether every point stabilizer is trivial — equivalently, whether
/// every non-identity element of `g` is fixed-point-free on `{1, ..., n}`.
pub fn is_free_stabilizer_action(g: &PermGroup) -> FreenessReport {
    for i in 1..=g.degree() {
        for p in g.elements() {
            if !p.is_identity() && p.apply(i) == i {
                return FreenessReport {
                    free: false,
                    witness: Some((i, p.clone())),
                };
            }
        }
    }
    FreenessReport {
        free: true,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All of S_n by direct enumeration (Heap's algorithm); independent of
    /// the closure code it checks.
    pub(crate) fn full_symmetric_group(n: usize) -> Vec<Permutation> {
        fn heap(k: usize, arr: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k <= 1 {
                out.push(arr.clone());
                return;
            }
            for i in 0..k {
                heap(k - 1, arr, out);
                if k.is_multiple_of(2) {
                    arr.swap(i, k - 1);
                } else {
                    arr.swap(0, k - 1);
                }
            }
        }
        let mut images: Vec<usize> = (1..=n).collect();
        let mut all = Vec::new();
        heap(n, &mut images, &mut all);
        let mut perms: Vec<Permutation> = all
            .into_iter()
            .map(|im| Permutation::from_images(im).unwrap())
            .collect();
        perms.sort();
        perms.dedup();
        perms
    }

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    #[test]
    fn empty_generating_set_gives_trivial_group() {
        let g = generate_group(&[], 3).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.elements()[0].is_identity());
    }

    #[test]
    fn involution_generates_order_two() {
        let g = generate_group(&[p("(1 2)", 2)], 2).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn transposition_and_three_cycle_generate_s3() {
        let g = generate_group(&[p("(1 2)", 3), p("(1 2 3)", 3)], 3).unwrap();
        assert_eq!(g.order(), 6);
        // oracle: closure must equal the directly enumerated S_3
        assert_eq!(g.elements(), full_symmetric_group(3).as_slice());
    }

    #[test]
    fn degree_mismatch_rejected() {
        let err = generate_group(&[p("(1 2)", 2)], 3).unwrap_err();
        assert_eq!(
            err,
            GroupError::DegreeMismatch {
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn cap_exceeded_rejected() {
        let err = generate_group(&[], 9).unwrap_err();
        assert!(matches!(err, GroupError::CapExceeded { degree: 9, cap: 8 }));
        assert!(generate_group_with_cap(&[], 9, 9).is_ok());
    }

    #[test]
    fn orbits_of_trivial_group_are_singletons() {
        let g = generate_group(&[], 3).unwrap();
        let op = orbit_partition(&g);
        assert_eq!(op.orbits, vec![vec![1], vec![2], vec![3]]);
        assert_eq!(op.representatives, vec![1, 2, 3]);
    }

    #[test]
    fn three_cycle_is_transitive() {
        let g = generate_group(&[p("(1 2 3)", 3)], 3).unwrap();
        let op = orbit_partition(&g);
        assert_eq!(op.orbits, vec![vec![1, 2, 3]]);
        assert_eq!(op.representatives, vec![1]);
    }

    #[test]
    fn transposition_orbit_split() {
        let g = generate_group(&[p("(1 2)", 3)], 3).unwrap();
        let op = orbit_partition(&g);
        assert_eq!(op.orbits, vec![vec![1, 2], vec![3]]);
        assert_eq!(op.representatives, vec![1, 3]);
        assert_eq!(op.representative_of(2), Some(1));
    }

    #[test]
    fn stabilizer_in_s3() {
        let s3 = generate_group(&[p("(1 2)", 3), p("(1 2 3)", 3)], 3).unwrap();
        let stab = stabilizer(&s3, 1).unwrap();
        // oracle: filter the enumerated S_3 by hand
        let expected: Vec<Permutation> = full_symmetric_group(3)
            .into_iter()
            .filter(|q| q.apply(1) == 1)
            .collect();
        assert_eq!(stab.order(), 2);
        assert_eq!(stab.elements(), expected.as_slice());
        assert!(stab.contains(&p("(2 3)", 3)));
    }

    #[test]
    fn stabilizer_of_untouched_point_is_whole_group() {
        let g = generate_group(&[p("(1 2)", 3)], 3).unwrap();
        let stab = stabilizer(&g, 3).unwrap();
        assert_eq!(stab.order(), g.order());
    }

    #[test]
    fn stabilizer_of_trivial_group_is_trivial() {
        let g = generate_group(&[], 4).unwrap();
        for i in 1..=4 {
            assert!(stabilizer(&g, i).unwrap().is_trivial());
        }
    }

    #[test]
    fn transporter_in_s3() {
        let s3 = generate_group(&[p("(1 2)", 3), p("(1 2 3)", 3)], 3).unwrap();
        let t = transporter(&s3, 1, 2).unwrap();
        let expected: Vec<Permutation> = full_symmetric_group(3)
            .into_iter()
            .filter(|q| q.apply(1) == 2)
            .collect();
        assert_eq!(t.len(), 2);
        assert_eq!(t, expected);
    }

    #[test]
    fn transporter_trivial_and_transposition() {
        let g = generate_group(&[], 3).unwrap();
        assert!(transporter(&g, 1, 2).unwrap().is_empty());
        let h = generate_group(&[p("(1 2)", 3)], 3).unwrap();
        assert_eq!(transporter(&h, 1, 2).unwrap(), vec![p("(1 2)", 3)]);
    }

    #[test]
    fn index_out_of_range() {
        let g = generate_group(&[], 3).unwrap();
        assert!(matches!(
            stabilizer(&g, 0),
            Err(GroupError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            transporter(&g, 1, 4),
            Err(GroupError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn double_transposition_acts_freely() {
        let g = generate_group(&[p("(1 2)(3 4)", 4)], 4).unwrap();
        let report = is_free_stabilizer_action(&g);
        assert!(report.free);
        assert!(report.witness.is_none());
    }

    #[test]
    fn s3_is_not_free_with_witness() {
        let s3 = generate_group(&[p("(1 2)", 3), p("(1 2 3)", 3)], 3).unwrap();
        let report = is_free_stabilizer_action(&s3);
        assert!(!report.free);
        assert_eq!(report.witness, Some((1, p("(2 3)", 3))));
    }

    #[test]
    fn transposition_on_three_points_not_free() {
        let g = generate_group(&[p("(1 2)", 3)], 3).unwrap();
        let report = is_free_stabilizer_action(&g);
        assert!(!report.free);
        let (i, alpha) = report.witness.unwrap();
        assert!(!alpha.is_identity());
        assert_eq!(alpha.apply(i), i);
        assert_eq!((i, alpha), (3, p("(1 2)", 3)));
    }

    #[test]
    fn parse_roundtrip_and_forms() {
        assert_eq!(p("[2,1,4,3]", 4), p("(1 2)(3 4)", 4));
        assert_eq!(p("id", 3), Permutation::identity(3));
        assert_eq!(p("()", 2), Permutation::identity(2));
        assert_eq!(p("(1 2 3)", 3).to_string(), "[2,3,1]");
        let q = p("(1,3)(2,4)", 4);
        assert_eq!(Permutation::parse(&q.to_string(), 4).unwrap(), q);
        assert!(Permutation::parse("[2,2]", 2).is_err());
        assert!(Permutation::parse("(1 9)", 3).is_err());
        assert!(Permutation::parse("garbage", 3).is_err());
        assert!(Permutation::parse("[1,2,3]", 2).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let a = p("(1 2 3)", 3);
        let b = p("(1 2)", 3);
        // a∘b: 1 -> b 2 -> a 3
        assert_eq!(a.compose(&b).apply(1), 3);
        assert_eq!(a.compose(&a.inverse()), Permutation::identity(3));
        assert_eq!(b.inverse(), b);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
            Just(n).prop_perturb(move |n, mut rng| {
                let mut images: Vec<usize> = (1..=n).collect();
                for k in (1..n).rev() {
                    let j = rng.random_range(0..=k);
                    images.swap(k, j);
                }
                Permutation::from_images(images).unwrap()
            })
        }

        fn arb_group() -> impl Strategy<Value = PermGroup> {
            (2usize..=6)
                .prop_flat_map(|n| proptest::collection::vec(arb_perm(n), 0..=3).prop_map(
                    move |gens| generate_group(&gens, n).unwrap(),
                ))
        }

        proptest! {
            #[test]
            fn orbit_stabilizer_identity(g in arb_group()) {
                for i in 1..=g.degree() {
                    let orbit_len = orbit_partition(&g)
                        .orbits
                        .iter()
                        .find(|o| o.contains(&i))
                        .unwrap()
                        .len();
                    let stab = stabilizer(&g, i).unwrap();
                    prop_assert_eq!(g.order(), orbit_len * stab.order());
                }
            }

            #[test]
            fn transporter_is_empty_or_coset_sized(g in arb_group()) {
                for i in 1..=g.degree() {
                    let stab_order = stabilizer(&g, i).unwrap().order();
                    for j in 1..=g.degree() {
                        let t = transporter(&g, i, j).unwrap();
                        prop_assert!(t.is_empty() || t.len() == stab_order);
                    }
                }
            }

            #[test]
            fn orbits_partition_the_points(g in arb_group()) {
                let op = orbit_partition(&g);
                let mut all: Vec<usize> = op.orbits.concat();
                all.sort_unstable();
                let expected: Vec<usize> = (1..=g.degree()).collect();
                prop_assert_eq!(all, expected);
                prop_assert_eq!(op.orbits.len(), op.representatives.len());
                for (orbit, &rep) in op.orbits.iter().zip(&op.representatives) {
                    prop_assert_eq!(*orbit.iter().min().unwrap(), rep);
                }
            }

            #[test]
            fn free_action_consequences(g in arb_group()) {
                let report = is_free_stabilizer_action(&g);
                let op = orbit_partition(&g);
                if report.free {
                    // |L'_{i,i}| = 1 and every orbit has full group size
                    for i in 1..=g.degree() {
                        prop_assert_eq!(stabilizer(&g, i).unwrap().order(), 1);
                    }
                    for orbit in &op.orbits {
                        prop_assert_eq!(orbit.len(), g.order());
                    }
                    prop_assert_eq!(op.representatives.len() * g.order(), g.degree());
                } else {
                    let (i, alpha) = report.witness.unwrap();
                    prop_assert!(!alpha.is_identity());
                    prop_assert_eq!(alpha.apply(i), i);
                    prop_assert!(g.contains(&alpha));
                }
            }

            #[test]
            fn closure_is_a_group(g in arb_group()) {
                for a in g.elements() {
                    prop_assert!(g.contains(&a.inverse()));
                    for b in g.elements() {
                        prop_assert!(g.contains(&a.compose(b)));
                    }
                }
                prop_assert!(g.contains(&Permutation::identity(g.degree())));
                prop_assert_eq!(factorial(g.degree()) % g.order() as u64, 0);
            }
        }
    }
}
