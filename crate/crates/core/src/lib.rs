//! Nielsen numbers, homotopy-class invariants and fixed/coincidence point
//! data for n-valued maps on compact surfaces (disc, sphere, projective
//! plane, torus).
//!
//! The crate combines three layers:
//!
//! - symbolic: permutation groups generated by the images of fundamental
//!   group generators, the finite covering analysis they determine, and
//!   the Nielsen number formulas driven by that data
//!   ([`perm`], [`descriptor`], [`nielsen`]);
//! - exact arithmetic: the torus double-cover lattice, coincidence
//!   determinants and Smith-form lattice counting ([`torus`]);
//! - numerical: coordinate realizations of the catalog maps on the sphere
//!   and the projective plane, with grid scans, winding-number indices and
//!   degree computation ([`geometry`], [`numerics`]).
//!
//! The [`verify`] module packages the cross-cutting consistency suites
//! used by the command line front-end and the acceptance tests.

pub mod descriptor;
pub mod geometry;
pub mod nielsen;
pub mod numerics;
pub mod perm;
pub mod torus;
pub mod verify;
