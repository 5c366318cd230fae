//! Exact symbolic classification of quadratic polynomial maps C^3 -> C^2.
//!
//! Every map (f, g) with deg f, deg g <= 2 is affinely equivalent to one of
//! 60 discrete normal forms or a member of 4 parametric families, and falls
//! into one of 47 topological classes. This crate decides the class with
//! exact arithmetic in radical towers over Q(i), produces a machine-verified
//! chain of coordinate changes as a witness, and computes the singularity
//! census (cusps, double cusps, nodes) of the discriminant curve.

pub mod field;
pub mod linalg;
pub mod poly;

pub mod maps;
pub mod pencil;

pub mod census;
pub mod reduce;
pub mod topo;

pub mod parse;
pub mod report;
