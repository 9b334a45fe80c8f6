//! Hyperbolic flute surfaces built as infinite Schottky groups acting on the
//! upper half-plane, with tools to probe horocycle orbit closures along
//! geodesic rays.
//!
//! Every group computation works on a finite truncation (the first `N`
//! generators, words up to a fixed length). Results that concern the
//! infinite group are evidence at that truncation, and reports say so.

pub mod dynamics;
pub mod flute;
pub mod moebius;
pub mod orbits;
pub mod plane;
pub mod words;

pub use moebius::{Classification, MoebiusTransform, Reflection};
pub use plane::{BoundaryPoint, EuclideanCircle, Geodesic, Horocycle, PlanePoint};
