//! Quasi-concave functions on R^n (n <= 3) built from convex level sets.
//!
//! The library adds such functions by summing their upper level sets in the
//! Minkowski sense, measures them with mixed integrals and quermassintegrals,
//! rearranges them into balls, and checks the classical geometric
//! inequalities (Brunn-Minkowski, Alexandrov-Fenchel, isoperimetric) on
//! concrete instances.

pub mod convex_bodies;
pub mod convex_duality;
pub mod error;
pub mod inequality_lab;
pub mod mixed_volumes;
pub mod qc_calculus;
pub mod quadrature;
pub mod rearrange;
pub mod report;
pub mod reshape;

pub use convex_bodies::{ConvexBody, Direction, Point, Polytope};
pub use error::{Error, Result};
