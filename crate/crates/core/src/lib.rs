//! Covering polygons with holes by few convex pieces.

pub mod generators;
pub mod geom;
pub mod harness;
pub mod instance;
pub mod residual;
pub mod rng;
pub mod solvers;
pub mod triangulate;
