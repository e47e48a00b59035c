//! Exact planar geometry over arbitrary-precision rationals.

mod clip;
mod contain;
mod point;
mod polygon;
mod rational;

use thiserror::Error;

pub use clip::{clip_halfplane, intersect_convex, subtract_convex};
pub use contain::{chord_midpoint_in_interior, piece_contained, Bounds, RegionIndex};
pub use point::{
    cross, incircle, line_intersection, on_segment, orientation, segment_intersection, segments_cross_properly,
    segments_intersect, Orientation, Point, Segment, SegmentHit,
};
pub use polygon::{
    bbox_of, classify_in_loop, convex_hull, is_convex, point_in_region, rotate_to_min, signed_area, ConvexPolygon,
    Location, PolygonWithHoles, SimplePolygon,
};
pub use rational::{ParseRationalError, Rational};

pub use crate::residual::region_difference;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("polygon is not convex")]
    NotConvex,
    #[error("convex hull is degenerate (fewer than 3 non-collinear points)")]
    DegenerateHull,
}
