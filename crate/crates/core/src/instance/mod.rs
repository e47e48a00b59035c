//! Instances, solutions, file formats and the exact cover verifier.

mod io;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{ConvexPolygon, GeomError, Point, PolygonWithHoles, Rational, SimplePolygon};

pub use io::{parse_instance, parse_solution, serialize_instance, serialize_solution, Parsed};
pub use verify::{verify_solution, CoverReport, Failure, Verdict};

/// Generator provenance attached to generated instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub generator: String,
    pub seed: u64,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub region: PolygonWithHoles,
    pub meta: Option<Meta>,
}

impl Instance {
    pub fn new(name: impl Into<String>, region: PolygonWithHoles) -> Self {
        Instance { name: name.into(), region, meta: None }
    }

    pub fn vertex_count(&self) -> usize {
        self.region.vertex_count()
    }
}

/// Pieces are kept as raw vertex cycles so that the verifier can report
/// non-convex input instead of rejecting it at parse time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub instance_name: String,
    pub pieces: Vec<Vec<Point>>,
}

impl Solution {
    pub fn from_pieces(instance_name: impl Into<String>, pieces: Vec<ConvexPolygon>) -> Self {
        Solution {
            instance_name: instance_name.into(),
            pieces: pieces.into_iter().map(|p| p.into_vertices()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// The pieces as convex polygons, or the index of the first that is not.
    pub fn convex_pieces(&self) -> Result<Vec<ConvexPolygon>, usize> {
        self.pieces.iter().enumerate().map(|(i, p)| ConvexPolygon::new(p.clone()).map_err(|_| i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("parse error at {location}: {msg}")]
    Parse { location: String, msg: String },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid solution: {0}")]
    InvalidSolution(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("solution is for instance {found:?}, expected {expected:?}")]
    WrongInstance { expected: String, found: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("scale must be at least 1")]
    BadScale,
    #[error("normalization failed: {0}")]
    NormalizationFailed(String),
}

/// Scales by `scale`, rounds every coordinate to the nearest integer (halves
/// up) and translates so that the minimum x and y are 0.
pub fn normalize_coordinates(region: &PolygonWithHoles, scale: i64) -> Result<PolygonWithHoles, NormalizeError> {
    if scale < 1 {
        return Err(NormalizeError::BadScale);
    }
    let s = Rational::from_int(scale);
    let round = |v: &Rational| Rational::from_bigint((v * &s).round_half_up());
    let rounded: Vec<Vec<Point>> = region
        .loops()
        .map(|l| l.vertices().iter().map(|p| Point::new(round(&p.x), round(&p.y))).collect())
        .collect();
    let min_x = rounded.iter().flatten().map(|p| p.x.clone()).min().unwrap();
    let min_y = rounded.iter().flatten().map(|p| p.y.clone()).min().unwrap();
    let fail = |e: GeomError| NormalizeError::NormalizationFailed(e.to_string());
    let mut loops = rounded.into_iter().map(|l| {
        let v = l.into_iter().map(|p| Point::new(&p.x - &min_x, &p.y - &min_y)).collect();
        SimplePolygon::new(v).map_err(fail)
    });
    let outer = loops.next().unwrap()?;
    let holes = loops.collect::<Result<Vec<_>, _>>()?;
    PolygonWithHoles::new(outer, holes).map_err(fail)
}
