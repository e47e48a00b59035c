//! Exact containment of convex pieces in a region, accelerated by a uniform
//! grid over the region's boundary edges.
//!
//! A convex piece `C` lies in the closed region `R` iff no boundary point of
//! `R` lies in the interior of `C` and some interior point of `C` lies in `R`.
//! The grid only prunes candidate edges; every decision is made by exact
//! predicates.

use super::point::{orientation, Orientation, Point};
use super::polygon::{ConvexPolygon, Location, PolygonWithHoles};
use super::Rational;

/// f64 bounding box, padded so that rounding never makes overlapping exact
/// boxes look disjoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lo: (f64, f64),
    pub hi: (f64, f64),
}

impl Bounds {
    pub fn of_points<'a>(pts: impl IntoIterator<Item = &'a Point>) -> Bounds {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            let (x, y) = p.to_f64();
            lo.0 = lo.0.min(x);
            lo.1 = lo.1.min(y);
            hi.0 = hi.0.max(x);
            hi.1 = hi.1.max(y);
        }
        let pad = 1e-9 * (1.0 + lo.0.abs().max(lo.1.abs()).max(hi.0.abs()).max(hi.1.abs()));
        Bounds { lo: (lo.0 - pad, lo.1 - pad), hi: (hi.0 + pad, hi.1 + pad) }
    }

    pub fn overlaps(&self, o: &Bounds) -> bool {
        self.lo.0 <= o.hi.0 && o.lo.0 <= self.hi.0 && self.lo.1 <= o.hi.1 && o.lo.1 <= self.hi.1
    }
}

#[derive(Debug, Clone)]
pub struct RegionIndex {
    region: PolygonWithHoles,
    edges: Vec<(Point, Point)>,
    edge_bounds: Vec<Bounds>,
    origin: (f64, f64),
    cell: (f64, f64),
    dims: (usize, usize),
    grid: Vec<Vec<u32>>,
    rows: Vec<Vec<u32>>,
}

impl RegionIndex {
    pub fn new(region: &PolygonWithHoles) -> Self {
        let edges: Vec<(Point, Point)> = region.edges().map(|(a, b)| (a.clone(), b.clone())).collect();
        let edge_bounds: Vec<Bounds> = edges.iter().map(|(a, b)| Bounds::of_points([a, b])).collect();
        let all = Bounds::of_points(region.outer().vertices());
        let side = ((edges.len() as f64).sqrt().ceil() as usize).clamp(1, 256);
        let w = (all.hi.0 - all.lo.0).max(1e-12);
        let h = (all.hi.1 - all.lo.1).max(1e-12);
        let cell = (w / side as f64, h / side as f64);
        let dims = (side, side);
        let mut idx = RegionIndex {
            region: region.clone(),
            edges,
            edge_bounds,
            origin: all.lo,
            cell,
            dims,
            grid: vec![Vec::new(); side * side],
            rows: vec![Vec::new(); side],
        };
        for (i, b) in idx.edge_bounds.clone().iter().enumerate() {
            let (c0, r0, c1, r1) = idx.cell_range(b);
            for r in r0..=r1 {
                idx.rows[r].push(i as u32);
                for c in c0..=c1 {
                    idx.grid[r * side + c].push(i as u32);
                }
            }
        }
        idx
    }

    pub fn region(&self) -> &PolygonWithHoles {
        &self.region
    }

    pub fn edges(&self) -> &[(Point, Point)] {
        &self.edges
    }

    fn cell_range(&self, b: &Bounds) -> (usize, usize, usize, usize) {
        let clamp = |v: f64, n: usize| -> usize {
            if v.is_nan() || v < 0.0 {
                0
            } else {
                (v as usize).min(n - 1)
            }
        };
        let c0 = clamp(((b.lo.0 - self.origin.0) / self.cell.0).floor(), self.dims.0);
        let c1 = clamp(((b.hi.0 - self.origin.0) / self.cell.0).floor(), self.dims.0);
        let r0 = clamp(((b.lo.1 - self.origin.1) / self.cell.1).floor(), self.dims.1);
        let r1 = clamp(((b.hi.1 - self.origin.1) / self.cell.1).floor(), self.dims.1);
        (c0, r0, c1, r1)
    }

    /// Boundary edges whose boxes overlap `b`, ascending by id.
    pub fn edges_near(&self, b: &Bounds) -> Vec<usize> {
        let (c0, r0, c1, r1) = self.cell_range(b);
        let mut out = Vec::new();
        for r in r0..=r1 {
            for c in c0..=c1 {
                for &e in &self.grid[r * self.dims.0 + c] {
                    if self.edge_bounds[e as usize].overlaps(b) {
                        out.push(e as usize);
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Exact point location, same contract as `point_in_region`.
    pub fn classify(&self, p: &Point) -> Location {
        let pb = Bounds::of_points([p]);
        let (_, r0, _, r1) = self.cell_range(&pb);
        let mut candidates: Vec<u32> = self.rows[r0].clone();
        if r1 != r0 {
            for r in r0 + 1..=r1 {
                candidates.extend_from_slice(&self.rows[r]);
            }
            candidates.sort_unstable();
            candidates.dedup();
        }
        let mut inside = false;
        for e in candidates {
            let (a, b) = &self.edges[e as usize];
            let eb = &self.edge_bounds[e as usize];
            if eb.lo.1 > pb.hi.1 || eb.hi.1 < pb.lo.1 {
                continue;
            }
            if (a.y > p.y) != (b.y > p.y) {
                match orientation(a, b, p) {
                    Orientation::Collinear => return Location::Boundary,
                    o => {
                        let right = if b.y > a.y { o == Orientation::Ccw } else { o == Orientation::Cw };
                        if right {
                            inside = !inside;
                        }
                    }
                }
            } else if (a.y == p.y && b.y == p.y && super::point::on_segment(a, b, p)) || a == p || b == p {
                return Location::Boundary;
            }
        }
        if inside {
            Location::Interior
        } else {
            Location::Outside
        }
    }

    /// A region boundary point strictly inside `piece`, if any.
    pub fn boundary_point_inside(&self, piece: &ConvexPolygon) -> Option<(usize, Point)> {
        let pb = Bounds::of_points(piece.vertices());
        for e in self.edges_near(&pb) {
            let (a, b) = &self.edges[e];
            if let Some(m) = chord_midpoint_in_interior(a, b, piece) {
                return Some((e, m));
            }
        }
        None
    }

    pub fn contains_piece(&self, piece: &ConvexPolygon) -> bool {
        if self.boundary_point_inside(piece).is_some() {
            return false;
        }
        self.classify(&piece.centroid()) != Location::Outside
    }

    /// A point of `piece` that lies outside the region, or `None` if the
    /// piece is contained.
    pub fn escape_witness(&self, piece: &ConvexPolygon) -> Option<Point> {
        let centroid = piece.centroid();
        match self.boundary_point_inside(piece) {
            None => {
                if self.classify(&centroid) == Location::Outside {
                    Some(centroid)
                } else {
                    None
                }
            }
            Some((e, m)) => {
                let (a, b) = &self.edges[e];
                // exterior lies to the right of the directed boundary edge
                let normal = Point::new(&b.y - &a.y, &a.x - &b.x);
                let mut eps = Rational::one();
                for _ in 0..4096 {
                    let q = Point::new(&m.x + &(&normal.x * &eps), &m.y + &(&normal.y * &eps));
                    if piece.classify(&q) == Location::Interior && self.classify(&q) == Location::Outside {
                        return Some(q);
                    }
                    eps = eps * Rational::new(1, 2);
                }
                unreachable!("boundary edge interior to a piece always has exterior nearby")
            }
        }
    }
}

/// If segment `ab` passes through the interior of convex `c`, the midpoint of
/// the chord `ab ∩ c` (which is then interior).
pub fn chord_midpoint_in_interior(a: &Point, b: &Point, c: &ConvexPolygon) -> Option<Point> {
    // both endpoints weakly outside one edge: the segment misses the interior
    for (u, v) in c.edges() {
        if orientation(u, v, a) != Orientation::Ccw && orientation(u, v, b) != Orientation::Ccw {
            return None;
        }
    }
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    for (u, v) in c.edges() {
        let fa = super::point::cross(u, v, a);
        let fb = super::point::cross(u, v, b);
        if fa.signum() >= 0 && fb.signum() >= 0 {
            continue;
        }
        let t = &fa / &(&fa - &fb);
        if fa.signum() < 0 {
            if t > lo {
                lo = t;
            }
        } else if t < hi {
            hi = t;
        }
        if lo >= hi {
            return None;
        }
    }
    let mid = (&lo + &hi) * Rational::new(1, 2);
    let m = a.lerp(b, &mid);
    if c.classify(&m) == Location::Interior {
        Some(m)
    } else {
        None
    }
}

/// `piece ⊆ region` with closed semantics.
pub fn piece_contained(piece: &ConvexPolygon, region: &PolygonWithHoles) -> bool {
    RegionIndex::new(region).contains_piece(piece)
}
