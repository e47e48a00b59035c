//! Exact clipping of convex polygons by half-planes.

use super::point::{cross, orientation, Orientation, Point};
use super::polygon::{signed_area, ConvexPolygon};
use super::Rational;

/// Keeps the closed side of the directed line `a -> b` (`left = true` keeps
/// the left side). Returns the clipped vertex ring, possibly degenerate.
fn clip_ring(poly: &[Point], a: &Point, b: &Point, left: bool) -> Vec<Point> {
    let n = poly.len();
    let side: Vec<Rational> = poly
        .iter()
        .map(|p| {
            let c = cross(a, b, p);
            if left {
                c
            } else {
                -c
            }
        })
        .collect();
    if side.iter().all(|s| s.signum() >= 0) {
        return poly.to_vec();
    }
    if side.iter().all(|s| s.signum() <= 0) {
        // everything on the boundary line or discarded
        return poly.iter().zip(&side).filter(|(_, s)| s.is_zero()).map(|(p, _)| p.clone()).collect();
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (si, sj) = (&side[i], &side[j]);
        if si.signum() >= 0 {
            out.push(poly[i].clone());
        }
        if (si.signum() > 0 && sj.signum() < 0) || (si.signum() < 0 && sj.signum() > 0) {
            let t = si / &(si - sj);
            out.push(poly[i].lerp(&poly[j], &t));
        }
    }
    out
}

/// Drops repeated and collinear vertices; `None` if no area remains.
fn finish_ring(ring: Vec<Point>) -> Option<ConvexPolygon> {
    let mut v: Vec<Point> = Vec::with_capacity(ring.len());
    for p in ring {
        if v.last() != Some(&p) {
            v.push(p);
        }
    }
    while v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    if v.len() < 3 {
        return None;
    }
    let mut changed = true;
    while changed && v.len() >= 3 {
        changed = false;
        let mut i = 0;
        while i < v.len() && v.len() >= 3 {
            let n = v.len();
            if orientation(&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]) == Orientation::Collinear {
                v.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
    }
    if v.len() < 3 || signed_area(&v).signum() <= 0 {
        return None;
    }
    Some(ConvexPolygon::new_unchecked(v))
}

pub fn clip_halfplane(poly: &ConvexPolygon, a: &Point, b: &Point, left: bool) -> Option<ConvexPolygon> {
    finish_ring(clip_ring(poly.vertices(), a, b, left))
}

/// Positive-area intersection of two convex polygons.
pub fn intersect_convex(p: &ConvexPolygon, q: &ConvexPolygon) -> Option<ConvexPolygon> {
    let mut ring = p.vertices().to_vec();
    for (a, b) in q.edges() {
        ring = clip_ring(&ring, a, b, true);
        if ring.len() < 3 {
            return None;
        }
    }
    finish_ring(ring)
}

fn separated(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    // some edge of q with every vertex of p weakly outside
    q.edges().any(|(a, b)| p.vertices().iter().all(|v| orientation(a, b, v) != Orientation::Ccw))
        || p.edges().any(|(a, b)| q.vertices().iter().all(|v| orientation(a, b, v) != Orientation::Ccw))
}

/// `closure(cell \ piece)` as convex pieces with pairwise disjoint interiors.
pub fn subtract_convex(cell: &ConvexPolygon, piece: &ConvexPolygon) -> Vec<ConvexPolygon> {
    if separated(cell, piece) {
        return vec![cell.clone()];
    }
    if cell.vertices().iter().all(|v| piece.contains(v)) {
        return vec![];
    }
    let mut out = Vec::new();
    let mut rest = cell.vertices().to_vec();
    for (a, b) in piece.edges() {
        let outside = clip_ring(&rest, a, b, false);
        if let Some(c) = finish_ring(outside) {
            out.push(c);
        }
        rest = clip_ring(&rest, a, b, true);
        if rest.len() < 3 {
            break;
        }
    }
    if finish_ring(rest).is_none() {
        // interiors never overlapped; keep the cell whole
        return vec![cell.clone()];
    }
    out
}
