use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::geom::{
    orientation, segment_intersection, Bounds, Location, Orientation, Point, PolygonWithHoles, Rational, RegionIndex,
    SegmentHit,
};

/// Extra triangulation points. Levels are cumulative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SteinerPolicy {
    #[default]
    None,
    EdgeExtensions,
    ExtensionIntersections,
}

/// Far endpoint of the ray `v + t (v - from)`, t > 0, kept inside the closed
/// region for as long as possible.
fn extend(idx: &RegionIndex, from: &Point, v: &Point) -> Option<Point> {
    let dx = &v.x - &from.x;
    let dy = &v.y - &from.y;
    let mut ts: Vec<Rational> = Vec::new();
    for (c, e) in idx.edges() {
        let ex = &e.x - &c.x;
        let ey = &e.y - &c.y;
        let denom = &dx * &ey - &dy * &ex;
        let wx = &c.x - &v.x;
        let wy = &c.y - &v.y;
        if denom.is_zero() {
            // parallel; only collinear edges matter
            if (&wx * &dy - &wy * &dx).is_zero() {
                for q in [c, e] {
                    let t = if dx.is_zero() { (&q.y - &v.y) / &dy } else { (&q.x - &v.x) / &dx };
                    if t.signum() > 0 {
                        ts.push(t);
                    }
                }
            }
            continue;
        }
        let t = (&wx * &ey - &wy * &ex) / &denom;
        let s = (&wx * &dy - &wy * &dx) / &denom;
        if t.signum() > 0 && s.signum() >= 0 && s <= Rational::one() {
            ts.push(t);
        }
    }
    ts.sort();
    ts.dedup();
    let at = |t: &Rational| Point::new(&v.x + &(&dx * t), &v.y + &(&dy * t));
    let mut prev = Rational::zero();
    let mut last = None;
    for t in ts {
        let mid = (&prev + &t) * Rational::new(1, 2);
        if idx.classify(&at(&mid)) == Location::Outside {
            break;
        }
        last = Some(t.clone());
        prev = t;
    }
    last.map(|t| at(&t))
}

/// Maximal extensions of boundary edges past reflex vertices, as
/// `(reflex vertex, far endpoint)` pairs in boundary order.
pub fn extension_segments(region: &PolygonWithHoles) -> Vec<(Point, Point)> {
    let idx = RegionIndex::new(region);
    let mut out = Vec::new();
    for lp in region.loops() {
        let vs = lp.vertices();
        let n = vs.len();
        for i in 0..n {
            let prev = &vs[(i + n - 1) % n];
            let v = &vs[i];
            let next = &vs[(i + 1) % n];
            if orientation(prev, v, next) != Orientation::Cw {
                continue;
            }
            for from in [prev, next] {
                if let Some(far) = extend(&idx, from, v) {
                    out.push((v.clone(), far));
                }
            }
        }
    }
    out
}

pub fn steiner_points(region: &PolygonWithHoles, policy: SteinerPolicy) -> Vec<Point> {
    if policy == SteinerPolicy::None {
        return vec![];
    }
    let segs = extension_segments(region);
    let mut pts: Vec<Point> = segs.iter().map(|(_, far)| far.clone()).collect();
    if policy == SteinerPolicy::ExtensionIntersections {
        let idx = RegionIndex::new(region);
        let bounds: Vec<Bounds> = segs.iter().map(|(a, b)| Bounds::of_points([a, b])).collect();
        let mut order: Vec<usize> = (0..segs.len()).collect();
        order.sort_by(|&i, &j| bounds[i].lo.0.total_cmp(&bounds[j].lo.0));
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                if bounds[j].lo.0 > bounds[i].hi.0 {
                    break;
                }
                if !bounds[i].overlaps(&bounds[j]) {
                    continue;
                }
                let (a, b) = &segs[i];
                let (c, d) = &segs[j];
                if let SegmentHit::Point(p) = segment_intersection(a, b, c, d) {
                    if idx.classify(&p) == Location::Interior {
                        pts.push(p);
                    }
                }
            }
        }
    }
    let vertices: HashSet<&Point> = region.vertices().collect();
    pts.retain(|p| !vertices.contains(p));
    pts.sort();
    pts.dedup();
    pts
}
