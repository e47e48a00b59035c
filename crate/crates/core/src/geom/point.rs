use std::fmt;

use serde::{Deserialize, Serialize};

use super::Rational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point { x: Rational::from_int(x), y: Rational::from_int(y) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    fn small_ints(&self) -> Option<(i64, i64)> {
        Some((self.x.as_small_int()?, self.y.as_small_int()?))
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        let half = Rational::new(1, 2);
        Point { x: (&self.x + &other.x) * &half, y: (&self.y + &other.y) * &half }
    }

    /// `self + (other - self) * t`.
    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        Point { x: &self.x + &((&other.x - &self.x) * t), y: &self.y + &((&other.y - &self.y) * t) }
    }

    pub fn dist2(&self, other: &Point) -> Rational {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Cw,
    Collinear,
    Ccw,
}

impl Orientation {
    fn from_sign(s: i32) -> Self {
        match s {
            s if s > 0 => Orientation::Ccw,
            s if s < 0 => Orientation::Cw,
            _ => Orientation::Collinear,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Cw => Orientation::Ccw,
            Orientation::Ccw => Orientation::Cw,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Exact `(q - p) x (r - p)`.
pub fn cross(p: &Point, q: &Point, r: &Point) -> Rational {
    if let (Some(a), Some(b), Some(c)) = (p.small_ints(), q.small_ints(), r.small_ints()) {
        if let Some(v) = cross_i64(a, b, c) {
            if let Ok(s) = i64::try_from(v) {
                return Rational::from_int(s);
            }
        }
    }
    let (qx, qy) = (&q.x - &p.x, &q.y - &p.y);
    let (rx, ry) = (&r.x - &p.x, &r.y - &p.y);
    &qx * &ry - &qy * &rx
}

fn cross_i64(p: (i64, i64), q: (i64, i64), r: (i64, i64)) -> Option<i128> {
    let qx = q.0 as i128 - p.0 as i128;
    let qy = q.1 as i128 - p.1 as i128;
    let rx = r.0 as i128 - p.0 as i128;
    let ry = r.1 as i128 - p.1 as i128;
    qx.checked_mul(ry)?.checked_sub(qy.checked_mul(rx)?)
}

pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    if let (Some(a), Some(b), Some(c)) = (p.small_ints(), q.small_ints(), r.small_ints()) {
        if let Some(v) = cross_i64(a, b, c) {
            return Orientation::from_sign(v.signum() as i32);
        }
    }
    Orientation::from_sign(cross(p, q, r).signum())
}

/// Sign of the in-circle determinant: positive when `d` lies strictly inside
/// the circle through the counterclockwise triangle `a, b, c`.
pub fn incircle(a: &Point, b: &Point, c: &Point, d: &Point) -> i32 {
    if let (Some(a), Some(b), Some(c), Some(d)) = (a.small_ints(), b.small_ints(), c.small_ints(), d.small_ints()) {
        if let Some(v) = incircle_i64(a, b, c, d) {
            return v;
        }
    }
    let rows: Vec<(Rational, Rational, Rational)> = [a, b, c]
        .iter()
        .map(|p| {
            let x = &p.x - &d.x;
            let y = &p.y - &d.y;
            let w = &x * &x + &y * &y;
            (x, y, w)
        })
        .collect();
    let (ax, ay, aw) = &rows[0];
    let (bx, by, bw) = &rows[1];
    let (cx, cy, cw) = &rows[2];
    let det = ax * &(by * cw - bw * cy) - ay * &(bx * cw - bw * cx) + aw * &(bx * cy - by * cx);
    det.signum()
}

fn incircle_i64(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> Option<i32> {
    let row = |p: (i64, i64)| -> Option<(i128, i128, i128)> {
        let x = p.0 as i128 - d.0 as i128;
        let y = p.1 as i128 - d.1 as i128;
        let w = x.checked_mul(x)?.checked_add(y.checked_mul(y)?)?;
        Some((x, y, w))
    };
    let (ax, ay, aw) = row(a)?;
    let (bx, by, bw) = row(b)?;
    let (cx, cy, cw) = row(c)?;
    let m1 = by.checked_mul(cw)?.checked_sub(bw.checked_mul(cy)?)?;
    let m2 = bx.checked_mul(cw)?.checked_sub(bw.checked_mul(cx)?)?;
    let m3 = bx.checked_mul(cy)?.checked_sub(by.checked_mul(cx)?)?;
    let det = ax.checked_mul(m1)?.checked_sub(ay.checked_mul(m2)?)?.checked_add(aw.checked_mul(m3)?)?;
    Some(det.signum() as i32)
}

/// True if `p` lies on the closed segment `a b` (assumes nothing about `a != b`).
pub fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orientation(a, b, p) == Orientation::Collinear && in_box(a, b, p)
}

fn in_box(a: &Point, b: &Point, p: &Point) -> bool {
    let (lx, hx) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ly, hy) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *lx <= p.x && p.x <= *hx && *ly <= p.y && p.y <= *hy
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        debug_assert!(a != b, "degenerate segment");
        Segment { a, b }
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}-{:?}", self.a, self.b)
    }
}

/// How two closed segments meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentHit {
    None,
    /// Single common point.
    Point(Point),
    /// Collinear overlap of positive length.
    Overlap(Point, Point),
}

/// Interiors cross at a single point that is an endpoint of neither segment.
pub fn segments_cross_properly(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    o1 != Orientation::Collinear
        && o2 != Orientation::Collinear
        && o3 != Orientation::Collinear
        && o4 != Orientation::Collinear
        && o1 != o2
        && o3 != o4
}

/// Whether closed segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    use Orientation::Collinear;
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if o1 != Collinear && o2 != Collinear && o3 != Collinear && o4 != Collinear {
        return o1 != o2 && o3 != o4;
    }
    (o1 == Collinear && in_box(a, b, c))
        || (o2 == Collinear && in_box(a, b, d))
        || (o3 == Collinear && in_box(c, d, a))
        || (o4 == Collinear && in_box(c, d, b))
}

/// Exact intersection of closed segments `ab` and `cd` (both non-degenerate).
pub fn segment_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> SegmentHit {
    if !segments_intersect(a, b, c, d) {
        return SegmentHit::None;
    }
    let denom = {
        let (ux, uy) = (&b.x - &a.x, &b.y - &a.y);
        let (vx, vy) = (&d.x - &c.x, &d.y - &c.y);
        &ux * &vy - &uy * &vx
    };
    if denom.is_zero() {
        // Collinear: overlap is the intersection of the two parameter ranges
        // along `ab`.
        let mut pts = vec![];
        for p in [a, b, c, d] {
            if in_box(a, b, p) && in_box(c, d, p) && !pts.contains(p) {
                pts.push(p.clone());
            }
        }
        pts.sort();
        return match pts.len() {
            1 => SegmentHit::Point(pts.pop().unwrap()),
            0 => SegmentHit::None,
            _ => {
                let hi = pts.pop().unwrap();
                SegmentHit::Overlap(pts.swap_remove(0), hi)
            }
        };
    }
    // parameter along ab: ((c - a) x (d - c)) / ((b - a) x (d - c))
    let t = -cross(c, a, d) / &denom;
    SegmentHit::Point(a.lerp(b, &t))
}

/// Intersection point of the supporting lines of `ab` and `cd`, if not parallel.
pub fn line_intersection(a: &Point, b: &Point, c: &Point, d: &Point) -> Option<Point> {
    let (ux, uy) = (&b.x - &a.x, &b.y - &a.y);
    let (vx, vy) = (&d.x - &c.x, &d.y - &c.y);
    let denom = &ux * &vy - &uy * &vx;
    if denom.is_zero() {
        return None;
    }
    let (wx, wy) = (&c.x - &a.x, &c.y - &a.y);
    let t = (&wx * &vy - &wy * &vx) / &denom;
    Some(a.lerp(b, &t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::int(x, y)
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(0, 1)), Orientation::Ccw);
        assert_eq!(orientation(&p(0, 0), &p(1, 1), &p(2, 2)), Orientation::Collinear);
        assert_eq!(orientation(&p(0, 0), &p(0, 1), &p(1, 0)), Orientation::Cw);
    }

    #[test]
    fn orientation_large_coordinates_fall_back() {
        let big = i64::MAX / 2;
        assert_eq!(orientation(&p(-big, -big), &p(big, -big), &p(0, big)), Orientation::Ccw);
        assert_eq!(orientation(&p(-big, -big), &p(0, 0), &p(big, big)), Orientation::Collinear);
    }

    #[test]
    fn incircle_basic() {
        let (a, b, c) = (p(0, 0), p(2, 0), p(0, 2));
        assert_eq!(incircle(&a, &b, &c, &p(1, 1)), 1);
        assert_eq!(incircle(&a, &b, &c, &p(2, 2)), 0);
        assert_eq!(incircle(&a, &b, &c, &p(3, 3)), -1);
        let q = Point::new(Rational::new(1, 3), Rational::new(1, 3));
        assert_eq!(incircle(&a, &b, &c, &q), 1);
    }

    #[test]
    fn segment_hits() {
        assert_eq!(segment_intersection(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)), SegmentHit::Point(p(1, 1)));
        assert_eq!(segment_intersection(&p(0, 0), &p(3, 0), &p(1, 0), &p(5, 0)), SegmentHit::Overlap(p(1, 0), p(3, 0)));
        assert_eq!(segment_intersection(&p(0, 0), &p(1, 0), &p(1, 0), &p(1, 5)), SegmentHit::Point(p(1, 0)));
        assert_eq!(segment_intersection(&p(0, 0), &p(1, 0), &p(2, 0), &p(3, 0)), SegmentHit::None);
        assert_eq!(segment_intersection(&p(0, 0), &p(1, 1), &p(0, 1), &p(1, 2)), SegmentHit::None);
        assert!(segments_cross_properly(&p(0, 0), &p(2, 2), &p(0, 2), &p(2, 0)));
        assert!(!segments_cross_properly(&p(0, 0), &p(2, 0), &p(1, 0), &p(1, 2)));
        let hit = segment_intersection(&p(0, 0), &p(3, 1), &p(0, 1), &p(3, 0));
        assert_eq!(hit, SegmentHit::Point(Point::new(Rational::new(3, 2), Rational::new(1, 2))));
    }
}
