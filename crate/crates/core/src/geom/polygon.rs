use std::fmt;

use super::point::{on_segment, orientation, segments_intersect, Orientation, Point};
use super::{GeomError, Rational};

/// Where a point lies relative to a closed region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    Interior,
    Boundary,
    Outside,
}

/// Twice the signed area is avoided; this is the exact shoelace value.
pub fn signed_area(vertices: &[Point]) -> Rational {
    let n = vertices.len();
    let mut twice = Rational::zero();
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        twice = twice + (&a.x * &b.y - &b.x * &a.y);
    }
    twice * Rational::new(1, 2)
}

/// Crossing-number classification of `p` against a closed polygonal loop
/// (any orientation).
pub fn classify_in_loop(p: &Point, vertices: &[Point]) -> Location {
    let n = vertices.len();
    let mut inside = false;
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        if on_segment(a, b, p) {
            return Location::Boundary;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let o = orientation(a, b, p);
            let right = if b.y > a.y { o == Orientation::Ccw } else { o == Orientation::Cw };
            if right {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Interior
    } else {
        Location::Outside
    }
}

/// Weak convexity test: after orienting counterclockwise every turn is a
/// left turn or straight, no edge doubles back, and the boundary winds
/// exactly once.
pub fn is_convex(vertices: &[Point]) -> Result<bool, GeomError> {
    let n = vertices.len();
    if n < 3 {
        return Err(GeomError::InvalidPolygon("fewer than 3 vertices".into()));
    }
    let area = signed_area(vertices);
    if area.is_zero() {
        return Ok(false);
    }
    let ccw = area.signum() > 0;
    let mut half_changes = 0;
    for i in 0..n {
        let (a, b, c) = (&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]);
        if a == b || b == c {
            return Ok(false);
        }
        let o = orientation(a, b, c);
        let bad = if ccw { Orientation::Cw } else { Orientation::Ccw };
        if o == bad {
            return Ok(false);
        }
        let d1 = (&b.x - &a.x, &b.y - &a.y);
        let d2 = (&c.x - &b.x, &c.y - &b.y);
        if o == Orientation::Collinear && (&d1.0 * &d2.0 + &d1.1 * &d2.1).signum() < 0 {
            return Ok(false);
        }
        if upper_half(&d1) != upper_half(&d2) {
            half_changes += 1;
        }
    }
    Ok(half_changes == 2)
}

fn upper_half(d: &(Rational, Rational)) -> bool {
    d.1.signum() > 0 || (d.1.is_zero() && d.0.signum() > 0)
}

fn strip_collinear(vertices: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(vertices.len());
    for v in vertices {
        if out.last() != Some(v) {
            out.push(v.clone());
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    loop {
        let n = out.len();
        if n < 3 {
            return out;
        }
        let mut removed = false;
        let mut i = 0;
        while i < out.len() && out.len() >= 3 {
            let n = out.len();
            let prev = &out[(i + n - 1) % n];
            let next = &out[(i + 1) % n];
            if orientation(prev, &out[i], next) == Orientation::Collinear {
                out.remove(i);
                removed = true;
            } else {
                i += 1;
            }
        }
        if !removed {
            return out;
        }
    }
}

/// Rotates a cycle so that its lexicographically smallest vertex comes first.
pub fn rotate_to_min(vertices: &mut [Point]) {
    if let Some((idx, _)) = vertices.iter().enumerate().min_by(|a, b| a.1.cmp(b.1)) {
        vertices.rotate_left(idx);
    }
}

/// Simple polygon: at least three vertices and no self-intersections.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
}

impl SimplePolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        if vertices.len() < 3 {
            return Err(GeomError::InvalidPolygon("fewer than 3 vertices".into()));
        }
        let n = vertices.len();
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(GeomError::InvalidPolygon(format!("repeated consecutive vertex {:?}", vertices[i])));
            }
        }
        let poly = SimplePolygon { vertices };
        if poly.signed_area().is_zero() {
            return Err(GeomError::InvalidPolygon("zero area".into()));
        }
        if let Some((i, j)) = find_loop_conflict(&[poly.vertices()]) {
            return Err(GeomError::InvalidPolygon(format!("edges {} and {} intersect", i.1, j.1)));
        }
        Ok(poly)
    }

    /// Skips validation; callers guarantee simplicity.
    pub fn new_unchecked(vertices: Vec<Point>) -> Self {
        SimplePolygon { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn signed_area(&self) -> Rational {
        signed_area(&self.vertices)
    }

    pub fn orientation(&self) -> Orientation {
        match self.signed_area().signum() {
            s if s > 0 => Orientation::Ccw,
            s if s < 0 => Orientation::Cw,
            _ => Orientation::Collinear,
        }
    }

    pub fn reversed(&self) -> SimplePolygon {
        let mut v = self.vertices.clone();
        v.reverse();
        SimplePolygon { vertices: v }
    }

    pub fn oriented(self, want: Orientation) -> SimplePolygon {
        if self.orientation() == want {
            self
        } else {
            self.reversed()
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn classify(&self, p: &Point) -> Location {
        classify_in_loop(p, &self.vertices)
    }
}

impl fmt::Debug for SimplePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.vertices).finish()
    }
}

type EdgeRef = (usize, usize);

/// Finds two boundary edges (loop, edge index) that meet illegally: any
/// contact between non-adjacent edges, or a collinear overlap between
/// adjacent ones. Edges of different loops must not touch at all.
fn find_loop_conflict(loops: &[&[Point]]) -> Option<(EdgeRef, EdgeRef)> {
    struct E<'a> {
        id: EdgeRef,
        n: usize,
        a: &'a Point,
        b: &'a Point,
        lo: Rational,
        hi: Rational,
    }
    let mut edges: Vec<E> = Vec::new();
    for (l, verts) in loops.iter().enumerate() {
        let n = verts.len();
        for i in 0..n {
            let a = &verts[i];
            let b = &verts[(i + 1) % n];
            let (lo, hi) = if a.x <= b.x { (a.x.clone(), b.x.clone()) } else { (b.x.clone(), a.x.clone()) };
            edges.push(E { id: (l, i), n, a, b, lo, hi });
        }
    }
    edges.sort_by(|p, q| p.lo.cmp(&q.lo));
    for i in 0..edges.len() {
        let e = &edges[i];
        for f in &edges[i + 1..] {
            if f.lo > e.hi {
                break;
            }
            let same_loop = e.id.0 == f.id.0;
            let adjacent = same_loop && ((e.id.1 + 1) % e.n == f.id.1 || (f.id.1 + 1) % f.n == e.id.1);
            if adjacent {
                // shared vertex is expected; overlap beyond it is not
                let (shared, other_e, other_f) = if e.b == f.a { (e.b, e.a, f.b) } else { (e.a, e.b, f.a) };
                if e.n == 2 {
                    return Some((e.id, f.id));
                }
                if orientation(other_e, shared, other_f) == Orientation::Collinear {
                    let d1 = (&shared.x - &other_e.x, &shared.y - &other_e.y);
                    let d2 = (&other_f.x - &shared.x, &other_f.y - &shared.y);
                    if (&d1.0 * &d2.0 + &d1.1 * &d2.1).signum() < 0 {
                        return Some((e.id, f.id));
                    }
                }
                // a triangle's third edge is adjacent to both others
                continue;
            }
            if segments_intersect(e.a, e.b, f.a, f.b) {
                return Some((e.id, f.id));
            }
        }
    }
    None
}

/// Closed region: outer boundary (counterclockwise) minus the interiors of
/// holes (clockwise).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolygonWithHoles {
    outer: SimplePolygon,
    holes: Vec<SimplePolygon>,
}

impl PolygonWithHoles {
    /// Validates and orients: every hole strictly inside the outer boundary,
    /// no two boundary loops touching.
    pub fn new(outer: SimplePolygon, holes: Vec<SimplePolygon>) -> Result<Self, GeomError> {
        let outer = outer.oriented(Orientation::Ccw);
        let holes: Vec<SimplePolygon> = holes.into_iter().map(|h| h.oriented(Orientation::Cw)).collect();
        let region = PolygonWithHoles { outer, holes };
        region.validate()?;
        Ok(region)
    }

    pub fn from_outer(outer: SimplePolygon) -> Self {
        PolygonWithHoles { outer: outer.oriented(Orientation::Ccw), holes: vec![] }
    }

    /// Orients but does not validate.
    pub fn new_unchecked(outer: SimplePolygon, holes: Vec<SimplePolygon>) -> Self {
        PolygonWithHoles {
            outer: outer.oriented(Orientation::Ccw),
            holes: holes.into_iter().map(|h| h.oriented(Orientation::Cw)).collect(),
        }
    }

    pub fn validate(&self) -> Result<(), GeomError> {
        let loops: Vec<&[Point]> = self.loops().map(|l| l.vertices()).collect();
        for (i, l) in loops.iter().enumerate() {
            if l.len() < 3 {
                return Err(GeomError::InvalidPolygon(format!("loop {i} has fewer than 3 vertices")));
            }
            let n = l.len();
            if (0..n).any(|k| l[k] == l[(k + 1) % n]) {
                return Err(GeomError::InvalidPolygon(format!("loop {i} repeats a vertex")));
            }
            if signed_area(l).is_zero() {
                return Err(GeomError::InvalidPolygon(format!("loop {i} has zero area")));
            }
        }
        if let Some((e, f)) = find_loop_conflict(&loops) {
            return Err(GeomError::InvalidPolygon(format!("boundary edges {:?} and {:?} intersect", e, f)));
        }
        for (i, h) in self.holes.iter().enumerate() {
            if self.outer.classify(&h.vertices[0]) != Location::Interior {
                return Err(GeomError::InvalidPolygon(format!("hole {i} is not inside the outer boundary")));
            }
            for (j, g) in self.holes.iter().enumerate() {
                if i != j && g.classify(&h.vertices[0]) != Location::Outside {
                    return Err(GeomError::InvalidPolygon(format!("hole {i} lies inside hole {j}")));
                }
            }
        }
        Ok(())
    }

    pub fn outer(&self) -> &SimplePolygon {
        &self.outer
    }

    pub fn holes(&self) -> &[SimplePolygon] {
        &self.holes
    }

    pub fn loops(&self) -> impl Iterator<Item = &SimplePolygon> + '_ {
        std::iter::once(&self.outer).chain(self.holes.iter())
    }

    /// Directed boundary edges with the region on their left.
    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        self.loops().flat_map(|l| l.edges())
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Point> + '_ {
        self.loops().flat_map(|l| l.vertices().iter())
    }

    pub fn vertex_count(&self) -> usize {
        self.loops().map(|l| l.len()).sum()
    }

    pub fn area(&self) -> Rational {
        self.loops().map(|l| l.signed_area()).sum()
    }

    pub fn is_integral(&self) -> bool {
        self.vertices().all(|p| p.is_integral())
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox_of(self.outer.vertices())
    }
}

impl fmt::Debug for PolygonWithHoles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolygonWithHoles").field("outer", &self.outer).field("holes", &self.holes).finish()
    }
}

pub fn bbox_of(points: &[Point]) -> (Point, Point) {
    let mut lo = points[0].clone();
    let mut hi = points[0].clone();
    for p in &points[1..] {
        if p.x < lo.x {
            lo.x = p.x.clone();
        }
        if p.y < lo.y {
            lo.y = p.y.clone();
        }
        if p.x > hi.x {
            hi.x = p.x.clone();
        }
        if p.y > hi.y {
            hi.y = p.y.clone();
        }
    }
    (lo, hi)
}

/// Exact classification of `p` against a region with holes.
pub fn point_in_region(p: &Point, region: &PolygonWithHoles) -> Location {
    let mut inside = false;
    for l in region.loops() {
        match classify_in_loop(p, l.vertices()) {
            Location::Boundary => return Location::Boundary,
            Location::Interior => inside = !inside,
            Location::Outside => {}
        }
    }
    if inside {
        Location::Interior
    } else {
        Location::Outside
    }
}

/// Weakly convex polygon with positive area, counterclockwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Accepts either orientation; stores counterclockwise.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self, GeomError> {
        if !is_convex(&vertices)? {
            return Err(GeomError::NotConvex);
        }
        if signed_area(&vertices).signum() < 0 {
            vertices.reverse();
        }
        Ok(ConvexPolygon { vertices })
    }

    pub(crate) fn new_unchecked(vertices: Vec<Point>) -> Self {
        debug_assert!(vertices.len() >= 3);
        ConvexPolygon { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> Rational {
        signed_area(&self.vertices)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    /// Collinear vertices removed, smallest vertex first.
    pub fn canonical(&self) -> ConvexPolygon {
        let mut v = strip_collinear(&self.vertices);
        rotate_to_min(&mut v);
        ConvexPolygon { vertices: v }
    }

    pub fn classify(&self, p: &Point) -> Location {
        let mut on_edge = false;
        for (a, b) in self.edges() {
            match orientation(a, b, p) {
                Orientation::Cw => return Location::Outside,
                Orientation::Collinear => on_edge = true,
                Orientation::Ccw => {}
            }
        }
        if on_edge {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point) -> bool {
        self.classify(p) != Location::Outside
    }

    /// Vertex average; strictly interior for positive-area convex polygons
    /// once collinear vertices are ignored.
    pub fn centroid(&self) -> Point {
        let v = strip_collinear(&self.vertices);
        let n = Rational::from_int(v.len() as i64);
        let sx: Rational = v.iter().map(|p| &p.x).sum();
        let sy: Rational = v.iter().map(|p| &p.y).sum();
        Point::new(sx / &n, sy / &n)
    }

    pub fn bbox(&self) -> (Point, Point) {
        bbox_of(&self.vertices)
    }

    pub fn to_simple(&self) -> SimplePolygon {
        SimplePolygon::new_unchecked(self.vertices.clone())
    }

    pub fn to_region(&self) -> PolygonWithHoles {
        PolygonWithHoles::from_outer(self.to_simple())
    }
}

impl fmt::Debug for ConvexPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.vertices).finish()
    }
}

/// Strict convex hull (collinear boundary points dropped), counterclockwise,
/// starting from the lexicographically smallest point.
pub fn convex_hull(points: &[Point]) -> Result<ConvexPolygon, GeomError> {
    let mut pts: Vec<&Point> = points.iter().collect();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return Err(GeomError::DegenerateHull);
    }
    let mut lower: Vec<&Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && orientation(lower[lower.len() - 2], lower[lower.len() - 1], p) != Orientation::Ccw {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && orientation(upper[upper.len() - 2], upper[upper.len() - 1], p) != Orientation::Ccw {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() < 3 {
        return Err(GeomError::DegenerateHull);
    }
    Ok(ConvexPolygon { vertices: lower.into_iter().cloned().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(c: &[(i64, i64)]) -> Vec<Point> {
        c.iter().map(|&(x, y)| Point::int(x, y)).collect()
    }

    fn unit_square() -> Vec<Point> {
        pts(&[(0, 0), (1, 0), (1, 1), (0, 1)])
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn convexity_examples() {
        assert!(is_convex(&unit_square()).unwrap());
        let l = pts(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]);
        assert!(!is_convex(&l).unwrap());
        let tri_mid = pts(&[(0, 0), (1, 0), (2, 0), (0, 2)]);
        assert!(is_convex(&tri_mid).unwrap());
        assert!(matches!(is_convex(&pts(&[(0, 0), (1, 1)])), Err(GeomError::InvalidPolygon(_))));
    }

    #[test]
    fn convexity_rejects_spirals_and_spikes() {
        // pentagram: all turns in the same direction, winds twice
        let star = pts(&[(0, 10), (6, -8), (-10, 3), (10, 3), (-6, -8)]);
        assert!(!is_convex(&star).unwrap());
        let spike = pts(&[(0, 0), (2, 0), (1, 0), (1, 1)]);
        assert!(!is_convex(&spike).unwrap());
        let mut cw = unit_square();
        cw.reverse();
        assert!(is_convex(&cw).unwrap());
    }

    #[test]
    fn area_examples() {
        assert_eq!(signed_area(&unit_square()), Rational::one());
        let mut cw = unit_square();
        cw.reverse();
        assert_eq!(signed_area(&cw), -Rational::one());
    }

    #[test]
    fn point_in_region_examples() {
        let sq = PolygonWithHoles::from_outer(SimplePolygon::new(unit_square()).unwrap());
        let half = r(1, 2);
        assert_eq!(point_in_region(&Point::new(half.clone(), half.clone()), &sq), Location::Interior);
        assert_eq!(point_in_region(&Point::new(Rational::zero(), half.clone()), &sq), Location::Boundary);
        let hole = SimplePolygon::new(vec![
            Point::new(r(1, 4), r(1, 4)),
            Point::new(r(3, 4), r(1, 4)),
            Point::new(r(3, 4), r(3, 4)),
            Point::new(r(1, 4), r(3, 4)),
        ])
        .unwrap();
        let holed = PolygonWithHoles::new(SimplePolygon::new(unit_square()).unwrap(), vec![hole]).unwrap();
        assert_eq!(point_in_region(&Point::new(half.clone(), half), &holed), Location::Outside);
        assert_eq!(holed.holes()[0].orientation(), Orientation::Cw);
        assert_eq!(holed.area(), r(3, 4));
    }

    #[test]
    fn invalid_regions_rejected() {
        let bow = pts(&[(0, 0), (2, 2), (2, 0), (0, 2)]);
        assert!(SimplePolygon::new(bow).is_err());
        let outer = SimplePolygon::new(pts(&[(0, 0), (4, 0), (4, 4), (0, 4)])).unwrap();
        let crossing = SimplePolygon::new(pts(&[(3, 1), (5, 1), (5, 2), (3, 2)])).unwrap();
        assert!(PolygonWithHoles::new(outer.clone(), vec![crossing]).is_err());
        let touching = SimplePolygon::new(pts(&[(1, 0), (2, 1), (1, 1)])).unwrap();
        assert!(PolygonWithHoles::new(outer.clone(), vec![touching]).is_err());
        let a = SimplePolygon::new(pts(&[(1, 1), (2, 1), (2, 2)])).unwrap();
        let b = SimplePolygon::new(pts(&[(2, 2), (3, 2), (3, 3)])).unwrap();
        assert!(PolygonWithHoles::new(outer.clone(), vec![a.clone(), b]).is_err());
        let outside = SimplePolygon::new(pts(&[(5, 5), (6, 5), (6, 6)])).unwrap();
        assert!(PolygonWithHoles::new(outer.clone(), vec![outside]).is_err());
        assert!(PolygonWithHoles::new(outer, vec![a]).is_ok());
    }

    #[test]
    fn hull_examples() {
        let mut p = unit_square();
        p.push(Point::new(r(1, 2), r(1, 2)));
        assert_eq!(convex_hull(&p).unwrap().vertices(), unit_square().as_slice());
        let tri = pts(&[(0, 0), (3, 1), (1, 2)]);
        assert_eq!(convex_hull(&tri).unwrap().vertices(), tri.as_slice());
        assert!(matches!(convex_hull(&pts(&[(0, 0), (1, 1), (2, 2)])), Err(GeomError::DegenerateHull)));
        // collinear boundary points excluded
        let h = convex_hull(&pts(&[(0, 0), (1, 0), (2, 0), (0, 2)])).unwrap();
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn canonical_strips_collinear() {
        let c = ConvexPolygon::new(pts(&[(2, 0), (0, 2), (0, 0), (1, 0)])).unwrap();
        assert_eq!(c.canonical().vertices(), pts(&[(0, 0), (2, 0), (0, 2)]).as_slice());
        assert_eq!(c.classify(&Point::int(1, 0)), Location::Boundary);
        assert_eq!(c.classify(&Point::int(2, 2)), Location::Outside);
    }
}
