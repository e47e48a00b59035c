//! Exact residual of a region after removing convex pieces, kept as a set of
//! interior-disjoint convex cells.

use std::collections::HashMap;

use crate::geom::{
    classify_in_loop, orientation, signed_area, subtract_convex, Bounds, ConvexPolygon, Location, Orientation, Point,
    PolygonWithHoles, Rational, SimplePolygon,
};
use crate::triangulate::{triangulate, Subdivision};

#[derive(Debug, Clone)]
pub struct Residual {
    cells: Vec<ConvexPolygon>,
    bounds: Vec<Bounds>,
}

impl Residual {
    /// The whole region, as a convex decomposition.
    pub fn new(region: &PolygonWithHoles) -> Self {
        let mesh = triangulate(region, &[]).expect("no extra points");
        let mut sub = Subdivision::from_mesh(&mesh);
        let ids: Vec<usize> = sub.face_ids().collect();
        for f in ids {
            if !sub.is_alive(f) {
                continue;
            }
            loop {
                let merged = sub.neighbors(f).into_iter().any(|g| sub.try_merge(f, g));
                if !merged {
                    break;
                }
            }
        }
        Residual::from_cells(sub.pieces())
    }

    pub fn from_cells(cells: Vec<ConvexPolygon>) -> Self {
        let bounds = cells.iter().map(|c| Bounds::of_points(c.vertices())).collect();
        Residual { cells, bounds }
    }

    pub fn cells(&self) -> &[ConvexPolygon] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn area(&self) -> Rational {
        self.cells.iter().map(|c| c.area()).sum()
    }

    /// Removes the interior of `piece`.
    pub fn subtract(&mut self, piece: &ConvexPolygon) {
        let pb = Bounds::of_points(piece.vertices());
        let mut cells = Vec::with_capacity(self.cells.len());
        let mut bounds = Vec::with_capacity(self.cells.len());
        for (c, b) in self.cells.drain(..).zip(self.bounds.drain(..)) {
            if !b.overlaps(&pb) {
                cells.push(c);
                bounds.push(b);
                continue;
            }
            for r in subtract_convex(&c, piece) {
                bounds.push(Bounds::of_points(r.vertices()));
                cells.push(r);
            }
        }
        self.cells = cells;
        self.bounds = bounds;
    }

    /// Whether `piece` overlaps the residual in positive area.
    pub fn meets(&self, piece: &ConvexPolygon) -> bool {
        let pb = Bounds::of_points(piece.vertices());
        self.cells
            .iter()
            .zip(&self.bounds)
            .any(|(c, b)| b.overlaps(&pb) && crate::geom::intersect_convex(c, piece).is_some())
    }

    /// Cell indices grouped by connected interior, ordered by smallest cell id.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.cells.len());
        for group in line_groups(&self.cells).values() {
            for (i, x) in group.iter().enumerate() {
                for y in &group[i + 1..] {
                    if x.sign != y.sign && std::cmp::max(&x.lo, &y.lo) < std::cmp::min(&x.hi, &y.hi) {
                        uf.union(x.cell, y.cell);
                    }
                }
            }
        }
        let mut by_root: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for c in 0..self.cells.len() {
            let r = uf.find(c);
            let k = *by_root.entry(r).or_insert_with(|| {
                out.push(vec![]);
                out.len() - 1
            });
            out[k].push(c);
        }
        out
    }

    /// One interior point per component.
    pub fn witnesses(&self) -> Vec<Point> {
        self.components().iter().map(|comp| self.cells[comp[0]].centroid()).collect()
    }

    /// The residual as polygons with holes, one per component. Holes of a
    /// component may touch each other or the outer boundary at single points.
    pub fn to_regions(&self) -> Vec<PolygonWithHoles> {
        let mut out = Vec::new();
        for comp in self.components() {
            let cells: Vec<&ConvexPolygon> = comp.iter().map(|&c| &self.cells[c]).collect();
            out.extend(assemble(&boundary_loops(&cells)));
        }
        out
    }
}

/// `closure(region) \ interior(piece)` as polygons with holes.
pub fn region_difference(region: &PolygonWithHoles, piece: &ConvexPolygon) -> Vec<PolygonWithHoles> {
    let mut r = Residual::new(region);
    r.subtract(piece);
    r.to_regions()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Supporting line: `y = m x + c`, or `x = c` when vertical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct LineKey {
    vertical: bool,
    m: Rational,
    c: Rational,
}

#[derive(Debug, Clone)]
struct Interval {
    cell: usize,
    lo: Rational,
    hi: Rational,
    /// +1 when the edge runs in the increasing parameter direction.
    sign: i8,
}

fn line_of(a: &Point, b: &Point) -> (LineKey, Rational, Rational, i8) {
    if a.x == b.x {
        let key = LineKey { vertical: true, m: Rational::zero(), c: a.x.clone() };
        let sign = if b.y > a.y { 1 } else { -1 };
        return (key, a.y.clone(), b.y.clone(), sign);
    }
    let m = (&b.y - &a.y) / &(&b.x - &a.x);
    let c = &a.y - &(&m * &a.x);
    let sign = if b.x > a.x { 1 } else { -1 };
    (LineKey { vertical: false, m, c }, a.x.clone(), b.x.clone(), sign)
}

fn line_groups(cells: &[ConvexPolygon]) -> HashMap<LineKey, Vec<Interval>> {
    let mut groups: HashMap<LineKey, Vec<Interval>> = HashMap::new();
    for (i, c) in cells.iter().enumerate() {
        for (a, b) in c.edges() {
            let (key, s0, s1, sign) = line_of(a, b);
            let (lo, hi) = if s0 < s1 { (s0, s1) } else { (s1, s0) };
            groups.entry(key).or_default().push(Interval { cell: i, lo, hi, sign });
        }
    }
    groups
}

fn point_on(key: &LineKey, s: &Rational) -> Point {
    if key.vertical {
        Point::new(key.c.clone(), s.clone())
    } else {
        Point::new(s.clone(), &(&key.m * s) + &key.c)
    }
}

/// Directed boundary loops of the union of interior-disjoint CCW cells:
/// counterclockwise outers, clockwise holes.
fn boundary_loops(cells: &[&ConvexPolygon]) -> Vec<Vec<Point>> {
    let owned: Vec<ConvexPolygon> = cells.iter().map(|c| (*c).clone()).collect();
    let groups = line_groups(&owned);
    let mut keys: Vec<&LineKey> = groups.keys().collect();
    keys.sort_by(|a, b| (a.vertical, &a.m, &a.c).cmp(&(b.vertical, &b.m, &b.c)));

    // net multiplicity on each elementary subsegment of every line
    let mut segs: Vec<(Point, Point)> = Vec::new();
    for key in keys {
        let group = &groups[key];
        let mut cuts: Vec<&Rational> = group.iter().flat_map(|iv| [&iv.lo, &iv.hi]).collect();
        cuts.sort();
        cuts.dedup();
        for w in cuts.windows(2) {
            let net: i32 = group.iter().filter(|iv| &iv.lo <= w[0] && w[1] <= &iv.hi).map(|iv| iv.sign as i32).sum();
            let (p, q) = (point_on(key, w[0]), point_on(key, w[1]));
            match net {
                0 => {}
                n if n > 0 => segs.push((p, q)),
                _ => segs.push((q, p)),
            }
        }
    }

    let mut outgoing: HashMap<&Point, Vec<usize>> = HashMap::new();
    for (i, (a, _)) in segs.iter().enumerate() {
        outgoing.entry(a).or_default().push(i);
    }
    let mut used = vec![false; segs.len()];
    let mut loops = Vec::new();
    for start in 0..segs.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let mut ring = vec![segs[start].0.clone()];
        let mut cur = start;
        loop {
            let (u, v) = &segs[cur];
            let back = Point::new(&u.x - &v.x, &u.y - &v.y);
            let next = outgoing[v]
                .iter()
                .copied()
                .filter(|&e| !used[e] || e == start)
                .min_by(|&e, &f| cmp_cw(&back, &dir(&segs[e]), &dir(&segs[f])))
                .expect("boundary loops are closed");
            if next == start {
                break;
            }
            used[next] = true;
            ring.push(v.clone());
            cur = next;
        }
        loops.push(strip_collinear(ring));
    }
    loops.retain(|l| l.len() >= 3);
    loops
}

fn dir(s: &(Point, Point)) -> Point {
    Point::new(&s.1.x - &s.0.x, &s.1.y - &s.0.y)
}

fn cross_v(a: &Point, b: &Point) -> Rational {
    &(&a.x * &b.y) - &(&a.y * &b.x)
}

/// Clockwise angle from `r` to `w` lies in (0, pi) -> 0, pi -> 1,
/// (pi, 2pi) -> 2, 2pi -> 3.
fn cw_half(r: &Point, w: &Point) -> u8 {
    match cross_v(r, w).signum() {
        -1 => 0,
        1 => 2,
        _ => {
            let dot = &(&r.x * &w.x) + &(&r.y * &w.y);
            if dot.signum() < 0 {
                1
            } else {
                3
            }
        }
    }
}

/// Orders `a` and `b` by clockwise angle from `r`.
fn cmp_cw(r: &Point, a: &Point, b: &Point) -> std::cmp::Ordering {
    let (ha, hb) = (cw_half(r, a), cw_half(r, b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    // same half: a first iff b is clockwise of a
    0.cmp(&-cross_v(a, b).signum())
}

fn strip_collinear(mut v: Vec<Point>) -> Vec<Point> {
    let mut i = 0;
    while v.len() >= 3 && i < v.len() {
        let n = v.len();
        if orientation(&v[(i + n - 1) % n], &v[i], &v[(i + 1) % n]) == Orientation::Collinear {
            v.remove(i);
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    v
}

fn assemble(loops: &[Vec<Point>]) -> Vec<PolygonWithHoles> {
    let (outers, holes): (Vec<&Vec<Point>>, Vec<&Vec<Point>>) = loops.iter().partition(|l| signed_area(l).signum() > 0);
    let mut slots: Vec<Vec<SimplePolygon>> = vec![vec![]; outers.len()];
    for h in holes {
        let probe = h[0].midpoint(&h[1]);
        let home = outers
            .iter()
            .enumerate()
            .filter(|(_, o)| classify_in_loop(&probe, o) == Location::Interior)
            .min_by_key(|(_, o)| signed_area(o))
            .map(|(i, _)| i)
            .unwrap_or(0);
        slots[home].push(SimplePolygon::new_unchecked(h.clone()));
    }
    outers
        .into_iter()
        .zip(slots)
        .map(|(o, hs)| PolygonWithHoles::new_unchecked(SimplePolygon::new_unchecked(o.clone()), hs))
        .collect()
}
