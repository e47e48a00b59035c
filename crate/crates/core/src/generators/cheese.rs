use rand::Rng as _;

use super::{meta, GenError};
use crate::geom::{
    convex_hull, orientation, rotate_to_min, segments_intersect, Bounds, ConvexPolygon, Location, Orientation, Point,
    PolygonWithHoles, Rational, SimplePolygon,
};
use crate::instance::Instance;
use crate::rng::{seeded, Rng};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheeseParams {
    pub target_holes: usize,
    pub field_width: i64,
    pub field_height: i64,
    /// Inclusive range of vertices per hole.
    pub hole_vertices: (usize, usize),
    pub hole_radius: i64,
    pub seed: u64,
}

impl CheeseParams {
    pub fn new(target_holes: usize, seed: u64) -> Self {
        CheeseParams {
            target_holes,
            field_width: 1000,
            field_height: 1000,
            hole_vertices: (3, 6),
            hole_radius: 10,
            seed,
        }
    }

    fn check(&self) -> Result<(), GenError> {
        let (lo, hi) = self.hole_vertices;
        let bad = |m: &str| Err(GenError::InvalidParams(m.into()));
        if lo < 3 || hi > 64 || lo > hi {
            return bad("hole vertex range must lie within [3, 64]");
        }
        if self.hole_radius < 1 {
            return bad("hole radius must be at least 1");
        }
        if self.field_width < 4 * self.hole_radius || self.field_height < 4 * self.hole_radius {
            return bad("field must be at least 4 hole radii wide and high");
        }
        Ok(())
    }
}

const HOLE_RETRIES: usize = 1000;

fn sample_points(center: (i64, i64), k: usize, radius: i64, rng: &mut Rng) -> Vec<Point> {
    (0..k)
        .map(|_| {
            Point::int(center.0 + rng.random_range(-radius..=radius), center.1 + rng.random_range(-radius..=radius))
        })
        .collect()
}

fn degenerate(pts: &[Point]) -> bool {
    let mut s: Vec<&Point> = pts.iter().collect();
    s.sort();
    s.dedup();
    s.len() < pts.len() || pts.iter().all(|p| orientation(&pts[0], &pts[1], p) == Orientation::Collinear)
}

/// Repeatedly reverses the path between the first pair of non-adjacent
/// intersecting edges. Returns whether the cycle ended up simple.
fn two_opt(v: &mut [Point]) -> bool {
    let n = v.len();
    let max_passes = 4 * n * n + 16;
    for _ in 0..max_passes {
        let mut swapped = false;
        'scan: for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_intersect(&v[i], &v[i + 1], &v[j], &v[(j + 1) % n]) {
                    v[i + 1..=j].reverse();
                    swapped = true;
                    break 'scan;
                }
            }
        }
        if !swapped {
            return true;
        }
    }
    false
}

fn finish_hole(v: Vec<Point>) -> SimplePolygon {
    let mut v = SimplePolygon::new_unchecked(v).oriented(Orientation::Cw).into_vertices();
    rotate_to_min(&mut v);
    SimplePolygon::new_unchecked(v)
}

/// Simple polygon on `k` random integer points around `center`, clockwise and
/// starting at its smallest vertex.
pub fn gen_hole(center: (i64, i64), k: usize, radius: i64, rng: &mut Rng) -> Result<SimplePolygon, GenError> {
    if k < 3 || radius < 1 {
        return Err(GenError::InvalidParams("a hole needs k >= 3 and radius >= 1".into()));
    }
    for _ in 0..HOLE_RETRIES {
        let mut pts = sample_points(center, k, radius, rng);
        if degenerate(&pts) {
            continue;
        }
        if two_opt(&mut pts) && SimplePolygon::new(pts.clone()).is_ok() {
            return Ok(finish_hole(pts));
        }
    }
    Err(GenError::GeneratorStall { placed: 0 })
}

fn conflicts(a: &SimplePolygon, ab: &Bounds, b: &SimplePolygon, bb: &Bounds) -> bool {
    if !ab.overlaps(bb) {
        return false;
    }
    for (p, q) in a.edges() {
        for (r, s) in b.edges() {
            if segments_intersect(p, q, r, s) {
                return true;
            }
        }
    }
    a.classify(&b.vertices()[0]) != Location::Outside || b.classify(&a.vertices()[0]) != Location::Outside
}

fn dist2_to_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    (p.0 - qx).powi(2) + (p.1 - qy).powi(2)
}

/// Outer-boundary edges that some hole gets too close to.
fn violated_edges(outer: &[Point], holes: &[SimplePolygon]) -> Vec<bool> {
    let n = outer.len();
    let poly = SimplePolygon::new_unchecked(outer.to_vec());
    let of = |p: &Point| p.to_f64();
    let mut bad = vec![false; n];
    let mut mark = |p: &Point| {
        let q = of(p);
        let e = (0..n)
            .min_by(|&i, &j| {
                let di = dist2_to_segment(q, of(&outer[i]), of(&outer[(i + 1) % n]));
                let dj = dist2_to_segment(q, of(&outer[j]), of(&outer[(j + 1) % n]));
                di.total_cmp(&dj)
            })
            .unwrap();
        bad[e] = true;
    };
    for h in holes {
        let hv = h.vertices();
        let m = hv.len();
        for (i, p) in hv.iter().enumerate() {
            let crosses = (0..n).any(|e| segments_intersect(p, &hv[(i + 1) % m], &outer[e], &outer[(e + 1) % n]));
            if poly.classify(p) != Location::Interior || crosses {
                mark(p);
                if crosses {
                    mark(&hv[(i + 1) % m]);
                }
            }
        }
    }
    bad
}

/// Pushes violated edges of a counterclockwise outer boundary outwards by
/// about `radius` until every hole is strictly inside.
fn inflate(mut outer: Vec<Point>, holes: &[SimplePolygon], radius: i64) -> Option<SimplePolygon> {
    for _ in 0..100 {
        let bad = violated_edges(&outer, holes);
        if !bad.contains(&true) {
            let region = PolygonWithHoles::new(SimplePolygon::new(outer.clone()).ok()?, holes.to_vec());
            if region.is_ok() {
                return Some(SimplePolygon::new_unchecked(outer));
            }
        }
        let n = outer.len();
        let offsets: Vec<(i64, i64)> = (0..n)
            .map(|i| {
                if !bad[i] {
                    return (0, 0);
                }
                let (a, b) = (outer[i].to_f64(), outer[(i + 1) % n].to_f64());
                let (dx, dy) = (b.0 - a.0, b.1 - a.1);
                let len = (dx * dx + dy * dy).sqrt();
                let r = radius as f64;
                ((r * dy / len).round() as i64, (-r * dx / len).round() as i64)
            })
            .collect();
        let moved: Vec<Point> = (0..n)
            .map(|i| {
                let (p, q) = (offsets[(i + n - 1) % n], offsets[i]);
                let d = (p.0 + q.0, p.1 + q.1);
                Point::new(&outer[i].x + &Rational::from_int(d.0), &outer[i].y + &Rational::from_int(d.1))
            })
            .collect();
        outer = match SimplePolygon::new(moved.clone()) {
            Ok(p) if p.orientation() == Orientation::Ccw => moved,
            _ => convex_hull(&moved).ok()?.into_vertices(),
        };
    }
    None
}

fn translate_to_origin(outer: SimplePolygon, holes: Vec<SimplePolygon>) -> PolygonWithHoles {
    let min_x = outer.vertices().iter().map(|p| p.x.clone()).min().unwrap();
    let min_y = outer.vertices().iter().map(|p| p.y.clone()).min().unwrap();
    let shift = |l: &SimplePolygon| {
        SimplePolygon::new_unchecked(l.vertices().iter().map(|p| Point::new(&p.x - &min_x, &p.y - &min_y)).collect())
    };
    let holes = holes.iter().map(shift).collect();
    PolygonWithHoles::new_unchecked(shift(&outer), holes)
}

fn generate(params: &CheeseParams, convex_holes: bool) -> Result<Instance, GenError> {
    params.check()?;
    let mut rng = seeded(params.seed);
    let r = params.hole_radius;
    let center = |rng: &mut Rng| (rng.random_range(0..=params.field_width), rng.random_range(0..=params.field_height));
    let mut holes: Vec<SimplePolygon> = Vec::new();
    let mut bounds: Vec<Bounds> = Vec::new();
    let mut centers: Vec<Point> = Vec::new();
    let budget = (20 * params.target_holes).max(1000);
    let mut attempts = 0;
    while holes.len() < params.target_holes {
        if attempts == budget {
            return Err(GenError::GeneratorStall { placed: holes.len() });
        }
        attempts += 1;
        let c = center(&mut rng);
        let k = rng.random_range(params.hole_vertices.0..=params.hole_vertices.1);
        let mut hole = gen_hole(c, k, r, &mut rng).map_err(|_| GenError::GeneratorStall { placed: holes.len() })?;
        if convex_holes {
            let hull = convex_hull(hole.vertices()).expect("hole has area");
            hole = finish_hole(hull.into_vertices());
        }
        let hb = Bounds::of_points(hole.vertices());
        if holes.iter().zip(&bounds).any(|(h, b)| conflicts(&hole, &hb, h, b)) {
            continue;
        }
        centers.push(Point::int(c.0, c.1));
        holes.push(hole);
        bounds.push(hb);
    }
    // too few centers for a hull: add anchor points that carry no hole
    while centers.len() < 3 || convex_hull(&centers).is_err() {
        let c = center(&mut rng);
        centers.push(Point::int(c.0, c.1));
    }
    let hull: ConvexPolygon = convex_hull(&centers).expect("non-degenerate");
    let outer = inflate(hull.into_vertices(), &holes, r).ok_or(GenError::GeneratorStall { placed: holes.len() })?;
    let region = translate_to_origin(outer, holes);
    let kind = if convex_holes { "ccheese" } else { "cheese" };
    let mut inst = Instance::new(format!("{kind}-h{}-s{}", params.target_holes, params.seed), region);
    inst.meta = Some(meta(
        kind,
        params.seed,
        &[
            ("target_holes", params.target_holes.to_string()),
            ("field_width", params.field_width.to_string()),
            ("field_height", params.field_height.to_string()),
            ("hole_vertices", format!("{}-{}", params.hole_vertices.0, params.hole_vertices.1)),
            ("hole_radius", params.hole_radius.to_string()),
        ],
    ));
    Ok(inst)
}

pub fn gen_cheese(params: &CheeseParams) -> Result<Instance, GenError> {
    generate(params, false)
}

/// Like [`gen_cheese`], with every hole replaced by its convex hull.
pub fn gen_ccheese(params: &CheeseParams) -> Result<Instance, GenError> {
    generate(params, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::is_convex;

    #[test]
    fn triangle_hole_needs_no_untangling() {
        let mut rng = seeded(7);
        for _ in 0..50 {
            let h = gen_hole((0, 0), 3, 5, &mut rng).unwrap();
            assert_eq!(h.len(), 3);
            assert_eq!(h.orientation(), Orientation::Cw);
        }
    }

    #[test]
    fn crossed_quadrilateral_is_untangled() {
        let mut v = vec![Point::int(0, 0), Point::int(2, 2), Point::int(2, 0), Point::int(0, 2)];
        assert!(SimplePolygon::new(v.clone()).is_err());
        assert!(two_opt(&mut v));
        assert!(SimplePolygon::new(v).is_ok());
    }

    #[test]
    fn hexagon_holes_are_simple() {
        let mut rng = seeded(1);
        for _ in 0..100 {
            let h = gen_hole((50, 50), 6, 8, &mut rng).unwrap();
            SimplePolygon::new(h.vertices().to_vec()).unwrap();
            assert_eq!(h.len(), 6);
        }
    }

    fn check_valid(inst: &Instance) {
        let r = &inst.region;
        r.validate().unwrap();
        assert!(r.is_integral());
        let (lo, _) = r.bbox();
        assert_eq!(lo, Point::int(0, 0));
        for h in r.holes() {
            for p in h.vertices() {
                assert_eq!(r.outer().classify(p), Location::Interior);
            }
        }
    }

    #[test]
    fn zero_and_one_hole() {
        let i0 = gen_cheese(&CheeseParams::new(0, 3)).unwrap();
        check_valid(&i0);
        assert!(i0.region.holes().is_empty());
        let i1 = gen_cheese(&CheeseParams::new(1, 3)).unwrap();
        check_valid(&i1);
        assert_eq!(i1.region.holes().len(), 1);
    }

    #[test]
    fn deterministic() {
        let p = CheeseParams::new(20, 11);
        assert_eq!(gen_cheese(&p).unwrap(), gen_cheese(&p).unwrap());
        assert_ne!(gen_cheese(&p).unwrap().region, gen_cheese(&CheeseParams::new(20, 12)).unwrap().region);
    }

    #[test]
    fn ccheese_holes_convex() {
        let inst = gen_ccheese(&CheeseParams::new(30, 5)).unwrap();
        check_valid(&inst);
        for h in inst.region.holes() {
            assert!(is_convex(h.vertices()).unwrap());
        }
    }

    #[test]
    fn triangles_make_cheese_and_ccheese_agree() {
        let mut p = CheeseParams::new(3, 21);
        p.hole_vertices = (3, 3);
        let a = gen_cheese(&p).unwrap();
        let b = gen_ccheese(&p).unwrap();
        assert_eq!(a.region, b.region);
    }

    #[test]
    fn bad_params() {
        let mut p = CheeseParams::new(3, 0);
        p.hole_vertices = (2, 5);
        assert!(matches!(gen_cheese(&p), Err(GenError::InvalidParams(_))));
        let mut p = CheeseParams::new(3, 0);
        p.field_width = 10;
        assert!(matches!(gen_cheese(&p), Err(GenError::InvalidParams(_))));
    }

    #[test]
    fn crowded_field_stalls() {
        let mut p = CheeseParams::new(500, 0);
        p.field_width = 40;
        p.field_height = 40;
        match gen_cheese(&p) {
            Err(GenError::GeneratorStall { placed }) => assert!(placed < 500),
            other => panic!("{other:?}"),
        }
    }
}
