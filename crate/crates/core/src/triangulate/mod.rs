//! Constrained triangulation of polygons with holes, Steiner-point policies,
//! and convex subdivisions built by merging triangles.

mod cdt;
mod steiner;
mod subdivision;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::geom::{on_segment, ConvexPolygon, Location, Point, PolygonWithHoles, Rational, RegionIndex};

pub(crate) use cdt::{key, EdgeMap};
pub use steiner::{extension_segments, steiner_points, SteinerPolicy};
pub use subdivision::Subdivision;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulateError {
    #[error("extra point {0} lies outside the region")]
    PointOutsideRegion(String),
}

/// Triangles of a constrained triangulation of a region.
#[derive(Debug, Clone)]
pub struct TriangulationMesh {
    pub points: Vec<Point>,
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    /// `adjacency[t][k]` is the triangle across edge `(v[k], v[k+1])`.
    pub adjacency: Vec<[Option<usize>; 3]>,
    /// Region boundary pieces, stored as `(min, max)` index pairs.
    pub constrained_edges: HashSet<(usize, usize)>,
    pub hole_count: usize,
}

impl TriangulationMesh {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangle_points(&self, t: usize) -> [&Point; 3] {
        let [a, b, c] = self.triangles[t];
        [&self.points[a], &self.points[b], &self.points[c]]
    }

    pub fn triangle_polygon(&self, t: usize) -> ConvexPolygon {
        ConvexPolygon::new_unchecked(self.triangle_points(t).iter().map(|p| (*p).clone()).collect())
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.triangle_points(t);
        let three = Rational::from_int(3);
        Point::new((&(&a.x + &b.x) + &c.x) / &three, (&(&a.y + &b.y) + &c.y) / &three)
    }

    pub fn is_constrained(&self, a: usize, b: usize) -> bool {
        self.constrained_edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn area(&self) -> Rational {
        (0..self.len()).map(|t| self.triangle_polygon(t).area()).sum()
    }

    /// Vertices lying on the region boundary.
    pub fn boundary_vertex_count(&self) -> usize {
        let mut s = HashSet::new();
        for &(a, b) in &self.constrained_edges {
            s.insert(a);
            s.insert(b);
        }
        s.len()
    }

    /// `2 V_int + V_bnd + 2H - 2`, the triangle count every triangulation of
    /// this vertex set must have.
    pub fn euler_triangle_count(&self) -> usize {
        let vb = self.boundary_vertex_count();
        let vi = self.points.len() - vb;
        2 * vi + vb + 2 * self.hole_count - 2
    }
}

/// Constrained triangulation of `region` using all region vertices plus
/// `extra_points`. Extra points on a boundary edge split that edge.
pub fn triangulate(region: &PolygonWithHoles, extra_points: &[Point]) -> Result<TriangulationMesh, TriangulateError> {
    let mut index_of: HashMap<Point, u32> = HashMap::new();
    let mut points: Vec<Point> = Vec::new();
    fn intern(p: &Point, index_of: &mut HashMap<Point, u32>, points: &mut Vec<Point>) -> u32 {
        *index_of.entry(p.clone()).or_insert_with(|| {
            points.push(p.clone());
            points.len() as u32 - 1
        })
    }
    let loops: Vec<Vec<u32>> = region
        .loops()
        .map(|l| l.vertices().iter().map(|p| intern(p, &mut index_of, &mut points)).collect())
        .collect();

    let mut extras: Vec<&Point> = extra_points.iter().collect();
    extras.sort();
    extras.dedup();
    let idx = if extras.is_empty() { None } else { Some(RegionIndex::new(region)) };
    // splits per boundary edge, keyed by (loop, edge)
    let mut splits: HashMap<(usize, usize), Vec<u32>> = HashMap::new();
    for p in extras {
        let idx = idx.as_ref().unwrap();
        match idx.classify(p) {
            Location::Outside => return Err(TriangulateError::PointOutsideRegion(format!("{p:?}"))),
            Location::Interior => {
                intern(p, &mut index_of, &mut points);
            }
            Location::Boundary => {
                if index_of.contains_key(p) {
                    continue;
                }
                let v = intern(p, &mut index_of, &mut points);
                'find: for (l, lp) in region.loops().enumerate() {
                    let verts = lp.vertices();
                    for e in 0..verts.len() {
                        if on_segment(&verts[e], &verts[(e + 1) % verts.len()], p) {
                            splits.entry((l, e)).or_default().push(v);
                            break 'find;
                        }
                    }
                }
            }
        }
    }

    let mut segments: Vec<(u32, u32)> = Vec::new();
    for (l, lp) in loops.iter().enumerate() {
        let n = lp.len();
        for e in 0..n {
            let (a, b) = (lp[e], lp[(e + 1) % n]);
            match splits.get_mut(&(l, e)) {
                None => segments.push((a, b)),
                Some(mid) => {
                    let pa = points[a as usize].clone();
                    mid.sort_by_cached_key(|&v| points[v as usize].dist2(&pa));
                    let mut prev = a;
                    for &m in mid.iter() {
                        segments.push((prev, m));
                        prev = m;
                    }
                    segments.push((prev, b));
                }
            }
        }
    }

    let n = points.len();
    let mut cdt = cdt::Cdt::new(points);
    for v in 0..n as u32 {
        cdt.insert(v);
    }
    for &(a, b) in &segments {
        cdt.insert_constraint(a, b);
    }
    cdt.remove_exterior();
    cdt.make_delaunay();

    let triangles: Vec<[usize; 3]> = cdt.triangles().map(|t| [t[0] as usize, t[1] as usize, t[2] as usize]).collect();
    let mut tri_of: EdgeMap<usize> = EdgeMap::default();
    for (i, t) in triangles.iter().enumerate() {
        for k in 0..3 {
            tri_of.insert(key(t[k] as u32, t[(k + 1) % 3] as u32), i);
        }
    }
    let adjacency = triangles
        .iter()
        .map(|t| {
            let mut adj = [None; 3];
            for k in 0..3 {
                adj[k] = tri_of.get(&key(t[(k + 1) % 3] as u32, t[k] as u32)).copied();
            }
            adj
        })
        .collect();
    let constrained_edges = cdt.constrained.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
    let mut points = cdt.pts;
    points.truncate(n);
    Ok(TriangulationMesh { points, triangles, adjacency, constrained_edges, hole_count: region.holes().len() })
}
