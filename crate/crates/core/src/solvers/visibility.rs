//! Triangle visibility graph: `t1 ~ t2` when the hull of both triangles lies
//! in the region.

use rayon::prelude::*;

use crate::geom::{chord_midpoint_in_interior, convex_hull, ConvexPolygon, Point};
use crate::triangulate::TriangulationMesh;

/// Containment queries answered by walking the mesh instead of the region
/// boundary, so cost follows the size of the piece.
pub struct MeshIndex<'a> {
    mesh: &'a TriangulationMesh,
    fpts: Vec<(f64, f64)>,
}

enum Walk {
    Reached,
    Blocked,
    Unsure,
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn norm(a: (f64, f64), b: (f64, f64)) -> f64 {
    (b.0 - a.0).abs() + (b.1 - a.1).abs()
}

impl<'a> MeshIndex<'a> {
    pub fn new(mesh: &'a TriangulationMesh) -> Self {
        MeshIndex { mesh, fpts: mesh.points.iter().map(|p| p.to_f64()).collect() }
    }

    pub fn mesh(&self) -> &TriangulationMesh {
        self.mesh
    }

    fn fcentroid(&self, t: usize) -> (f64, f64) {
        let [a, b, c] = self.mesh.triangles[t].map(|i| self.fpts[i]);
        ((a.0 + b.0 + c.0) / 3.0, (a.1 + b.1 + c.1) / 3.0)
    }

    /// Follows the segment between the two centroids through the mesh.
    /// `Blocked` only when the segment clearly leaves the region.
    fn walk(&self, from: usize, to: usize) -> Walk {
        let (c1, c2) = (self.fcentroid(from), self.fcentroid(to));
        let len = norm(c1, c2);
        let mut t = from;
        for _ in 0..=self.mesh.len() {
            if t == to {
                return Walk::Reached;
            }
            let tri = self.mesh.triangles[t];
            let mut exit = None;
            for k in 0..3 {
                let (p, q) = (self.fpts[tri[k]], self.fpts[tri[(k + 1) % 3]]);
                let tol = 1e-9 * norm(p, q) * len.max(norm(p, c2));
                let beyond = orient(p, q, c2);
                if beyond.abs() <= tol {
                    return Walk::Unsure;
                }
                if beyond > 0.0 {
                    continue;
                }
                let (sp, sq) = (orient(c1, c2, p), orient(c1, c2, q));
                if sp.abs() <= tol || sq.abs() <= tol {
                    return Walk::Unsure;
                }
                if (sp > 0.0) != (sq > 0.0) {
                    exit = Some(k);
                    break;
                }
            }
            match exit {
                None => return Walk::Unsure,
                Some(k) => match self.mesh.adjacency[t][k] {
                    None => return Walk::Blocked,
                    Some(n) => t = n,
                },
            }
        }
        Walk::Unsure
    }

    /// `true` when a boundary edge certainly passes through the interior of
    /// the piece (vertices `fv`, counterclockwise).
    fn surely_escapes(&self, fv: &[(f64, f64)], start: usize) -> bool {
        let n = fv.len();
        let lines: Vec<((f64, f64), f64)> = (0..n)
            .map(|i| {
                let (u, v) = (fv[i], fv[(i + 1) % n]);
                (u, (v.0 - u.0).hypot(v.1 - u.1))
            })
            .collect();
        let depth =
            |p: (f64, f64)| (0..n).map(|i| orient(fv[i], fv[(i + 1) % n], p) / lines[i].1).fold(f64::MAX, f64::min);
        let scale = fv.iter().fold(1.0f64, |m, p| m.max(p.0.abs()).max(p.1.abs()));
        let margin = 1e-9 * scale;
        // deepest point of the chord ab ∩ piece, if the chord is nonempty
        let chord = |a: (f64, f64), b: (f64, f64)| {
            let (mut lo, mut hi) = (0.0f64, 1.0f64);
            for i in 0..n {
                let (fa, fb) = (orient(fv[i], fv[(i + 1) % n], a), orient(fv[i], fv[(i + 1) % n], b));
                if fa < 0.0 && fb < 0.0 {
                    return None;
                }
                if fa >= 0.0 && fb >= 0.0 {
                    continue;
                }
                let t = fa / (fa - fb);
                if fa < 0.0 {
                    lo = lo.max(t);
                } else {
                    hi = hi.min(t);
                }
                if lo >= hi {
                    return None;
                }
            }
            let m = (lo + hi) / 2.0;
            Some(depth((a.0 + (b.0 - a.0) * m, a.1 + (b.1 - a.1) * m)))
        };
        let mut seen = std::collections::HashSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            let tri = self.mesh.triangles[t];
            for k in 0..3 {
                let nb = self.mesh.adjacency[t][k];
                if nb.is_some_and(|x| seen.contains(&x)) {
                    continue;
                }
                let d = match chord(self.fpts[tri[k]], self.fpts[tri[(k + 1) % 3]]) {
                    Some(d) if d > 0.0 => d,
                    _ => continue,
                };
                match nb {
                    None if d > margin => return true,
                    None => {}
                    Some(x) => {
                        seen.insert(x);
                        stack.push(x);
                    }
                }
            }
        }
        false
    }

    /// Exact `piece ⊆ region` for a convex piece containing triangle `start`.
    ///
    /// Floods over triangles meeting the interior of the piece; the piece
    /// leaves the region iff the flood meets a boundary edge through the
    /// piece interior.
    pub fn contains(&self, piece: &ConvexPolygon, start: usize) -> bool {
        let fv: Vec<(f64, f64)> = piece.vertices().iter().map(|p| p.to_f64()).collect();
        if self.surely_escapes(&fv, start) {
            return false;
        }
        let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for &(x, y) in &fv {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        let pad = 1e-9 * (hi.0 - lo.0 + hi.1 - lo.1 + 1.0);
        let off_box = |p: (f64, f64), q: (f64, f64)| {
            p.0.max(q.0) < lo.0 - pad
                || p.0.min(q.0) > hi.0 + pad
                || p.1.max(q.1) < lo.1 - pad
                || p.1.min(q.1) > hi.1 + pad
        };
        let mut seen = std::collections::HashSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            let tri = self.mesh.triangles[t];
            for k in 0..3 {
                let nb = self.mesh.adjacency[t][k];
                if nb.is_some_and(|n| seen.contains(&n)) {
                    continue;
                }
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                if off_box(self.fpts[a], self.fpts[b]) {
                    continue;
                }
                if chord_midpoint_in_interior(&self.mesh.points[a], &self.mesh.points[b], piece).is_none() {
                    continue;
                }
                match nb {
                    None => return false,
                    Some(n) => {
                        seen.insert(n);
                        stack.push(n);
                    }
                }
            }
        }
        true
    }

    /// Triangles that some segment from the centroid of `from` may reach
    /// without leaving the region (a superset; near-degenerate rays explore
    /// both sides). Returns `None` if the expansion grows too large.
    fn reachable(&self, from: usize, limit: usize) -> Option<Vec<usize>> {
        let q = self.fcentroid(from);
        let tris = &self.mesh.triangles;
        let mut seen = vec![from];
        // (triangle, entry edge index, right ray point, left ray point)
        let mut stack: Vec<(usize, usize, (f64, f64), (f64, f64))> = Vec::new();
        let enter = |t: usize, x: usize, y: usize| (0..3).find(|&j| tris[t][j] == y && tris[t][(j + 1) % 3] == x);
        for k in 0..3 {
            if let Some(n) = self.mesh.adjacency[from][k] {
                let (x, y) = (tris[from][k], tris[from][(k + 1) % 3]);
                stack.push((n, enter(n, x, y)?, self.fpts[x], self.fpts[y]));
            }
        }
        let mut steps = 0;
        while let Some((t, j, wr, wl)) = stack.pop() {
            steps += 1;
            if steps > limit {
                return None;
            }
            seen.push(t);
            let (e0, e1, v) = (tris[t][j], tris[t][(j + 1) % 3], tris[t][(j + 2) % 3]);
            let pv = self.fpts[v];
            let scale = norm(q, pv);
            let tol_r = 1e-9 * scale * norm(q, wr);
            let tol_l = 1e-9 * scale * norm(q, wl);
            let (sr, sl) = (orient(q, wr, pv), orient(q, wl, pv));
            let (mut right, mut left) = (None, None);
            if sr.abs() <= tol_r || sl.abs() <= tol_l {
                right = Some((wr, wl));
                left = Some((wr, wl));
            } else if sr > 0.0 && sl < 0.0 {
                right = Some((wr, pv));
                left = Some((pv, wl));
            } else if sr < 0.0 {
                left = Some((wr, wl));
            } else {
                right = Some((wr, wl));
            }
            // right edge (e1, v) is edge j+1, left edge (v, e0) is edge j+2
            for (k, win, x, y) in [(j + 1, right, e1, v), (j + 2, left, v, e0)] {
                if let (Some((r, l)), Some(n)) = (win, self.mesh.adjacency[t][k % 3]) {
                    stack.push((n, enter(n, x, y)?, r, l));
                }
            }
        }
        seen.sort_unstable();
        seen.dedup();
        Some(seen)
    }

    /// Hull of the vertices of the given triangles.
    pub fn hull_of(&self, tris: &[usize]) -> ConvexPolygon {
        let pts: Vec<Point> =
            tris.iter().flat_map(|&t| self.mesh.triangles[t]).map(|i| self.mesh.points[i].clone()).collect();
        convex_hull(&pts).expect("triangles have positive area")
    }

    pub fn pair_visible(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        if let Walk::Blocked = self.walk(a, b) {
            return false;
        }
        self.contains(&self.hull_of(&[a, b]), a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisibilityGraph {
    adj: Vec<Vec<usize>>,
}

impl VisibilityGraph {
    /// Symmetrizes, drops self-loops and duplicates.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
            l.dedup();
        }
        VisibilityGraph { adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Sorted.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(i, &a)| vs[i + 1..].iter().all(|&b| a != b && self.has_edge(a, b)))
    }
}

/// Pairs are screened by expanding the view from each centroid through the
/// mesh, then tested exactly; in parallel over the first triangle.
pub fn build_visibility_graph(mesh: &TriangulationMesh) -> VisibilityGraph {
    let idx = MeshIndex::new(mesh);
    let n = mesh.len();
    let rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|a| match idx.reachable(a, 64 * n + 64) {
            Some(c) => c.into_iter().filter(|&b| b > a && idx.pair_visible(a, b)).collect(),
            None => (a + 1..n).filter(|&b| idx.pair_visible(a, b)).collect(),
        })
        .collect();
    VisibilityGraph::from_edges(n, rows.into_iter().enumerate().flat_map(|(a, r)| r.into_iter().map(move |b| (a, b))))
}
