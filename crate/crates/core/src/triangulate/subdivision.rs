use crate::geom::{orientation, ConvexPolygon, Orientation, Point};

use super::{key, EdgeMap, TriangulationMesh};

/// Planar subdivision of a region into convex faces, each a CCW cycle of
/// vertex indices. Faces only grow by merging neighbors.
#[derive(Debug, Clone)]
pub struct Subdivision {
    points: Vec<Point>,
    faces: Vec<Option<Vec<usize>>>,
    edge_face: EdgeMap<usize>,
}

impl Subdivision {
    pub fn from_mesh(mesh: &TriangulationMesh) -> Self {
        let mut edge_face = EdgeMap::default();
        let faces = mesh
            .triangles
            .iter()
            .enumerate()
            .map(|(f, t)| {
                for k in 0..3 {
                    edge_face.insert(key(t[k] as u32, t[(k + 1) % 3] as u32), f);
                }
                Some(t.to_vec())
            })
            .collect();
        Subdivision { points: mesh.points.clone(), faces, edge_face }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.faces.iter().filter(|f| f.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn face_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.faces.iter().enumerate().filter(|(_, f)| f.is_some()).map(|(i, _)| i)
    }

    pub fn is_alive(&self, f: usize) -> bool {
        self.faces[f].is_some()
    }

    pub fn face(&self, f: usize) -> &[usize] {
        self.faces[f].as_deref().expect("dead face")
    }

    /// Faces sharing at least one edge with `f`, ascending.
    pub fn neighbors(&self, f: usize) -> Vec<usize> {
        let cyc = self.face(f);
        let n = cyc.len();
        let mut out: Vec<usize> = (0..n)
            .filter_map(|i| self.edge_face.get(&key(cyc[(i + 1) % n] as u32, cyc[i] as u32)).copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn shares(&self, a: usize, b: usize, g: usize) -> bool {
        self.edge_face.get(&key(b as u32, a as u32)) == Some(&g)
    }

    /// Merges `g` into `f` if their union is convex; `f` keeps its id.
    pub fn try_merge(&mut self, f: usize, g: usize) -> bool {
        if f == g || !self.is_alive(f) || !self.is_alive(g) {
            return false;
        }
        let cf = self.face(f).to_vec();
        let cg = self.face(g).to_vec();
        let (nf, ng) = (cf.len(), cg.len());
        let shared = |i: usize| self.shares(cf[i % nf], cf[(i + 1) % nf], g);
        // first edge of the shared chain in f
        let Some(start) = (0..nf).find(|&i| shared(i) && !shared(i + nf - 1)) else {
            return false;
        };
        let mut len = 1;
        while shared(start + len) {
            len += 1;
        }
        let s0 = cf[start];
        let sk = cf[(start + len) % nf];
        let fp = &self.points[cf[(start + nf - 1) % nf]];
        let fnx = &self.points[cf[(start + len + 1) % nf]];
        let j0 = cg.iter().position(|&v| v == s0).unwrap();
        let jk = cg.iter().position(|&v| v == sk).unwrap();
        let gn = &self.points[cg[(j0 + 1) % ng]];
        let gp = &self.points[cg[(jk + ng - 1) % ng]];
        let (p0, pk) = (&self.points[s0], &self.points[sk]);
        if orientation(fp, p0, gn) == Orientation::Cw || orientation(gp, pk, fnx) == Orientation::Cw {
            return false;
        }
        let mut merged = Vec::with_capacity(nf + ng - 2 * len);
        // f from sk round to s0, then g from after s0 round to before sk
        let mut i = (start + len) % nf;
        loop {
            merged.push(cf[i]);
            if i == start {
                break;
            }
            i = (i + 1) % nf;
        }
        let mut j = (j0 + 1) % ng;
        while j != jk {
            merged.push(cg[j]);
            j = (j + 1) % ng;
        }
        for i in 0..len {
            let (a, b) = (cf[(start + i) % nf] as u32, cf[(start + i + 1) % nf] as u32);
            self.edge_face.remove(&key(a, b));
            self.edge_face.remove(&key(b, a));
        }
        self.faces[g] = None;
        for j in 0..ng {
            let k = key(cg[j] as u32, cg[(j + 1) % ng] as u32);
            if let Some(x) = self.edge_face.get_mut(&k) {
                *x = f;
            }
        }
        self.faces[f] = Some(merged);
        true
    }

    pub fn face_polygon(&self, f: usize) -> ConvexPolygon {
        let v = self.face(f).iter().map(|&i| self.points[i].clone()).collect();
        ConvexPolygon::new_unchecked(v).canonical()
    }

    pub fn pieces(&self) -> Vec<ConvexPolygon> {
        self.face_ids().map(|f| self.face_polygon(f)).collect()
    }
}
