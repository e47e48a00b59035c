//! Incremental constrained Delaunay triangulation.
//!
//! Points are inserted into a large enclosing triangle with Lawson flips,
//! boundary segments are then forced in by re-triangulating the cavity they
//! cross, and finally everything outside the region is discarded by a parity
//! flood fill across constrained edges. All predicates are exact.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::{BuildHasherDefault, Hasher};

use crate::geom::{incircle, orientation, Orientation, Point, Rational};

#[derive(Default)]
pub(crate) struct EdgeHasher(u64);

impl Hasher for EdgeHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ b as u64).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
        }
    }

    fn write_u64(&mut self, v: u64) {
        self.0 = (self.0.rotate_left(5) ^ v).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }
}

pub(crate) type EdgeMap<V> = HashMap<u64, V, BuildHasherDefault<EdgeHasher>>;

#[inline]
pub(crate) fn key(a: u32, b: u32) -> u64 {
    ((a as u64) << 32) | b as u64
}

pub(crate) struct Cdt {
    pub pts: Vec<Point>,
    pub tris: Vec<[u32; 3]>,
    pub alive: Vec<bool>,
    free: Vec<u32>,
    pub edges: EdgeMap<u32>,
    vtri: Vec<u32>,
    last: u32,
    pub constrained: HashSet<(u32, u32)>,
    n_super: u32,
}

const NONE: u32 = u32::MAX;

impl Cdt {
    /// Points `0..n` are the input; three enclosing vertices are appended.
    pub fn new(points: Vec<Point>) -> Self {
        let n = points.len();
        let mut pts = points;
        let (mut lo_x, mut lo_y) = (pts[0].x.clone(), pts[0].y.clone());
        let (mut hi_x, mut hi_y) = (pts[0].x.clone(), pts[0].y.clone());
        for p in &pts {
            if p.x < lo_x {
                lo_x = p.x.clone();
            }
            if p.y < lo_y {
                lo_y = p.y.clone();
            }
            if p.x > hi_x {
                hi_x = p.x.clone();
            }
            if p.y > hi_y {
                hi_y = p.y.clone();
            }
        }
        let w = (&hi_x - &lo_x).max(&hi_y - &lo_y) + Rational::one();
        let big = &w * &Rational::from_int(16);
        // x + y <= lo_x + lo_y + 2w < lo_x + lo_y + 3 * big - 2 * big
        pts.push(Point::new(&lo_x - &big, &lo_y - &big));
        pts.push(Point::new(&lo_x + &(&big * &Rational::from_int(4)), &lo_y - &big));
        pts.push(Point::new(&lo_x - &big, &lo_y + &(&big * &Rational::from_int(4))));
        let total = pts.len();
        let mut cdt = Cdt {
            pts,
            tris: Vec::new(),
            alive: Vec::new(),
            free: Vec::new(),
            edges: EdgeMap::default(),
            vtri: vec![NONE; total],
            last: 0,
            constrained: HashSet::new(),
            n_super: 3,
        };
        let s = n as u32;
        cdt.add(s, s + 1, s + 2);
        cdt
    }

    pub fn input_len(&self) -> usize {
        self.pts.len() - self.n_super as usize
    }

    fn is_super(&self, v: u32) -> bool {
        v as usize >= self.input_len()
    }

    fn add(&mut self, a: u32, b: u32, c: u32) -> u32 {
        debug_assert_eq!(
            orientation(&self.pts[a as usize], &self.pts[b as usize], &self.pts[c as usize]),
            Orientation::Ccw
        );
        let id = if let Some(id) = self.free.pop() {
            self.tris[id as usize] = [a, b, c];
            self.alive[id as usize] = true;
            id
        } else {
            self.tris.push([a, b, c]);
            self.alive.push(true);
            (self.tris.len() - 1) as u32
        };
        self.edges.insert(key(a, b), id);
        self.edges.insert(key(b, c), id);
        self.edges.insert(key(c, a), id);
        self.vtri[a as usize] = id;
        self.vtri[b as usize] = id;
        self.vtri[c as usize] = id;
        self.last = id;
        id
    }

    fn remove(&mut self, t: u32) {
        let [a, b, c] = self.tris[t as usize];
        for k in [key(a, b), key(b, c), key(c, a)] {
            if self.edges.get(&k) == Some(&t) {
                self.edges.remove(&k);
            }
        }
        self.alive[t as usize] = false;
        self.free.push(t);
    }

    fn across(&self, a: u32, b: u32) -> Option<u32> {
        // triangle on the other side of directed edge a -> b
        self.edges.get(&key(b, a)).copied()
    }

    fn p(&self, v: u32) -> &Point {
        &self.pts[v as usize]
    }

    /// Triangle containing `p` (closed), with the index of the edge `p` lies
    /// on, if any.
    fn locate(&self, p: &Point) -> (u32, Option<usize>) {
        let mut t = self.last;
        if !self.alive[t as usize] {
            t = self.alive.iter().position(|&a| a).unwrap() as u32;
        }
        let mut steps = 0usize;
        'walk: loop {
            steps += 1;
            if steps > 4 * self.tris.len() + 64 {
                return self.locate_scan(p);
            }
            let tri = self.tris[t as usize];
            let mut on = None;
            for j in 0..3 {
                let k = (j + steps) % 3;
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                match orientation(self.p(a), self.p(b), p) {
                    Orientation::Cw => {
                        if let Some(n) = self.across(a, b) {
                            t = n;
                            continue 'walk;
                        }
                        return self.locate_scan(p);
                    }
                    Orientation::Collinear => on = Some(k),
                    Orientation::Ccw => {}
                }
            }
            return (t, on);
        }
    }

    fn locate_scan(&self, p: &Point) -> (u32, Option<usize>) {
        for (t, tri) in self.tris.iter().enumerate() {
            if !self.alive[t] {
                continue;
            }
            let mut on = None;
            let mut inside = true;
            for k in 0..3 {
                match orientation(self.p(tri[k]), self.p(tri[(k + 1) % 3]), p) {
                    Orientation::Cw => {
                        inside = false;
                        break;
                    }
                    Orientation::Collinear => on = Some(k),
                    Orientation::Ccw => {}
                }
            }
            if inside {
                return (t as u32, on);
            }
        }
        panic!("point {p:?} outside the enclosing triangle");
    }

    pub fn insert(&mut self, v: u32) {
        let p = self.pts[v as usize].clone();
        let (t, on) = self.locate(&p);
        let tri = self.tris[t as usize];
        let mut stack = Vec::new();
        match on {
            None => {
                let [a, b, c] = tri;
                self.remove(t);
                self.add(a, b, v);
                self.add(b, c, v);
                self.add(c, a, v);
                stack.extend([(a, b, v), (b, c, v), (c, a, v)]);
            }
            Some(k) => {
                let (a, b, c) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
                let other = self.across(a, b).expect("point on the enclosing boundary");
                let d = self.opposite(other, b, a);
                self.remove(t);
                self.remove(other);
                self.add(b, c, v);
                self.add(c, a, v);
                self.add(a, d, v);
                self.add(d, b, v);
                stack.extend([(b, c, v), (c, a, v), (a, d, v), (d, b, v)]);
            }
        }
        self.legalize(stack);
    }

    fn opposite(&self, t: u32, a: u32, b: u32) -> u32 {
        let tri = self.tris[t as usize];
        for k in 0..3 {
            if tri[k] == a && tri[(k + 1) % 3] == b {
                return tri[(k + 2) % 3];
            }
        }
        panic!("edge not in triangle");
    }

    /// Each entry is a triangle (a, b, apex) whose edge a -> b may need a flip.
    fn legalize(&mut self, mut stack: Vec<(u32, u32, u32)>) {
        while let Some((a, b, i)) = stack.pop() {
            let Some(&t) = self.edges.get(&key(a, b)) else { continue };
            if self.tris[t as usize] != [a, b, i]
                && self.tris[t as usize] != [b, i, a]
                && self.tris[t as usize] != [i, a, b]
            {
                continue;
            }
            let Some(u) = self.across(a, b) else { continue };
            if self.constrained.contains(&(a.min(b), a.max(b))) {
                continue;
            }
            let d = self.opposite(u, b, a);
            if incircle(self.p(a), self.p(b), self.p(i), self.p(d)) > 0 {
                self.remove(t);
                self.remove(u);
                self.add(a, d, i);
                self.add(d, b, i);
                stack.push((a, d, i));
                stack.push((d, b, i));
            }
        }
    }

    /// Forces segment a-b into the triangulation.
    pub fn insert_constraint(&mut self, a: u32, b: u32) {
        let ck = (a.min(b), a.max(b));
        if self.edges.contains_key(&key(a, b)) || self.edges.contains_key(&key(b, a)) {
            self.constrained.insert(ck);
            return;
        }
        let (pa, pb) = (self.p(a).clone(), self.p(b).clone());
        // find the triangle at `a` whose opposite edge the segment crosses
        let start = self.vtri[a as usize];
        let start = if self.alive[start as usize] && self.tris[start as usize].contains(&a) {
            start
        } else {
            (0..self.tris.len() as u32)
                .find(|&t| self.alive[t as usize] && self.tris[t as usize].contains(&a))
                .expect("vertex without triangles")
        };
        let mut t = start;
        let (mut x, mut y);
        loop {
            let tri = self.tris[t as usize];
            let k = tri.iter().position(|&v| v == a).unwrap();
            x = tri[(k + 1) % 3];
            y = tri[(k + 2) % 3];
            let ox = orientation(&pa, &pb, self.p(x));
            let oy = orientation(&pa, &pb, self.p(y));
            if ox == Orientation::Cw && oy == Orientation::Ccw {
                break;
            }
            assert!(
                !(ox == Orientation::Collinear && same_dir(&pa, self.p(x), &pb)),
                "constraint passes through a vertex"
            );
            // rotate counterclockwise around a
            t = *self.edges.get(&key(a, y)).expect("open fan around constraint endpoint");
            assert!(t != start, "no triangle crossed by constraint");
        }
        let mut crossed = vec![t];
        let mut left = vec![y];
        let mut right = vec![x];
        loop {
            let n = self.across(x, y).expect("constraint leaves the triangulation");
            crossed.push(n);
            let z = self.opposite(n, y, x);
            if z == b {
                break;
            }
            match orientation(&pa, &pb, self.p(z)) {
                Orientation::Ccw => {
                    left.push(z);
                    y = z;
                }
                Orientation::Cw => {
                    right.push(z);
                    x = z;
                }
                Orientation::Collinear => panic!("constraint passes through a vertex"),
            }
        }
        for t in crossed {
            self.remove(t);
        }
        self.fill(a, b, &left);
        let rev: Vec<u32> = right.into_iter().rev().collect();
        self.fill(b, a, &rev);
        self.constrained.insert(ck);
    }

    /// Triangulates the pseudo-polygon p, q, chain (chain left of p -> q,
    /// ordered from the p side to the q side).
    fn fill(&mut self, p: u32, q: u32, chain: &[u32]) {
        if chain.is_empty() {
            return;
        }
        let mut ci = 0;
        for j in 1..chain.len() {
            if incircle(self.p(p), self.p(q), self.p(chain[ci]), self.p(chain[j])) > 0 {
                ci = j;
            }
        }
        let c = chain[ci];
        self.add(p, q, c);
        self.fill(p, c, &chain[..ci]);
        self.fill(c, q, &chain[ci + 1..]);
    }

    /// Drops triangles outside the constrained loops (and everything touching
    /// the enclosing vertices).
    pub fn remove_exterior(&mut self) {
        let n = self.tris.len();
        let mut parity: Vec<Option<u8>> = vec![None; n];
        let mut queue = VecDeque::new();
        for t in 0..n {
            if self.alive[t] && self.tris[t].iter().any(|&v| self.is_super(v)) {
                parity[t] = Some(0);
                queue.push_back(t as u32);
            }
        }
        // 0-1 BFS: crossing a constrained edge flips parity
        while let Some(t) = queue.pop_front() {
            let tri = self.tris[t as usize];
            let par = parity[t as usize].unwrap();
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                let Some(u) = self.across(a, b) else { continue };
                if parity[u as usize].is_some() {
                    continue;
                }
                if self.constrained.contains(&(a.min(b), a.max(b))) {
                    parity[u as usize] = Some(par ^ 1);
                    queue.push_back(u);
                } else {
                    parity[u as usize] = Some(par);
                    queue.push_front(u);
                }
            }
        }
        for t in 0..n {
            if self.alive[t] && parity[t] != Some(1) {
                self.remove(t as u32);
            }
        }
    }

    /// Lawson flips restricted to unconstrained interior edges.
    pub fn make_delaunay(&mut self) {
        let mut stack: Vec<(u32, u32, u32)> = Vec::new();
        for (t, tri) in self.tris.iter().enumerate() {
            if self.alive[t] {
                for k in 0..3 {
                    stack.push((tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]));
                }
            }
        }
        self.legalize(stack);
    }

    pub fn triangles(&self) -> impl Iterator<Item = [u32; 3]> + '_ {
        self.tris.iter().zip(&self.alive).filter(|(_, &a)| a).map(|(t, _)| *t)
    }
}

fn same_dir(a: &Point, x: &Point, b: &Point) -> bool {
    let d1 = (&x.x - &a.x, &x.y - &a.y);
    let d2 = (&b.x - &a.x, &b.y - &a.y);
    (&d1.0 * &d2.0 + &d1.1 * &d2.1).signum() > 0
}
