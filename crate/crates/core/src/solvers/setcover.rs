//! Collection of contained convex pieces, witness points, and a set cover
//! over them solved greedily and by simulated annealing, with an exact
//! fix-up loop for area the witnesses miss.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::clique::{maximal_cliques, Flow};
use super::cliquecover::{prune_redundant, repair_pieces};
use super::visibility::{build_visibility_graph, MeshIndex};
use super::SolveError;
use crate::geom::{convex_hull, ConvexPolygon, Point};
use crate::instance::{Instance, Solution};
use crate::residual::Residual;
use crate::rng::{derive, seeded, Rng};
use crate::triangulate::{steiner_points, triangulate, SteinerPolicy, TriangulationMesh};

/// Candidate pieces, each inside the region, together covering it.
#[derive(Debug, Clone, Default)]
pub struct Collection {
    pub pieces: Vec<ConvexPolygon>,
}

impl Collection {
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Appends pieces not already present (compared after canonicalizing).
    pub fn extend(&mut self, pieces: impl IntoIterator<Item = ConvexPolygon>) {
        let mut seen: HashSet<ConvexPolygon> = self.pieces.iter().map(|p| p.canonical()).collect();
        for p in pieces {
            if seen.insert(p.canonical()) {
                self.pieces.push(p);
            }
        }
    }
}

fn mesh_for(inst: &Instance, policy: SteinerPolicy) -> TriangulationMesh {
    let extra = steiner_points(&inst.region, policy);
    triangulate(&inst.region, &extra).expect("Steiner points lie in the region")
}

fn triangles(mesh: &TriangulationMesh) -> impl Iterator<Item = ConvexPolygon> + '_ {
    (0..mesh.len()).map(|t| mesh.triangle_polygon(t))
}

/// Repaired hulls of maximal cliques of the visibility graph, then every
/// triangle. Each root vertex of the enumeration gets an equal share of
/// `cap` so that the pieces spread over the whole region.
pub fn gen_collection_cliques(inst: &Instance, policy: SteinerPolicy, cap: usize) -> Collection {
    let mesh = mesh_for(inst, policy);
    let graph = build_visibility_graph(&mesh);
    let share = cap.div_ceil(mesh.len().max(1)).max(1);
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    let (mut root, mut taken) = (usize::MAX, 0);
    maximal_cliques(&graph, |r, c| {
        if r != root {
            (root, taken) = (r, 0);
        }
        cliques.push(c.to_vec());
        taken += 1;
        if cliques.len() >= cap {
            Flow::Stop
        } else if taken >= share {
            Flow::NextRoot
        } else {
            Flow::Continue
        }
    });
    let pieces: Vec<Vec<ConvexPolygon>> =
        cliques.par_iter().map(|q| repair_pieces(std::slice::from_ref(q), &mesh)).collect();
    let mut coll = Collection::default();
    coll.extend(pieces.into_iter().flatten().take(cap));
    coll.extend(triangles(&mesh));
    coll
}

/// Consecutive rejected candidates that end one bloat run.
pub const BLOAT_FAILURES: usize = 30;
const BLOAT_BATCH: usize = 16;

/// Candidate points sorted by x for window queries.
struct Candidates {
    pts: Vec<(f64, Point)>,
}

impl Candidates {
    fn new(mut pts: Vec<Point>) -> Self {
        pts.sort();
        pts.dedup();
        Candidates { pts: pts.into_iter().map(|p| (p.to_f64().0, p)).collect() }
    }

    /// Points with x in `[lo, hi]` (a superset of the exact window).
    fn window(&self, lo: f64, hi: f64) -> &[(f64, Point)] {
        let a = self.pts.partition_point(|(x, _)| *x < lo);
        let b = self.pts.partition_point(|(x, _)| *x <= hi);
        &self.pts[a..b]
    }
}

/// Grows a piece from triangle `start` by adding candidate points while the
/// hull stays in the region. Half the draws are from near the piece.
fn bloat(
    idx: &MeshIndex,
    cands: &Candidates,
    extra: &[Point],
    start: usize,
    fails: usize,
    rng: &mut Rng,
) -> ConvexPolygon {
    let mut piece = idx.hull_of(&[start]);
    let mut miss = 0;
    while miss < fails {
        let (lo, hi) = {
            let f: Vec<(f64, f64)> = piece.vertices().iter().map(|p| p.to_f64()).collect();
            let lx = f.iter().map(|p| p.0).fold(f64::MAX, f64::min);
            let hx = f.iter().map(|p| p.0).fold(f64::MIN, f64::max);
            let ly = f.iter().map(|p| p.1).fold(f64::MAX, f64::min);
            let hy = f.iter().map(|p| p.1).fold(f64::MIN, f64::max);
            let r = (hx - lx).max(hy - ly);
            ((lx - r, ly - r), (hx + r, hy + r))
        };
        let near: Vec<&Point> = if rng.random_range(0..2) == 0 {
            cands
                .window(lo.0, hi.0)
                .iter()
                .filter(|(_, p)| (lo.1..=hi.1).contains(&p.to_f64().1))
                .map(|(_, p)| p)
                .collect()
        } else {
            Vec::new()
        };
        let total = cands.pts.len() + extra.len();
        let cand = if !near.is_empty() {
            near[rng.random_range(0..near.len())]
        } else {
            let k = rng.random_range(0..total);
            if k < cands.pts.len() {
                &cands.pts[k].1
            } else {
                &extra[k - cands.pts.len()]
            }
        };
        if piece.contains(cand) {
            miss += 1;
            continue;
        }
        let mut pts = piece.vertices().to_vec();
        pts.push(cand.clone());
        let hull = convex_hull(&pts).expect("grows a nondegenerate piece");
        if idx.contains(&hull, start) {
            piece = hull;
            miss = 0;
        } else {
            miss += 1;
        }
    }
    piece
}

/// `count` bloated pieces, then every triangle. Seed triangles favor area
/// not yet covered; runs proceed in batches grown in parallel.
pub fn gen_collection_bloat(inst: &Instance, count: usize, seed: u64) -> Collection {
    gen_bloat_with(inst, count, BLOAT_FAILURES, seed)
}

pub(crate) fn gen_bloat_with(inst: &Instance, count: usize, fails: usize, seed: u64) -> Collection {
    let mesh = mesh_for(inst, SteinerPolicy::None);
    let idx = MeshIndex::new(&mesh);
    let mut pool: Vec<Point> = inst.region.vertices().cloned().collect();
    pool.extend(steiner_points(&inst.region, SteinerPolicy::EdgeExtensions));
    let cands = Candidates::new(pool);
    let mut rng = seeded(seed);
    let mut residual = Residual::new(&inst.region);
    let mut covered = vec![false; mesh.len()];
    let mut out = Vec::with_capacity(count);
    let mut run = 0u64;
    while out.len() < count {
        let n = BLOAT_BATCH.min(count - out.len());
        let open: Vec<usize> = (0..mesh.len()).filter(|&t| !covered[t]).collect();
        let jobs: Vec<(usize, Vec<Point>, u64)> = (0..n)
            .map(|_| {
                let t = if !open.is_empty() && rng.random_range(0..4) != 0 {
                    open[rng.random_range(0..open.len())]
                } else {
                    rng.random_range(0..mesh.len())
                };
                // a few points of the uncovered area join the candidates
                let extra: Vec<Point> = if residual.is_empty() {
                    Vec::new()
                } else {
                    (0..8)
                        .map(|_| {
                            let c = &residual.cells()[rng.random_range(0..residual.cells().len())];
                            c.vertices()[rng.random_range(0..c.len())].clone()
                        })
                        .collect()
                };
                run += 1;
                (t, extra, derive(seed, run))
            })
            .collect();
        let grown: Vec<ConvexPolygon> = jobs
            .par_iter()
            .map(|(t, extra, s)| bloat(&idx, &cands, extra, *t, fails, &mut seeded(*s)))
            .collect();
        for p in grown {
            residual.subtract(&p);
            for (t, c) in covered.iter_mut().enumerate() {
                if !*c && mesh.triangle_points(t).iter().all(|q| p.contains(q)) {
                    *c = true;
                }
            }
            out.push(p);
        }
    }
    let mut coll = Collection::default();
    coll.extend(out);
    coll.extend(triangles(&mesh));
    coll
}

/// Centroids of the triangles of the region, or, given a residual, of a fan
/// triangulation of each residual cell.
pub fn place_witnesses(inst: &Instance, residual: Option<&Residual>) -> Vec<Point> {
    match residual {
        None => {
            let mesh = triangulate(&inst.region, &[]).expect("no extra points");
            (0..mesh.len()).map(|t| mesh.centroid(t)).collect()
        }
        Some(r) => r
            .cells()
            .iter()
            .flat_map(|c| {
                let v = c.vertices();
                (1..v.len() - 1).filter_map(move |i| {
                    convex_hull(&[v[0].clone(), v[i].clone(), v[i + 1].clone()]).ok().map(|t| t.centroid())
                })
            })
            .collect(),
    }
}

/// Witness points and, per piece, the sorted witnesses it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetCoverInstance {
    pub witnesses: Vec<Point>,
    pub covers: Vec<Vec<usize>>,
}

impl SetCoverInstance {
    pub fn new(pieces: &[ConvexPolygon], witnesses: Vec<Point>) -> Self {
        let mut sc = SetCoverInstance { witnesses: Vec::new(), covers: vec![Vec::new(); pieces.len()] };
        sc.add_witnesses(pieces, witnesses);
        sc
    }

    pub fn from_sets(witnesses: usize, covers: Vec<Vec<usize>>) -> Self {
        SetCoverInstance { witnesses: (0..witnesses as i64).map(|i| Point::int(i, 0)).collect(), covers }
    }

    pub fn add_witnesses(&mut self, pieces: &[ConvexPolygon], witnesses: Vec<Point>) {
        let base = self.witnesses.len();
        let mut by_x: Vec<(f64, f64, usize)> = witnesses
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let (x, y) = w.to_f64();
                (x, y, base + i)
            })
            .collect();
        by_x.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.2.cmp(&b.2)));
        self.witnesses.extend(witnesses);
        let found: Vec<Vec<usize>> = pieces
            .par_iter()
            .map(|p| {
                let f: Vec<(f64, f64)> = p.vertices().iter().map(|q| q.to_f64()).collect();
                let lx = f.iter().map(|q| q.0).fold(f64::MAX, f64::min);
                let hx = f.iter().map(|q| q.0).fold(f64::MIN, f64::max);
                let ly = f.iter().map(|q| q.1).fold(f64::MAX, f64::min);
                let hy = f.iter().map(|q| q.1).fold(f64::MIN, f64::max);
                let pad = 1e-9 * (hx - lx + hy - ly + 1.0);
                let a = by_x.partition_point(|w| w.0 < lx - pad);
                let b = by_x.partition_point(|w| w.0 <= hx + pad);
                let mut hit: Vec<usize> = by_x[a..b]
                    .iter()
                    .filter(|w| w.1 >= ly - pad && w.1 <= hy + pad && p.contains(&self.witnesses[w.2]))
                    .map(|w| w.2)
                    .collect();
                hit.sort_unstable();
                hit
            })
            .collect();
        for (c, h) in self.covers.iter_mut().zip(found) {
            c.extend(h);
        }
    }

    fn holders(&self) -> Vec<Vec<usize>> {
        let mut h = vec![Vec::new(); self.witnesses.len()];
        for (p, ws) in self.covers.iter().enumerate() {
            for &w in ws {
                h[w].push(p);
            }
        }
        h
    }

    pub fn is_cover(&self, selected: &[usize]) -> bool {
        let mut hit = vec![false; self.witnesses.len()];
        for &p in selected {
            for &w in &self.covers[p] {
                hit[w] = true;
            }
        }
        hit.iter().all(|&h| h)
    }
}

/// Completes `selected` to a cover by repeatedly adding the piece covering
/// the most uncovered witnesses (lowest index on ties). Result sorted.
pub fn greedy_complete(sc: &SetCoverInstance, selected: &[usize]) -> Result<Vec<usize>, SolveError> {
    let mut done = vec![false; sc.witnesses.len()];
    let mut sel: Vec<usize> = selected.to_vec();
    for &p in selected {
        for &w in &sc.covers[p] {
            done[w] = true;
        }
    }
    let mut held = vec![false; sc.witnesses.len()];
    for c in &sc.covers {
        for &w in c {
            held[w] = true;
        }
    }
    if let Some(w) = (0..sc.witnesses.len()).find(|&w| !held[w]) {
        return Err(SolveError::InfeasibleSetCover { witness: w });
    }
    let gain = |p: usize, done: &[bool]| sc.covers[p].iter().filter(|&&w| !done[w]).count();
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> =
        (0..sc.covers.len()).map(|p| (gain(p, &done), Reverse(p))).filter(|e| e.0 > 0).collect();
    while let Some((g, Reverse(p))) = heap.pop() {
        let now = gain(p, &done);
        if now == 0 {
            continue;
        }
        if now < g && heap.peek().is_some_and(|top| *top > (now, Reverse(p))) {
            heap.push((now, Reverse(p)));
            continue;
        }
        sel.push(p);
        for &w in &sc.covers[p] {
            done[w] = true;
        }
    }
    sel.sort_unstable();
    sel.dedup();
    Ok(sel)
}

pub fn greedy_set_cover(sc: &SetCoverInstance) -> Result<Vec<usize>, SolveError> {
    greedy_complete(sc, &[])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnnealSchedule {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
}

impl AnnealSchedule {
    /// Defaults for a collection of `n` pieces.
    pub fn for_collection(n: usize) -> Self {
        AnnealSchedule { t_start: 2.0, t_end: 0.01, steps: 50 * n }
    }
}

/// Selection plus per-witness cover counts.
struct AnnealState {
    selected: Vec<bool>,
    size: usize,
    count: Vec<u32>,
}

impl AnnealState {
    fn add(&mut self, sc: &SetCoverInstance, p: usize) {
        self.selected[p] = true;
        self.size += 1;
        for &w in &sc.covers[p] {
            self.count[w] += 1;
        }
    }

    /// Returns the witnesses left uncovered.
    fn remove(&mut self, sc: &SetCoverInstance, p: usize) -> Vec<usize> {
        self.selected[p] = false;
        self.size -= 1;
        let mut open = Vec::new();
        for &w in &sc.covers[p] {
            self.count[w] -= 1;
            if self.count[w] == 0 {
                open.push(w);
            }
        }
        open
    }
}

/// Simulated annealing over covers. A move drops a random selected piece and
/// greedily re-covers what it alone covered (random choice among equally
/// good pieces); moves are accepted by the Metropolis rule on the change in
/// size, with geometric cooling. Returns the smallest cover seen, sorted.
pub fn anneal_set_cover(sc: &SetCoverInstance, init: &[usize], schedule: AnnealSchedule, seed: u64) -> Vec<usize> {
    let mut best: Vec<usize> = init.to_vec();
    best.sort_unstable();
    best.dedup();
    if schedule.steps == 0 || best.is_empty() {
        return best;
    }
    let holders = sc.holders();
    let mut rng = seeded(seed);
    let mut st = AnnealState { selected: vec![false; sc.covers.len()], size: 0, count: vec![0; sc.witnesses.len()] };
    for &p in &best {
        st.add(sc, p);
    }
    let mut list: Vec<usize> = best.clone();
    let ratio = (schedule.t_end / schedule.t_start).max(f64::MIN_POSITIVE);
    for step in 0..schedule.steps {
        let temp = schedule.t_start * ratio.powf(step as f64 / schedule.steps as f64);
        let k = rng.random_range(0..list.len());
        let drop = list[k];
        let mut open: HashSet<usize> = st.remove(sc, drop).into_iter().collect();
        let mut added = Vec::new();
        while !open.is_empty() {
            let mut gain: HashMap<usize, usize> = HashMap::new();
            for &w in &open {
                for &p in &holders[w] {
                    *gain.entry(p).or_default() += 1;
                }
            }
            let top = *gain.values().max().unwrap();
            let mut ties: Vec<usize> = gain.into_iter().filter(|e| e.1 == top).map(|e| e.0).collect();
            ties.sort_unstable();
            let p = ties[rng.random_range(0..ties.len())];
            for &w in &sc.covers[p] {
                open.remove(&w);
            }
            st.add(sc, p);
            added.push(p);
        }
        let delta = added.len() as f64 - 1.0;
        let accept = delta <= 0.0 || rng.random::<f64>() < (-delta / temp).exp();
        if accept {
            list.swap_remove(k);
            list.extend(added);
            list.sort_unstable();
            list.dedup();
            if list.len() < best.len() {
                best = list.clone();
            }
        } else {
            for p in added {
                st.remove(sc, p);
            }
            st.add(sc, drop);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CollectionKind {
    Cliques,
    Bloat,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetCoverConfig {
    pub generator: CollectionKind,
    /// Clique pieces; defaults to three per triangle.
    pub cap: Option<usize>,
    /// Bloat runs; defaults to one per triangle.
    pub bloat_count: Option<usize>,
    /// Annealing steps; defaults to fifty per collection piece.
    pub steps: Option<usize>,
    pub t_start: f64,
    pub t_end: f64,
    /// Independent annealing chains; the smallest result wins.
    pub chains: usize,
    pub policy: SteinerPolicy,
    pub seed: u64,
}

impl SetCoverConfig {
    pub fn new(seed: u64) -> Self {
        SetCoverConfig {
            generator: CollectionKind::Both,
            cap: None,
            bloat_count: None,
            steps: None,
            t_start: 2.0,
            t_end: 0.01,
            chains: 1,
            policy: SteinerPolicy::None,
            seed,
        }
    }
}

fn anneal_chains(
    sc: &SetCoverInstance,
    init: &[usize],
    schedule: AnnealSchedule,
    seed: u64,
    chains: usize,
) -> Vec<usize> {
    let runs: Vec<Vec<usize>> = (0..chains.max(1) as u64)
        .into_par_iter()
        .map(|c| anneal_set_cover(sc, init, schedule, derive(seed, c)))
        .collect();
    runs.into_iter().enumerate().min_by_key(|(i, r)| (r.len(), *i)).unwrap().1
}

pub fn build_collection(inst: &Instance, cfg: &SetCoverConfig) -> Collection {
    let tris = triangulate(&inst.region, &[]).expect("no extra points").len();
    let mut coll = Collection::default();
    if cfg.generator != CollectionKind::Bloat {
        let cap = cfg.cap.unwrap_or(3 * tris).max(tris);
        coll.extend(gen_collection_cliques(inst, cfg.policy, cap).pieces);
    }
    if cfg.generator != CollectionKind::Cliques {
        let count = cfg.bloat_count.unwrap_or(tris).max(1);
        coll.extend(gen_collection_bloat(inst, count, derive(cfg.seed, u64::MAX)).pieces);
    }
    coll
}

/// Fix-up rounds that end with a short anneal.
pub const FIXUP_ANNEAL_ROUNDS: u64 = 8;

pub fn solve_setcover(inst: &Instance, cfg: &SetCoverConfig) -> Solution {
    let coll = build_collection(inst, cfg);
    let mut sc = SetCoverInstance::new(&coll.pieces, place_witnesses(inst, None));
    let steps = cfg.steps.unwrap_or(50 * coll.len());
    let schedule = AnnealSchedule { t_start: cfg.t_start, t_end: cfg.t_end, steps };
    let init = greedy_set_cover(&sc).expect("triangles cover every witness");
    let mut sel = anneal_chains(&sc, &init, schedule, cfg.seed, cfg.chains);
    for round in 1u64.. {
        let mut residual = Residual::new(&inst.region);
        for &p in &sel {
            residual.subtract(&coll.pieces[p]);
        }
        if residual.is_empty() {
            break;
        }
        sc.add_witnesses(&coll.pieces, place_witnesses(inst, Some(&residual)));
        sel = greedy_complete(&sc, &sel).expect("triangles cover every witness");
        // later rounds only complete greedily, so the loop settles quickly
        let short = AnnealSchedule { steps: if round <= FIXUP_ANNEAL_ROUNDS { steps / 10 } else { 0 }, ..schedule };
        sel = anneal_chains(&sc, &sel, short, derive(cfg.seed, round << 32), cfg.chains);
    }
    let pieces = sel.iter().map(|&p| coll.pieces[p].clone()).collect();
    let pieces = prune_redundant(pieces, &inst.region).expect("fix-up loop leaves no residual");
    Solution::from_pieces(inst.name.clone(), pieces)
}
