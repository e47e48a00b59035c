//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use rand::Rng as _;
use rayon::prelude::*;

use convex_cover::generators::{gen_ccheese, gen_cheese, gen_maze, CheeseParams, MazeParams};
use convex_cover::geom::{
    convex_hull, is_convex, piece_contained, point_in_region, region_difference, ConvexPolygon, Location, Point,
    PolygonWithHoles, SimplePolygon,
};
use convex_cover::harness::{build_leaderboard, read_instance_dir, score_instance};
use convex_cover::instance::{serialize_instance, serialize_solution, verify_solution, Instance, Solution};
use convex_cover::rng::{derive, seeded};
use convex_cover::solvers::{
    anneal_set_cover, clique_cover, greedy_set_cover, solve_cliquecover, solve_greedy_merge, solve_greedy_restarts,
    solve_setcover, AnnealSchedule, SetCoverConfig, SetCoverInstance, VisibilityGraph,
};
use convex_cover::triangulate::{steiner_points, triangulate, SteinerPolicy};

const SEED: u64 = 20240601;

fn suite_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../bench/suite")
}

fn poly(pts: &[(i64, i64)]) -> SimplePolygon {
    SimplePolygon::new(pts.iter().map(|&(x, y)| Point::int(x, y)).collect()).unwrap()
}

fn region(pts: &[(i64, i64)]) -> PolygonWithHoles {
    PolygonWithHoles::from_outer(poly(pts))
}

/// Small random instance of one of the three families, at most ~200 vertices.
fn small_instance(k: u64) -> Instance {
    let seed = derive(SEED, k);
    let mut rng = seeded(seed);
    match k % 3 {
        0 => gen_cheese(&CheeseParams::new(rng.random_range(3..=35), seed)).unwrap(),
        1 => gen_ccheese(&CheeseParams::new(rng.random_range(3..=35), seed)).unwrap(),
        _ => gen_maze(&MazeParams::new(rng.random_range(2..=7), rng.random_range(2..=6), seed)).unwrap(),
    }
}

fn greedy(inst: &Instance, seed: u64) -> Solution {
    solve_greedy_restarts(inst, seed, 8)
}

fn cliquecover(inst: &Instance, seed: u64) -> Solution {
    solve_cliquecover(inst, SteinerPolicy::None, seed)
}

fn setcover(inst: &Instance, seed: u64) -> Solution {
    solve_setcover(inst, &SetCoverConfig::new(seed))
}

type Solver = fn(&Instance, u64) -> Solution;
const SOLVERS: [(&str, Solver); 3] = [("greedy", greedy), ("cliquecover", cliquecover), ("setcover", setcover)];

fn valid(inst: &Instance, sol: &Solution) -> bool {
    verify_solution(inst, sol).is_ok_and(|r| r.is_valid())
}

type Outcome = Result<String, String>;

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within(t: Instant, limit: Duration, r: Outcome) -> Outcome {
    let e = t.elapsed();
    match r {
        Ok(m) if e <= limit => Ok(format!("{m}; {:.2}s", e.as_secs_f64())),
        Ok(m) => Err(format!("{m}; {:.2}s exceeds {}s", e.as_secs_f64(), limit.as_secs())),
        Err(m) => Err(format!("{m}; {:.2}s", e.as_secs_f64())),
    }
}

// ---------------------------------------------------------------- 1

fn big(s: &str) -> BigRational {
    BigRational::from_str(s).unwrap()
}

/// `k` vertical strips of the `w x w` square.
fn strips(name: &str, w: i64, k: i64) -> Solution {
    let pieces = (0..k)
        .map(|i| {
            let (a, b) = (w * i / k, w * (i + 1) / k);
            vec![Point::int(a, 0), Point::int(b, 0), Point::int(b, w), Point::int(a, w)]
        })
        .collect();
    Solution { instance_name: name.into(), pieces }
}

fn scoring() -> Outcome {
    let anchors = [
        (score_instance(7, Some(7)).unwrap().to_string(), "1"),
        (score_instance(7, Some(14)).unwrap().to_string(), "1/4"),
        (score_instance(7, None).unwrap().to_string(), "0"),
    ];
    if let Some((got, want)) = anchors.iter().find(|(g, w)| g != w) {
        return Err(format!("anchor {want} computed as {got}"));
    }

    let w = 60;
    let insts: Vec<Instance> = ["a", "b", "c", "d"]
        .iter()
        .map(|n| Instance::new(*n, region(&[(0, 0), (w, 0), (w, w), (0, w)])))
        .collect();
    // None: no submission; negative: an invalid one (a strip missing)
    let plan: [(&str, [Option<i64>; 4]); 3] = [
        ("red", [Some(2), Some(3), Some(5), None]),
        ("green", [Some(1), Some(6), Some(-4), Some(4)]),
        ("blue", [Some(3), Some(3), Some(2), Some(-2)]),
    ];
    let mut subs: BTreeMap<String, Vec<Solution>> = BTreeMap::new();
    for (team, counts) in &plan {
        let sols = insts
            .iter()
            .zip(counts)
            .filter_map(|(i, c)| {
                c.map(|c| {
                    let mut s = strips(&i.name, w, c.abs());
                    if c < 0 {
                        s.pieces.pop();
                    }
                    s
                })
            })
            .collect();
        subs.insert(team.to_string(), sols);
    }
    let table = build_leaderboard(&insts, &subs).map_err(|e| e.to_string())?;

    // independent recomputation
    let mut best: BTreeMap<usize, i64> = BTreeMap::new();
    for (_, counts) in &plan {
        for (i, c) in counts.iter().enumerate() {
            if let Some(c) = c.filter(|&c| c > 0) {
                let b = best.entry(i).or_insert(c);
                *b = (*b).min(c);
            }
        }
    }
    let mut want: Vec<(String, BigRational)> = plan
        .iter()
        .map(|(team, counts)| {
            let total = counts
                .iter()
                .enumerate()
                .filter_map(|(i, c)| c.filter(|&c| c > 0).map(|c| big(&format!("{}/{}", best[&i].pow(2), c * c))))
                .fold(big("0"), |a, b| a + b);
            (team.to_string(), total)
        })
        .collect();
    want.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let got: Vec<(String, BigRational)> =
        table.teams.iter().map(|t| (t.name.clone(), big(&t.total.to_string()))).collect();
    check(
        got == want && table.excluded.len() == 2,
        format!(
            "anchors 1, 1/4, 0 exact; leaderboard {:?}",
            got.iter().map(|(n, t)| format!("{n}={t}")).collect::<Vec<_>>()
        ),
    )
}

// ---------------------------------------------------------------- 2

fn verifier() -> Outcome {
    let bad: Vec<String> = (0..100u64)
        .into_par_iter()
        .filter_map(|k| {
            let inst = small_instance(k);
            let mesh = triangulate(&inst.region, &[]).unwrap();
            let mut pieces: Vec<ConvexPolygon> = (0..mesh.len()).map(|t| mesh.triangle_polygon(t)).collect();
            if !valid(&inst, &Solution::from_pieces(&inst.name, pieces.clone())) {
                return Some(format!("{}: triangle cover rejected", inst.name));
            }
            // triangles have disjoint interiors, so each one is needed
            let gone = seeded(derive(SEED ^ 2, k)).random_range(0..pieces.len());
            pieces.remove(gone);
            let report = verify_solution(&inst, &Solution::from_pieces(&inst.name, pieces.clone())).unwrap();
            let Some(w) = report.first_uncovered().filter(|_| !report.is_valid()) else {
                return Some(format!("{}: deletion not detected", inst.name));
            };
            let recheck = point_in_region(w, &inst.region) == Location::Interior
                && pieces.iter().all(|p| p.classify(w) == Location::Outside);
            (!recheck).then(|| format!("{}: certificate {w:?} is covered", inst.name))
        })
        .collect();
    check(bad.is_empty(), format!("100 instances, {} failures {:?}", bad.len(), bad.first()))
}

// ---------------------------------------------------------------- 3

const GRID: usize = 1024;

struct Raster {
    lo: (f64, f64),
    cw: f64,
    ch: f64,
    /// Cells within one cell width of a boundary.
    near: Vec<bool>,
}

type Loops = Vec<Vec<(f64, f64)>>;

fn loops_of(r: &PolygonWithHoles) -> Loops {
    r.loops().map(|l| l.vertices().iter().map(|p| p.to_f64()).collect()).collect()
}

impl Raster {
    fn new(lo: (f64, f64), hi: (f64, f64), boundaries: &[&Loops]) -> Self {
        let (cw, ch) = ((hi.0 - lo.0) / GRID as f64, (hi.1 - lo.1) / GRID as f64);
        let mut r = Raster { lo, cw, ch, near: vec![false; GRID * GRID] };
        let h = cw.max(ch);
        for ls in boundaries {
            for l in ls.iter() {
                for i in 0..l.len() {
                    r.mark(l[i], l[(i + 1) % l.len()], h);
                }
            }
        }
        r
    }

    fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (self.lo.0 + (i as f64 + 0.5) * self.cw, self.lo.1 + (j as f64 + 0.5) * self.ch)
    }

    fn mark(&mut self, a: (f64, f64), b: (f64, f64), h: f64) {
        let (dx, dy) = (b.0 - a.0, b.1 - a.1);
        let len2 = dx * dx + dy * dy;
        let steps = ((len2.sqrt() / (h / 2.0)).ceil() as usize).max(1);
        let (ri, rj) = ((h / self.cw).ceil() as isize + 2, (h / self.ch).ceil() as isize + 2);
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            let (px, py) = (a.0 + t * dx, a.1 + t * dy);
            let ci = ((px - self.lo.0) / self.cw).floor() as isize;
            let cj = ((py - self.lo.1) / self.ch).floor() as isize;
            for i in (ci - ri).max(0)..=(ci + ri).min(GRID as isize - 1) {
                for j in (cj - rj).max(0)..=(cj + rj).min(GRID as isize - 1) {
                    let (i, j) = (i as usize, j as usize);
                    if self.near[j * GRID + i] {
                        continue;
                    }
                    let c = self.center(i, j);
                    let u =
                        if len2 == 0.0 { 0.0 } else { (((c.0 - a.0) * dx + (c.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
                    let (ex, ey) = (a.0 + u * dx - c.0, a.1 + u * dy - c.1);
                    if ex * ex + ey * ey <= h * h {
                        self.near[j * GRID + i] = true;
                    }
                }
            }
        }
    }

    /// Inside flags of row `j` for an even-odd shape made of `loops`.
    fn row(&self, loops: &Loops, j: usize) -> Vec<bool> {
        let y = self.center(0, j).1;
        let mut xs = Vec::new();
        for l in loops {
            for i in 0..l.len() {
                let (a, b) = (l[i], l[(i + 1) % l.len()]);
                if (a.1 > y) != (b.1 > y) {
                    xs.push(a.0 + (y - a.1) * (b.0 - a.0) / (b.1 - a.1));
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        let mut out = Vec::with_capacity(GRID);
        let mut k = 0;
        for i in 0..GRID {
            let x = self.center(i, j).0;
            while k < xs.len() && xs[k] < x {
                k += 1;
            }
            out.push(k % 2 == 1);
        }
        out
    }
}

/// Cells where `region_difference` disagrees with the raster, and cells in
/// the piece but outside the region, over the window `lo..hi` and skipping
/// cells near a boundary.
fn raster_window(rl: &Loops, pl: &Loops, diff: &[Loops], lo: (f64, f64), hi: (f64, f64)) -> (usize, usize) {
    let ras = Raster::new(lo, hi, &[rl, pl]);
    let (mut wrong, mut escaping) = (0, 0);
    for j in 0..GRID {
        let in_r = ras.row(rl, j);
        let in_p = ras.row(pl, j);
        let rows: Vec<Vec<bool>> = diff.iter().map(|d| ras.row(d, j)).collect();
        for i in 0..GRID {
            if ras.near[j * GRID + i] {
                continue;
            }
            let want = in_r[i] && !in_p[i];
            let got = rows.iter().any(|r| r[i]);
            wrong += (want != got) as usize;
            escaping += (in_p[i] && !in_r[i]) as usize;
        }
    }
    (wrong, escaping)
}

/// Raster comparison over two windows: the region's bounding box and the
/// piece's, so that thin parts of small pieces are resolved too.
fn raster_compare(reg: &PolygonWithHoles, piece: &ConvexPolygon) -> (usize, bool, usize) {
    let rl = loops_of(reg);
    let pl: Loops = vec![piece.vertices().iter().map(|p| p.to_f64()).collect()];
    let diff: Vec<Loops> = region_difference(reg, piece).iter().map(loops_of).collect();
    let (lo, hi) = reg.bbox();
    let (plo, phi) = piece.bbox();
    let (plo, phi) = (plo.to_f64(), phi.to_f64());
    let lo = (lo.to_f64().0.min(plo.0), lo.to_f64().1.min(plo.1));
    let hi = (hi.to_f64().0.max(phi.0), hi.to_f64().1.max(phi.1));
    let (w1, e1) = raster_window(&rl, &pl, &diff, lo, hi);
    let (w2, e2) = raster_window(&rl, &pl, &diff, plo, phi);
    (w1 + w2, piece_contained(piece, reg), e1 + e2)
}

fn random_piece(inst: &Instance, k: u64) -> ConvexPolygon {
    let mut rng = seeded(derive(SEED ^ 3, k));
    let (lo, hi) = inst.region.bbox();
    let (lo, hi) = (lo.to_f64(), hi.to_f64());
    let span = (hi.0 - lo.0).max(hi.1 - lo.1);
    let pick = |rng: &mut convex_cover::rng::Rng, c: (f64, f64), r: f64| {
        Point::int((c.0 + rng.random_range(-r..=r)).round() as i64, (c.1 + rng.random_range(-r..=r)).round() as i64)
    };
    match k % 3 {
        // a piece of a greedy cover, always inside
        0 => {
            let sol = solve_greedy_merge(inst, k);
            let p = &sol.pieces[rng.random_range(0..sol.pieces.len())];
            ConvexPolygon::new(p.clone()).unwrap()
        }
        // a small hull around a mesh triangle
        1 => {
            let mesh = triangulate(&inst.region, &[]).unwrap();
            let c = mesh.centroid(rng.random_range(0..mesh.len())).to_f64();
            loop {
                let pts: Vec<Point> = (0..rng.random_range(3..=6)).map(|_| pick(&mut rng, c, span / 10.0)).collect();
                if let Ok(h) = convex_hull(&pts) {
                    return h;
                }
            }
        }
        // a hull of points spread over the bounding box
        _ => loop {
            let c = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
            let pts: Vec<Point> = (0..rng.random_range(3..=6)).map(|_| pick(&mut rng, c, span / 2.0)).collect();
            if let Ok(h) = convex_hull(&pts) {
                return h;
            }
        },
    }
}

fn raster_oracle() -> Outcome {
    let res: Vec<(u64, usize, bool, usize)> = (0..100u64)
        .into_par_iter()
        .map(|k| {
            let inst = small_instance(1000 + k);
            let piece = random_piece(&inst, k);
            let (wrong, contained, escaping) = raster_compare(&inst.region, &piece);
            (k, wrong, contained, escaping)
        })
        .collect();
    let diff_bad: usize = res.iter().map(|r| r.1).sum();
    let cont_bad: Vec<u64> = res.iter().filter(|r| r.2 != (r.3 == 0)).map(|r| r.0).collect();
    let inside = res.iter().filter(|r| r.2).count();
    check(
        diff_bad == 0 && cont_bad.is_empty(),
        format!(
            "100 pairs ({inside} contained), difference cells wrong {diff_bad}, containment disagreements {} {:?}",
            cont_bad.len(),
            cont_bad
        ),
    )
}

// ---------------------------------------------------------------- 4

fn random_graph(k: u64) -> VisibilityGraph {
    let mut rng = seeded(derive(SEED ^ 4, k));
    let n = rng.random_range(1..=7usize);
    let p = rng.random_range(0.1..0.9);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    VisibilityGraph::from_edges(n, edges)
}

/// Minimum number of cliques partitioning the vertices, over all set
/// partitions (restricted growth strings).
fn min_clique_partition(g: &VisibilityGraph) -> usize {
    fn go(g: &VisibilityGraph, v: usize, blocks: &mut Vec<Vec<usize>>, best: &mut usize) {
        if blocks.len() >= *best {
            return;
        }
        if v == g.len() {
            *best = blocks.len();
            return;
        }
        for b in 0..blocks.len() {
            if blocks[b].iter().all(|&u| g.has_edge(u, v)) {
                blocks[b].push(v);
                go(g, v + 1, blocks, best);
                blocks[b].pop();
            }
        }
        blocks.push(vec![v]);
        go(g, v + 1, blocks, best);
        blocks.pop();
    }
    let mut best = g.len() + 1;
    go(g, 0, &mut Vec::new(), &mut best);
    best.min(g.len())
}

fn random_set_cover(k: u64) -> SetCoverInstance {
    let mut rng = seeded(derive(SEED ^ 5, k));
    let w = rng.random_range(1..=12usize);
    let m = rng.random_range(1..=10usize);
    let mut covers: Vec<Vec<usize>> = (0..m).map(|_| (0..w).filter(|_| rng.random_bool(0.3)).collect()).collect();
    // every witness has some holder
    for x in 0..w {
        if !covers.iter().any(|c| c.contains(&x)) {
            let s = rng.random_range(0..m);
            covers[s].push(x);
            covers[s].sort_unstable();
        }
    }
    SetCoverInstance::from_sets(w, covers)
}

fn brute_set_cover(sc: &SetCoverInstance) -> usize {
    let m = sc.covers.len();
    (0u32..1 << m)
        .filter(|mask| {
            let mut hit = vec![false; sc.witnesses.len()];
            for s in (0..m).filter(|s| mask >> s & 1 == 1) {
                for &x in &sc.covers[s] {
                    hit[x] = true;
                }
            }
            hit.iter().all(|&h| h)
        })
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

fn combinatorial() -> Outcome {
    let mut worst = 0i64;
    let mut cc_bad = 0;
    for k in 0..200 {
        let g = random_graph(k);
        let cover = clique_cover(&g, k);
        let mut hit = vec![false; g.len()];
        let ok = cover.cliques.iter().all(|c| g.is_clique(c));
        cover.cliques.iter().flatten().for_each(|&v| hit[v] = true);
        let gap = cover.cliques.len() as i64 - min_clique_partition(&g) as i64;
        worst = worst.max(gap);
        cc_bad += (!ok || !hit.iter().all(|&h| h) || gap > 2) as usize;
    }
    let mut sc_bad = 0;
    let mut strict = 0;
    for k in 0..100 {
        let sc = random_set_cover(k);
        let opt = brute_set_cover(&sc);
        let g = greedy_set_cover(&sc).unwrap();
        let a = anneal_set_cover(&sc, &g, AnnealSchedule { t_start: 2.0, t_end: 0.01, steps: 2000 }, k);
        sc_bad +=
            (!sc.is_cover(&g) || !sc.is_cover(&a) || g.len() < opt || a.len() > g.len() || a.len() < opt) as usize;
        strict += (a.len() < g.len()) as usize;
    }
    check(
        cc_bad == 0 && sc_bad == 0,
        format!(
            "clique cover: 200 graphs, worst gap +{worst}, {cc_bad} bad; set cover: 100 instances, {sc_bad} bad, anneal beat greedy on {strict}"
        ),
    )
}

// ---------------------------------------------------------------- 5

fn sweep(suite: &[Instance]) -> Outcome {
    let rows: Vec<(String, [usize; 3], bool)> = suite
        .par_iter()
        .map(|inst| {
            let mut counts = [0; 3];
            let mut ok = true;
            for (s, (_, solve)) in SOLVERS.iter().enumerate() {
                let sol = solve(inst, SEED);
                ok &= valid(inst, &sol);
                counts[s] = sol.len();
            }
            (inst.name.clone(), counts, ok)
        })
        .collect();
    let n = rows.len();
    let invalid: Vec<&str> = rows.iter().filter(|r| !r.2).map(|r| r.0.as_str()).collect();
    let sc = rows.iter().filter(|r| r.1[2] <= r.1[0]).count();
    let cc = rows.iter().filter(|r| r.1[1] <= r.1[0]).count();
    let total = |s: usize| rows.iter().map(|r| r.1[s]).sum::<usize>();
    check(
        n >= 60 && invalid.is_empty() && sc * 5 >= n * 4 && cc * 5 >= n * 4,
        format!(
            "{n} instances, invalid {invalid:?}, setcover<=greedy {sc}/{n}, cliquecover<=greedy {cc}/{n}, totals greedy {} cliquecover {} setcover {}",
            total(0),
            total(1),
            total(2)
        ),
    )
}

// ---------------------------------------------------------------- 6

fn known_optima() -> Outcome {
    let convex = [
        region(&[(0, 0), (10, 0), (10, 10), (0, 10)]),
        region(&[(0, 0), (7, 1), (3, 9)]),
        region(&[(0, 0), (4, -3), (9, -1), (11, 4), (6, 9), (1, 7)]),
        region(&[(0, 0), (100, 0), (150, 20), (160, 70), (120, 110), (30, 90), (-10, 40)]),
    ];
    let mut fails = Vec::new();
    for (i, r) in convex.into_iter().enumerate() {
        let inst = Instance::new(format!("convex{i}"), r);
        for (name, solve) in SOLVERS {
            for seed in 0..3 {
                let sol = solve(&inst, seed);
                if sol.len() != 1 || !valid(&inst, &sol) {
                    fails.push(format!("{name} on {}: {}", inst.name, sol.len()));
                }
            }
        }
    }
    let l = Instance::new("L", region(&[(0, 0), (20, 0), (20, 10), (10, 10), (10, 20), (0, 20)]));
    // one convex piece equal to a nonconvex region is impossible, two suffice
    let lower_bound = !is_convex(l.region.outer().vertices()).unwrap() && l.region.holes().is_empty();
    let two = Solution {
        instance_name: "L".into(),
        pieces: vec![
            vec![Point::int(0, 0), Point::int(20, 0), Point::int(20, 10), Point::int(0, 10)],
            vec![Point::int(0, 0), Point::int(10, 0), Point::int(10, 20), Point::int(0, 20)],
        ],
    };
    if !lower_bound || !valid(&l, &two) {
        fails.push("L-shape optimum is not 2".into());
    }
    for (name, solve) in &SOLVERS[1..] {
        for seed in 0..3 {
            let sol = solve(&l, seed);
            if sol.len() != 2 || !valid(&l, &sol) {
                fails.push(format!("{name} on L: {}", sol.len()));
            }
        }
    }
    check(fails.is_empty(), format!("4 convex regions x 3 solvers x 3 seeds, L-shape x 2 solvers x 3 seeds {fails:?}"))
}

// ---------------------------------------------------------------- 7

fn outputs(threads: usize) -> Vec<String> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| {
        let mut out = Vec::new();
        let insts = [
            gen_cheese(&CheeseParams::new(25, 3)).unwrap(),
            gen_ccheese(&CheeseParams::new(25, 4)).unwrap(),
            gen_maze(&MazeParams::new(6, 5, 5)).unwrap(),
        ];
        for inst in &insts {
            out.push(serialize_instance(inst));
            for (_, solve) in SOLVERS {
                out.push(serialize_solution(&solve(inst, 9)));
            }
        }
        out
    })
}

fn determinism() -> Outcome {
    let a = outputs(1);
    let b = outputs(1);
    let c = outputs(4);
    let same = |x: &[String], y: &[String]| x.iter().zip(y).filter(|(p, q)| p == q).count();
    check(
        a == b && a == c,
        format!("{} outputs; rerun identical {}, pool 4 identical {}", a.len(), same(&a, &b), same(&a, &c)),
    )
}

// ---------------------------------------------------------------- 8

fn euler(suite: &[Instance]) -> Outcome {
    let bad: Vec<String> = suite
        .par_iter()
        .flat_map(|inst| {
            [SteinerPolicy::None, SteinerPolicy::EdgeExtensions]
                .into_iter()
                .filter_map(|policy| {
                    let mesh = triangulate(&inst.region, &steiner_points(&inst.region, policy)).unwrap();
                    let ok = mesh.len() == mesh.euler_triangle_count() && mesh.area() == inst.region.area();
                    (!ok).then(|| format!("{} {policy:?}", inst.name))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    check(bad.is_empty(), format!("{} instances x 2 Steiner policies, failures {bad:?}", suite.len()))
}

fn main() {
    // `cargo test` passes harness flags such as --nocapture; a filter that
    // names nothing here skips the suite.
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filter.is_empty() && !filter.iter().any(|f| "acceptance".contains(f.as_str())) {
        return;
    }
    let suite = read_instance_dir(&suite_dir()).expect("benchmark suite");
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("scoring fidelity", Duration::from_secs(1), Box::new(scoring)),
        ("verifier soundness", Duration::from_secs(120), Box::new(verifier)),
        ("raster oracle equivalence", Duration::from_secs(300), Box::new(raster_oracle)),
        ("combinatorial oracles", Duration::from_secs(120), Box::new(combinatorial)),
        ("solver feasibility sweep", Duration::from_secs(30 * 60), Box::new(|| sweep(&suite))),
        ("known optima", Duration::from_secs(10), Box::new(known_optima)),
        ("determinism", Duration::MAX, Box::new(determinism)),
        ("triangulation identities", Duration::MAX, Box::new(|| euler(&suite))),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let limit = if *limit == Duration::MAX { Duration::from_secs(u64::MAX / 4) } else { *limit };
        match within(t, limit, run()) {
            Ok(m) => println!("PASS {} {name}: {m}", i + 1),
            Err(m) => {
                failed += 1;
                println!("FAIL {} {name}: {m}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
