//! Baseline: merge neighboring faces of a triangulation while the union
//! stays convex.

use std::collections::HashSet;

use rand::Rng as _;
use rayon::prelude::*;

use crate::geom::ConvexPolygon;
use crate::instance::{Instance, Solution};
use crate::rng::{derive, seeded};
use crate::triangulate::{triangulate, Subdivision, TriangulationMesh};

/// One randomized merge run over `mesh`.
pub fn greedy_merge(mesh: &TriangulationMesh, seed: u64) -> Vec<ConvexPolygon> {
    let mut rng = seeded(seed);
    let mut sub = Subdivision::from_mesh(mesh);
    let mut pool: Vec<(usize, usize)> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for f in 0..mesh.len() {
        for g in sub.neighbors(f) {
            if f < g && pending.insert((f, g)) {
                pool.push((f, g));
            }
        }
    }
    while !pool.is_empty() {
        let (f, g) = pool.swap_remove(rng.random_range(0..pool.len()));
        pending.remove(&(f, g));
        if !sub.is_alive(f) || !sub.is_alive(g) || !sub.try_merge(f, g) {
            continue;
        }
        for h in sub.neighbors(f) {
            let pair = (f.min(h), f.max(h));
            if pending.insert(pair) {
                pool.push(pair);
            }
        }
    }
    sub.pieces()
}

pub fn solve_greedy_merge(inst: &Instance, seed: u64) -> Solution {
    solve_greedy_restarts(inst, seed, 1)
}

/// Best of `restarts` independent runs; ties go to the lowest restart.
pub fn solve_greedy_restarts(inst: &Instance, seed: u64, restarts: usize) -> Solution {
    let mesh = triangulate(&inst.region, &[]).expect("no extra points");
    let runs: Vec<Vec<ConvexPolygon>> =
        (0..restarts.max(1) as u64).into_par_iter().map(|i| greedy_merge(&mesh, derive(seed, i))).collect();
    let best = runs.into_iter().enumerate().min_by_key(|(i, r)| (r.len(), *i)).unwrap().1;
    Solution::from_pieces(inst.name.clone(), best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Point, PolygonWithHoles, SimplePolygon};

    fn inst(c: &[(i64, i64)]) -> Instance {
        let outer = SimplePolygon::new(c.iter().map(|&(x, y)| Point::int(x, y)).collect()).unwrap();
        Instance::new("t", PolygonWithHoles::from_outer(outer))
    }

    #[test]
    fn convex_gives_one_piece() {
        let i = inst(&[(0, 0), (5, 0), (8, 3), (7, 7), (3, 9), (-1, 5)]);
        for seed in 0..20 {
            assert_eq!(solve_greedy_merge(&i, seed).len(), 1);
        }
    }

    #[test]
    fn l_shape_two_or_three() {
        let i = inst(&[(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]);
        let mesh = triangulate(&i.region, &[]).unwrap();
        assert_eq!(mesh.len(), 4);
        let counts: HashSet<usize> = (0..200).map(|s| greedy_merge(&mesh, s).len()).collect();
        assert!(counts.iter().all(|&c| c == 2 || c == 3));
    }

    #[test]
    fn restarts_deterministic() {
        let i = inst(&[(0, 0), (6, 0), (6, 2), (4, 2), (4, 4), (6, 4), (6, 6), (0, 6), (0, 4), (2, 4), (2, 2), (0, 2)]);
        let a = solve_greedy_restarts(&i, 9, 8);
        let b = solve_greedy_restarts(&i, 9, 8);
        assert_eq!(a, b);
    }
}
