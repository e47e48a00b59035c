//! Clique cover heuristic and maximal clique enumeration.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;

use super::visibility::VisibilityGraph;
use crate::rng::seeded;

/// Cliques whose union is every vertex. Each list is sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCover {
    pub cliques: Vec<Vec<usize>>,
}

impl CliqueCover {
    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Grows one maximal clique from `start`, always adding the candidate with
/// the most neighbors among the remaining candidates (lowest id on ties).
fn grow(g: &VisibilityGraph, start: usize, mark: &mut [bool]) -> Vec<usize> {
    let mut clique = vec![start];
    let mut cand: Vec<usize> = g.neighbors(start).to_vec();
    while !cand.is_empty() {
        for &c in &cand {
            mark[c] = true;
        }
        let mut best = (0, usize::MAX);
        for &c in &cand {
            let common = g.neighbors(c).iter().filter(|&&x| mark[x]).count();
            if common > best.0 || best.1 == usize::MAX {
                best = (common, c);
            }
        }
        for &c in &cand {
            mark[c] = false;
        }
        let v = best.1;
        clique.push(v);
        cand = intersect(&cand, g.neighbors(v));
    }
    clique.sort_unstable();
    clique
}

/// Greedy clique growth from uncovered vertices of least uncovered degree,
/// followed by one pass that tries to dissolve each clique into the others.
/// The seed only breaks ties between start vertices.
pub fn clique_cover(g: &VisibilityGraph, seed: u64) -> CliqueCover {
    let n = g.len();
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(&mut seeded(seed));
    let mut covered = vec![false; n];
    let mut left = n;
    let mut deg: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    let mut mark = vec![false; n];
    let mut cliques = Vec::new();
    while left > 0 {
        let start = (0..n).filter(|&v| !covered[v]).min_by_key(|&v| (deg[v], rank[v])).unwrap();
        let q = grow(g, start, &mut mark);
        for &v in &q {
            if !covered[v] {
                covered[v] = true;
                left -= 1;
                for &u in g.neighbors(v) {
                    deg[u] -= 1;
                }
            }
        }
        cliques.push(q);
    }
    dissolve(g, &mut cliques);
    CliqueCover { cliques }
}

/// Removes a clique when each of its vertices is either covered by another
/// clique or can join one.
fn dissolve(g: &VisibilityGraph, cliques: &mut Vec<Vec<usize>>) {
    let mut count = vec![0usize; g.len()];
    for q in cliques.iter() {
        for &v in q {
            count[v] += 1;
        }
    }
    let mut alive = vec![true; cliques.len()];
    for i in 0..cliques.len() {
        let mut joins: Vec<(usize, usize)> = Vec::new();
        let mut ok = true;
        for &v in &cliques[i] {
            if count[v] > 1 {
                continue;
            }
            let target = (0..cliques.len()).find(|&j| {
                j != i
                    && alive[j]
                    && cliques[j].iter().all(|&u| g.has_edge(u, v))
                    && joins.iter().all(|&(jj, u)| jj != j || g.has_edge(u, v))
            });
            match target {
                Some(j) => joins.push((j, v)),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        alive[i] = false;
        for &v in &cliques[i] {
            count[v] -= 1;
        }
        for (j, v) in joins {
            cliques[j].push(v);
            cliques[j].sort_unstable();
            count[v] += 1;
        }
    }
    let mut k = 0;
    cliques.retain(|_| {
        k += 1;
        alive[k - 1]
    });
}

/// What to do after a clique has been emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    /// Skip the remaining cliques of the current root vertex.
    NextRoot,
    Stop,
}

/// Vertices in degeneracy order: repeatedly take a vertex of least degree
/// among those left, lowest id first.
fn degeneracy_order(g: &VisibilityGraph) -> Vec<usize> {
    let n = g.len();
    let mut deg: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> = (0..n).map(|v| Reverse((deg[v], v))).collect();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((d, v))) = heap.pop() {
        if done[v] || d != deg[v] {
            continue;
        }
        done[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if !done[u] {
                deg[u] -= 1;
                heap.push(Reverse((deg[u], u)));
            }
        }
    }
    order
}

/// Bron–Kerbosch with Tomita pivoting below a degeneracy-ordered outer
/// loop. Every maximal clique is reported once, as `emit(root, clique)` where
/// `root` is its earliest vertex in the order and `clique` is sorted.
/// Returns `false` if `emit` stopped the enumeration.
pub fn maximal_cliques(g: &VisibilityGraph, mut emit: impl FnMut(usize, &[usize]) -> Flow) -> bool {
    fn rec(
        g: &VisibilityGraph,
        r: &mut Vec<usize>,
        p: Vec<usize>,
        x: Vec<usize>,
        emit: &mut dyn FnMut(usize, &[usize]) -> Flow,
    ) -> Flow {
        if p.is_empty() {
            if x.is_empty() {
                let mut c = r.clone();
                c.sort_unstable();
                return emit(r[0], &c);
            }
            return Flow::Continue;
        }
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| (intersect(&p, g.neighbors(u)).len(), Reverse(u)))
            .unwrap();
        let todo: Vec<usize> = p.iter().copied().filter(|v| g.neighbors(pivot).binary_search(v).is_err()).collect();
        let (mut p, mut x) = (p, x);
        for v in todo {
            r.push(v);
            let flow = rec(g, r, intersect(&p, g.neighbors(v)), intersect(&x, g.neighbors(v)), emit);
            r.pop();
            if flow != Flow::Continue {
                return flow;
            }
            p.retain(|&u| u != v);
            let at = x.partition_point(|&u| u < v);
            x.insert(at, v);
        }
        Flow::Continue
    }
    let order = degeneracy_order(g);
    let mut pos = vec![0; g.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    for &v in &order {
        let (p, x): (Vec<usize>, Vec<usize>) = g.neighbors(v).iter().partition(|&&u| pos[u] > pos[v]);
        if rec(g, &mut vec![v], p, x, &mut emit) == Flow::Stop {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_graph(n: usize, bits: u64) -> VisibilityGraph {
        let mut edges = Vec::new();
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                if bits >> k & 1 == 1 {
                    edges.push((a, b));
                }
                k += 1;
            }
        }
        VisibilityGraph::from_edges(n, edges)
    }

    fn brute_maximal(g: &VisibilityGraph) -> Vec<Vec<usize>> {
        let n = g.len();
        let sets: Vec<Vec<usize>> = (1u32..1 << n)
            .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect::<Vec<_>>())
            .filter(|s| g.is_clique(s))
            .collect();
        let mut out: Vec<Vec<usize>> = sets
            .iter()
            .filter(|s| (0..n).all(|v| s.contains(&v) || s.iter().any(|&u| !g.has_edge(u, v))))
            .cloned()
            .collect();
        out.sort();
        out
    }

    #[test]
    fn trivial_covers() {
        let k5 = VisibilityGraph::from_edges(5, (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))));
        assert_eq!(clique_cover(&k5, 0).len(), 1);
        let empty = VisibilityGraph::from_edges(6, []);
        assert_eq!(clique_cover(&empty, 0).len(), 6);
    }

    #[test]
    fn path_needs_two() {
        let g = VisibilityGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let c = clique_cover(&g, 3);
        assert_eq!(c.len(), 2);
    }

    proptest! {
        #[test]
        fn cover_is_valid(n in 1usize..12, bits in any::<u64>(), seed in any::<u64>()) {
            let g = random_graph(n, bits);
            let c = clique_cover(&g, seed);
            let mut seen = vec![false; n];
            for q in &c.cliques {
                prop_assert!(g.is_clique(q));
                for &v in q { seen[v] = true; }
            }
            prop_assert!(seen.iter().all(|&s| s));
            prop_assert_eq!(c, clique_cover(&g, seed));
        }

        #[test]
        fn enumeration_matches_brute_force(n in 1usize..=11, bits in any::<u64>()) {
            let g = random_graph(n, bits);
            let mut got = Vec::new();
            let mut roots = Vec::new();
            let finished = maximal_cliques(&g, |r, c| {
                got.push(c.to_vec());
                roots.push(c.contains(&r));
                Flow::Continue
            });
            prop_assert!(finished);
            prop_assert!(roots.iter().all(|&b| b));
            got.sort();
            prop_assert_eq!(got, brute_maximal(&g));
        }
    }

    #[test]
    fn enumeration_stops_early() {
        let g = VisibilityGraph::from_edges(6, []);
        let mut k = 0;
        assert!(!maximal_cliques(&g, |_, _| {
            k += 1;
            if k < 3 {
                Flow::Continue
            } else {
                Flow::Stop
            }
        }));
        assert_eq!(k, 3);
    }
}
