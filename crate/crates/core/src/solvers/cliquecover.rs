//! Triangulate, cover the visibility graph by cliques, turn cliques into
//! hulls, repair hulls that leave the region, drop redundant pieces.

use super::clique::clique_cover;
use super::visibility::{build_visibility_graph, MeshIndex};
use super::SolveError;
use crate::geom::{ConvexPolygon, PolygonWithHoles};
use crate::instance::{Instance, Solution};
use crate::residual::Residual;
use crate::triangulate::{steiner_points, triangulate, SteinerPolicy, TriangulationMesh};

/// Hull of all vertices of the clique's triangles.
pub fn clique_to_piece(clique: &[usize], mesh: &TriangulationMesh) -> ConvexPolygon {
    MeshIndex::new(mesh).hull_of(clique)
}

/// Splits the clique into sub-cliques whose hulls lie in the region. Each
/// sub-clique starts at the first unplaced triangle and takes every other
/// triangle (unplaced ones first) whose addition keeps the hull inside.
fn split(idx: &MeshIndex, clique: &[usize]) -> Vec<ConvexPolygon> {
    let mut placed = vec![false; clique.len()];
    let mut out = Vec::new();
    while let Some(s) = placed.iter().position(|&p| !p) {
        let mut sub = vec![clique[s]];
        placed[s] = true;
        let mut hull = idx.hull_of(&sub);
        let order = (0..clique.len()).filter(|&i| !placed[i]).chain((0..clique.len()).filter(|&i| placed[i]));
        for i in order.collect::<Vec<_>>() {
            if sub.contains(&clique[i]) {
                continue;
            }
            sub.push(clique[i]);
            let h = idx.hull_of(&sub);
            if idx.contains(&h, sub[0]) {
                hull = h;
                placed[i] = true;
            } else {
                sub.pop();
            }
        }
        out.push(hull);
    }
    out
}

/// Pieces for the given cliques, each guaranteed to lie in the region and
/// together covering every triangle of every clique.
pub fn repair_pieces(cliques: &[Vec<usize>], mesh: &TriangulationMesh) -> Vec<ConvexPolygon> {
    let idx = MeshIndex::new(mesh);
    let mut out = Vec::new();
    for q in cliques {
        let hull = idx.hull_of(q);
        if idx.contains(&hull, q[0]) {
            out.push(hull);
        } else {
            out.extend(split(&idx, q));
        }
    }
    out
}

/// Drops pieces covered by the others, largest first, until no single piece
/// can be removed. Keeps the original order of the survivors.
pub fn prune_redundant(
    pieces: Vec<ConvexPolygon>,
    region: &PolygonWithHoles,
) -> Result<Vec<ConvexPolygon>, SolveError> {
    let mut all = Residual::new(region);
    for p in &pieces {
        all.subtract(p);
    }
    if let Some(w) = all.witnesses().into_iter().next() {
        return Err(SolveError::NotACover { witness: w });
    }
    let areas: Vec<_> = pieces.iter().map(|p| p.area()).collect();
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&a, &b| areas[b].cmp(&areas[a]).then(a.cmp(&b)));
    let mut keep = vec![true; pieces.len()];
    for i in order {
        // the others cover the region iff they cover piece i
        let mut rest = Residual::from_cells(vec![pieces[i].clone()]);
        for (j, p) in pieces.iter().enumerate() {
            if j != i && keep[j] {
                rest.subtract(p);
                if rest.is_empty() {
                    break;
                }
            }
        }
        if rest.is_empty() {
            keep[i] = false;
        }
    }
    Ok(pieces.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect())
}

pub fn solve_cliquecover(inst: &Instance, policy: SteinerPolicy, seed: u64) -> Solution {
    let extra = steiner_points(&inst.region, policy);
    let mesh = triangulate(&inst.region, &extra).expect("Steiner points lie in the region");
    let graph = build_visibility_graph(&mesh);
    let cover = clique_cover(&graph, seed);
    let mut pieces = repair_pieces(&cover.cliques, &mesh);
    let mut seen = std::collections::HashSet::new();
    pieces.retain(|p| seen.insert(p.canonical()));
    let pieces = prune_redundant(pieces, &inst.region).expect("cliques cover every triangle");
    Solution::from_pieces(inst.name.clone(), pieces)
}
