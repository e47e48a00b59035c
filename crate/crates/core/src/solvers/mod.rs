//! Cover solvers: greedy face merging, clique cover of the triangle
//! visibility graph, and set cover over a collection of candidate pieces.

mod clique;
mod cliquecover;
mod greedy;
mod setcover;
mod visibility;

use thiserror::Error;

pub use clique::{clique_cover, maximal_cliques, CliqueCover, Flow};
pub use cliquecover::{clique_to_piece, prune_redundant, repair_pieces, solve_cliquecover};
pub use greedy::{greedy_merge, solve_greedy_merge, solve_greedy_restarts};
pub use setcover::{
    anneal_set_cover, build_collection, gen_collection_bloat, gen_collection_cliques, greedy_complete,
    greedy_set_cover, place_witnesses, solve_setcover, AnnealSchedule, Collection, CollectionKind, SetCoverConfig,
    SetCoverInstance, BLOAT_FAILURES,
};
pub use visibility::{build_visibility_graph, MeshIndex, VisibilityGraph};

use crate::geom::Point;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("pieces do not cover the region; {witness} is uncovered")]
    NotACover { witness: Point },
    #[error("witness {witness} is in no piece")]
    InfeasibleSetCover { witness: usize },
}
