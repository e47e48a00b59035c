//! Leaderboard scoring and SVG drawings.

mod render;
mod score;

pub use render::render_svg;
pub use score::{
    build_leaderboard, leaderboard_from_dirs, read_instance_dir, score_instance, Excluded, LeaderboardError,
    ScoreError, ScoreTable, TeamScore,
};
