//! Seeded instance generators: `cheese`, `ccheese` and `maze`.

mod cheese;
mod maze;

use std::collections::BTreeMap;

use thiserror::Error;

pub use cheese::{gen_ccheese, gen_cheese, gen_hole, CheeseParams};
pub use maze::{gen_maze, MazeParams};

use crate::instance::Meta;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("generator stalled after placing {placed} holes")]
    GeneratorStall { placed: usize },
}

fn meta(generator: &str, seed: u64, params: &[(&str, String)]) -> Meta {
    Meta {
        generator: generator.into(),
        seed,
        params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<BTreeMap<_, _>>(),
    }
}
