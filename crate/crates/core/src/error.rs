use thiserror::Error;

use crate::verify::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("levels must lie in 0..={max}, got {got}")]
    LevelsOutOfRange { got: u32, max: u32 },

    #[error("subdivision count {parts} does not divide the step count {steps}")]
    NotDivisible { parts: usize, steps: usize },

    #[error("subpath index {index} outside 1..={parts}")]
    SubpathIndex { index: usize, parts: usize },

    #[error("Hölder exponent must lie in (0, 1/2), got {0}")]
    HolderExponent(f64),

    #[error("grid exponent gamma must exceed 1, got {0}")]
    GammaTooSmall(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields were computed on different grids")]
    GridMismatch,

    #[error("path leaves the grid at vertex {0}")]
    PathExitsGrid(usize),

    #[error("N too small: {0}")]
    NTooSmall(String),

    #[error("parameter set violates {} constraint(s): {}", .0.len(), join_violations(.0))]
    InvalidParams(Vec<Violation>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.inequality)
        .collect::<Vec<_>>()
        .join("; ")
}
