//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fields live on incompatible grids")]
    GridMismatch,

    #[error("sample count {got} does not match grid point count {expected}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("incommensurate phase: {0}")]
    Incommensurate(String),

    #[error("inadmissible parameters: {0}")]
    InadmissibleParams(String),

    #[error("cubic term is not positive (V = {v:.6e}); Nehari projection undefined")]
    NonPositiveCubic { v: f64 },

    #[error("solver failed to converge: best residual {residual:.3e} after {restarts} restart(s)")]
    SolveFailed { residual: f64, restarts: usize },

    #[error("numerical blowup flagged: {0}")]
    Blowup(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error("series format error: {0}")]
    Series(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
