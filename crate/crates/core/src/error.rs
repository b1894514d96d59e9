use thiserror::Error;

/// Errors raised by grid construction, wave evaluation and the CLI layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid needs an odd number of points so that x = 0 is a mesh node, got {0}")]
    EvenGrid(usize),

    #[error("grid needs at least 3 points, got {0}")]
    GridTooSmall(usize),

    #[error("mode index {k} out of range 1..={n}")]
    ModeOutOfRange { k: usize, n: usize },

    #[error("matrix index ({row}, {col}) out of range 1..={n}")]
    EntryOutOfRange { row: usize, col: usize, n: usize },

    #[error("matrix function is not finite at mode {k} (lambda = {lambda}): {value}")]
    NonFiniteMode { k: usize, lambda: f64, value: f64 },

    #[error("field length {got} does not match grid with {expected} points")]
    LengthMismatch { expected: usize, got: usize },

    #[error("fields live on different grids ({0} vs {1} points)")]
    GridMismatch(usize, usize),

    #[error("Bessel table covers orders 0..={available} at x = {x}, but order {needed} at x = {wanted} was requested")]
    TableMismatch {
        available: usize,
        needed: usize,
        x: f64,
        wanted: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dense construction limited to N <= {ceiling}, got N = {n}")]
    DenseCeiling { n: usize, ceiling: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
