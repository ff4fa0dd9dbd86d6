use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Arguments outside the domain of an operation.
    #[error("invalid input: {0}")]
    Input(String),

    /// An instance above a configured solver ceiling.
    #[error("instance too large: {what} is {actual}, limit is {limit}")]
    Size {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("matrix dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("no eventual shift after {iters} iterations ({mismatched} entries still off, last constant {last_constant:?})")]
    Convergence {
        iters: usize,
        mismatched: usize,
        last_constant: Option<i64>,
    },

    #[error("construction failed for {n}x{m}: best set has {best} vertices, bound is {bound}")]
    Construction {
        n: u32,
        m: u32,
        best: usize,
        bound: i64,
    },

    /// Two methods disagree: a lower bound above an upper bound.
    #[error("inconsistent bounds for {n}x{m}: lower {lower} > upper {upper}")]
    Inconsistent {
        n: u32,
        m: u32,
        lower: i64,
        upper: i64,
    },

    #[error("corrupt cache file {path}: {reason}")]
    Corrupt { path: PathBuf, reason: String },

    #[error("malformed matrix data: {0}")]
    Decode(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
