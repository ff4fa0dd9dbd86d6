//! Domination numbers of complete grid graphs.
//!
//! The crate has three layers:
//!
//! * [`grid`]: the grid model, the loss function `5|S| - |N[S]|`, and two
//!   exact solvers (exhaustive search and a broken-profile DP).
//! * [`words`], [`tropical`], [`border`]: the transfer-matrix machinery that
//!   bounds the loss concentrated on a border of width `k`. Every matrix has
//!   an independent brute-force oracle at small `k`.
//! * [`bounds`]: closed forms, the transfer-matrix lower bound, a verified
//!   upper-bound constructor and the certificate resolver.

pub mod border;
pub mod bounds;
mod error;
pub mod grid;
pub mod store;
pub mod tropical;
pub mod words;

pub use error::{Error, Result};
pub use grid::{GridDims, Vertex, VertexSet};
pub use tropical::TropicalMatrix;
pub use words::{Word, WordTable};
