//! Graph codes and woven graph codes over GF(2).
//!
//! Hypergraph-based block codes, convolutional constituents, the
//! two-dimensional woven construction on circulant bipartite graphs, distance
//! computations and the asymptotic distance bounds for the ensemble.

pub mod block;
pub mod bounds;
pub mod conv;
mod enumerate;
pub mod error;
pub mod gf2;
pub mod hypergraph;
pub mod par;
pub mod report;
pub mod woven;

pub use error::{Error, Result};
pub use par::Exec;
