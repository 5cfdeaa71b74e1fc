//! Fast-mixing Markov chains on graphs: conductance certificates, spectral
//! bounds and chain constructions.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod chains;
pub mod cli;
pub mod conductance;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod matching;
pub mod oracle;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{
    bfs_tree, diameter, generate, Family, Graph, RootedSpanningTree, Vertex, WeightedGraph,
};
