//! Exact computational laboratory for proportional choosability of complete
//! multipartite graphs.

pub mod acceptance;
pub mod bounds;
pub mod constructive;
pub mod equitable;
pub mod error;
pub mod graph;
pub mod list;
pub mod matching;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{Graph, Permutation, VertexSet};
pub use list::{Color, ListAssignment, SupportEntry, SupportMultiset};
pub use solver::{Coloring, Verdict};
