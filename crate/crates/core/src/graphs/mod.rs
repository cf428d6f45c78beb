//! Directed-graph combinatorics: graphs with multiplicity, their pole
//! products, canonical line forests, and reduction of arbitrary graphs to
//! the line-forest basis modulo the cycle relations.

pub mod decompose;
pub mod digraph;
pub mod forest;
pub mod relations;
pub mod rewrite;

pub use decompose::decompose_to_lines;
pub use digraph::{enumerate_simple_cycles, p_gamma, DiGraph, GraphParseError};
pub use forest::{
    enumerate_all_line_forests, enumerate_line_forests, ForestError, LineCombo, LineForest,
};
pub use relations::{cycle_relation_span, enumerate_graphs, quotient_dimension, RelationRank};
pub use rewrite::rewrite_to_lines;
