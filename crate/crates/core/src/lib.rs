//! Two-block oriented path embedding in oriented graphs of large minimum
//! semidegree, with an exact longest-path engine, a brute-force oracle,
//! instance generators and an experiment harness.

pub mod digraph;
pub mod embed;
pub mod experiments;
pub mod generators;
pub mod oracle;
pub mod path;
pub mod search;

pub use digraph::{GraphError, OrientedGraph, Vertex};
pub use embed::{embed_two_block, threshold, EmbedError, EmbedOptions, EmbedOutcome, ProofTrace};
pub use oracle::{find_pattern_embedding, OracleReport};
pub use path::{verify_embedding, Embedding, Orientation, PathPattern, TwoBlockSpec};
pub use search::{longest_directed_path, SearchBudget};
