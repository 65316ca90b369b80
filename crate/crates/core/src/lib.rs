//! Split decomposition of undirected graphs.
//!
//! The decomposition is computed layer by layer from a BFS of a chosen root.
//! At each distance the possible split attachment sets are obtained as the
//! orthogonal of a set family built from modules of the upper layers and the
//! neighbourhoods of the components below, and the forest of split sides is
//! updated from the resulting partitive tree.

pub mod gen;
pub mod graph;
pub mod modular;
pub mod oracle;
pub mod partitive;
pub mod set_family;
pub mod split;
pub mod split_tree;

pub use graph::{bfs_layering, load_graph, Graph, GraphError, Layering};
pub use partitive::{NodeKind, PartitiveTree};
pub use set_family::{orthogonal_tree, SetFamily};
pub use split::{split_decomposition, SplitError};
pub use split_tree::{SplitKind, SplitTree};
