//! Predicates and statistics on threshold graphs.

mod components;
mod diameter;
mod hamilton;
mod matching;
mod mst;

pub use components::{components, is_connected, Component, ComponentSummary, UnionFind};
pub use diameter::{diameter, Diameter};
pub use hamilton::{is_hamiltonian, HAMILTON_MAX_N};
pub use matching::{bipartite_perfect_matching, max_cross_matching};
pub use mst::{mst_weight, SpanningTree};
