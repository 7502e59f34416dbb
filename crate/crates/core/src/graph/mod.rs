pub mod citation;
pub mod collab;
pub mod components;
pub mod snapshot;

pub use citation::{build_citation_graph, CitationGraph};
pub use collab::{build_collab_graph, CollabGraph, PriorNetwork, DEFAULT_TEAM_SIZE_CAP};
pub use components::{connected_components, Components, UnionFind};
