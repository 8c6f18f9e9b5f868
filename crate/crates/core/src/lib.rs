//! Exact finite-scale computation for generalized Turán problems.

pub mod canon;
pub mod coloring;
pub mod constructions;
pub mod count;
pub mod graph;
pub mod graph6;
pub mod multipartite;
pub mod notation;
pub mod search;
pub mod stability;

pub use canon::{canon, canonical, isomorphic, Canon, CanonicalForm};
pub use coloring::{chromatic_number, critical_r, criticality, enumerate_colorings, ColoringWitness, CriticalityReport};
pub use count::{copy_degree, count_copies, count_injective_homs, is_free, Count};
pub use graph::{Graph, GraphError};
pub use graph6::{emit_graph6, parse_graph6, Graph6Error};
pub use multipartite::{count_copies_multipartite, optimize_parts, realize, turan_parts, PartSizes};
pub use search::{enumerate_free, ex_brute, symmetrize_search, zykov_step, ExtremalReport, SearchConfig, SearchError};
pub use stability::{classify, multipartite_distance, near_extremal_profile, Classification, DistanceConfig, DistanceMode, PartitionDistance, Profile, StabilityVerdict};
pub use constructions::{assemble_h3, build, build_h2, construct, disjoint_union, Construction, FamilyKind, FamilySpec, H2Spec, H3Spec};
pub use notation::{parse_graph_spec, GraphSource, NotationError};

// The guide's Rust blocks run as doctests of this crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/multipartite.md")]
    mod multipartite {}
    #[doc = include_str!("../../../book/src/coloring.md")]
    mod coloring {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/stability.md")]
    mod stability {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
