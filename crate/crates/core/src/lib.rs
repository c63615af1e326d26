//! Clique decompositions of the sparsity patterns behind power-network
//! semidefinite relaxations.
//!
//! Interior-point SDP solvers handle one big PSD constraint badly; if the
//! aggregate sparsity pattern is chordal (or made chordal), the constraint
//! splits into one small PSD block per maximal clique plus linking
//! constraints on the clique-tree separators. This crate builds and compares
//! such decompositions end to end:
//!
//! 1. parse a network ([`ingest`]) and build its sparsity pattern in complex
//!    or real variables ([`pattern`]);
//! 2. pick an elimination ordering and compute a chordal extension by
//!    symbolic elimination ([`elimination`]);
//! 3. enumerate maximal cliques, build a maximum-weight clique tree and
//!    count linking constraints ([`cliques`]);
//! 4. improve the decomposition by merging adjacent cliques under a block
//!    size cap, solved exactly as a matching on the clique tree ([`merge`]);
//! 5. run the whole thing from a config and emit deterministic JSON reports
//!    and block-structure exports ([`report`]).
//!
//! Fewer fill edges does not mean a better decomposition: the real-variable
//! pattern needs fewer added edges than the doubled complex one but ends up
//! with more cliques and more linking constraints, and merging cliques —
//! adding even more edges — typically pays off. The tooling here makes those
//! trade-offs measurable.

pub mod cliques;
pub mod elimination;
pub mod graph;
pub mod ingest;
pub mod merge;
pub mod pattern;
pub mod report;

pub use cliques::{
    build_clique_tree, count_linking_constraints, decomposition_stats, maximal_cliques,
    verify_rip, CliqueList, CliqueTree, DecompositionStats, TreeEdge,
};
pub use elimination::{
    order_amd, order_max_degree, order_min_degree, order_random, symbolic_elimination,
    OrderingStrategy,
};
pub use graph::{ChordalExtension, EliminationOrder, GraphError, NodeLabel, Part, SparsityGraph};
pub use ingest::{
    parse_edge_list, parse_matpower, to_edge_list, to_matpower, Branch, IngestError,
    NetworkTopology,
};
pub use merge::{
    apply_merge, merge_rounds, solve_merge, MergeError, MergeModel, MergePlan, ModelEdge,
    RoundStats,
};
pub use pattern::{
    build_complex_pattern, im_index, re_index, realify_clique, realify_extension, realify_graph,
};
pub use report::{
    compare, export_blocks, render_block_export, run_pipeline, run_pipeline_on,
    to_canonical_json, ComparisonReport, InputFormat, PipelineConfig, PipelineError, Report,
    Side,
};
