//! Structural motif mining on labeled hypergraphs.
//!
//! A relational database of ground atoms becomes a hypergraph with one node
//! per constant and one labeled hyperedge per atom. The hypergraph is split
//! into components and clustered spectrally; truncated random walks from
//! every node then estimate hitting times and path-signature counts, and
//! two hypothesis tests group the reached nodes into abstract concepts.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod error;
pub mod graph;
pub mod hypergraph;
pub mod hypothesis;
pub mod linalg;
pub mod pipeline;
pub mod relational_io;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod symmetry;
pub mod walk;

pub use error::{Error, Result};
pub use graph::WeightedGraph;
pub use hypergraph::{
    connected_components, diameter, majority_subhypergraph, to_weighted_graph, to_weighted_graph_with,
    CliqueWeighting, EdgeId, Hyperedge, LabelId, LabeledHypergraph, NodeId,
};
pub use hypothesis::{
    distance_symmetric, gamma_approx_params, gamma_critical_value, path_symmetric, q_statistic, theta_sym,
    ClusterCounts, GammaApprox, LengthTest, PathCounts, PathTestConfig, PathTestOutcome,
};
pub use pipeline::{
    emit_report, get_communities, parse_report, report_to_string, summarize, ConceptReport, ReportFormat,
    RunConfig,
};
pub use relational_io::{build_hypergraph, hypergraph_to_database, parse_database, GroundAtom, RelationalDatabase};
pub use scalar::Scalar;
pub use spectral::{cheeger_sweep_cut, get_clusters, hcluster, second_eigenpair, SpectralConfig, SweepCut};
pub use symmetry::{
    binary_split, partition_distance_symmetric, prism_paths, prism_paths_counts, standardize_and_project,
    symmetry_clustering, Concept, DistancePartition, DistanceSet, SymmetryPartition,
};
pub use walk::{
    exact_tht, optimal_walk_count, p_star, run_walks, run_walks_all, topk_walk_count, PathSignature, WalkConfig,
    WalkStats,
};

pub type Real = f64;
pub type Graph = WeightedGraph<Real>;
pub type Spectral = SpectralConfig<Real>;
pub type Gamma = GammaApprox<Real>;
pub type PathTest = PathTestConfig<Real>;
pub type Symmetry = SymmetryPartition<Real>;
