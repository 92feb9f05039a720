//! Subgraphs that are both dense and made of mutually similar edges.
//!
//! Given a graph and a nonnegative similarity between its edges, the crate
//! finds edge sets `X` maximizing `S(X) + mu D(X)`, where `D` is the edge to
//! node ratio of the edge-induced subgraph and `S` the total pairwise
//! similarity per edge. The work is done on the equivalent form
//! `S(X) - lambda / D(X)`, solved for a fixed `lambda` by fractional
//! programming over parametric minimum cuts ([`solve_dss_inv`]) and swept
//! over all `lambda` by interval bisection ([`explore`]). Any `mu` query is
//! then answered from the resulting catalog ([`solve_dss`]).

pub mod baselines;
pub mod error;
pub mod explorer;
pub mod fp;
pub mod graph;
pub mod ingest;
pub mod mincut;
pub mod objective;
pub mod qsolver;
pub mod similarity;

pub use baselines::{
    bl_den, bl_sim, densest_weighted_subgraph, BaselineResult, WeightedCompleteGraph,
};
pub use error::{Error, Result};
pub use explorer::{
    explore, lambda_bounds, signature_equal, solve_dss, ExploreOptions, LambdaBounds,
    SolutionCatalog,
};
pub use fp::{maximize_ratio, solve_dss_inv, FpTrace};
pub use graph::{Density, EdgeSet, Graph};
pub use ingest::{
    build_similarity, generate_random, jaccard, parse_multiplex, stats, DatasetStats,
    MultilayerGraph,
};
pub use mincut::{min_cut, Capacity, CutResult, FlowNetwork, ParametricMinCut};
pub use objective::{density, objective_dss, objective_dss_inv, subgraph_similarity, Solution};
pub use qsolver::{build_flow_graph, solve_q, Cover, QInstance, QSolution, QSolver};
pub use similarity::EdgeSimilarity;
