//! Shared inputs for the criterion benches.

use densim_core::{generate_random, lambda_bounds, EdgeSimilarity, Graph};

/// A reproducible random instance with `edges` edges on `max(edges / 10, 40)` nodes.
pub fn instance(edges: usize, p_sim: f64) -> (Graph, EdgeSimilarity) {
    let nodes = (edges / 10).max(40);
    generate_random(nodes, edges, p_sim, 7).expect("feasible instance")
}

/// The geometric mean of the two lambda bounds, a point inside the
/// interesting range.
pub fn middle_lambda(graph: &Graph, sim: &EdgeSimilarity) -> f64 {
    let b = lambda_bounds(graph, sim).expect("instance has similarities");
    (b.lambda_min * b.lambda_max).sqrt()
}
