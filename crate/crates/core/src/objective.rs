//! Density, subgraph edge similarity and the two relaxed objectives.

use serde::{Deserialize, Serialize};

use crate::error::{check_nonnegative, Error, Result};
use crate::graph::{Density, EdgeSet, Graph};
use crate::similarity::EdgeSimilarity;

/// `D(X) = |X| / |V(X)|` as an exact pair.
pub fn density(graph: &Graph, x: &EdgeSet) -> Result<Density> {
    if x.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    if let Some(&id) = x.members().iter().find(|&&id| id >= graph.edge_count()) {
        return Err(Error::InvalidEdgeId {
            id,
            edge_count: graph.edge_count(),
        });
    }
    Density::new(x.len() as u64, x.node_cover().len() as u64)
}

/// `S(X)`: sum of pairwise similarities inside `X` divided by `|X|`, and 0
/// when `|X| <= 1`.
pub fn subgraph_similarity(sim: &EdgeSimilarity, x: &EdgeSet) -> f64 {
    if x.len() <= 1 {
        return 0.0;
    }
    let mut mask = vec![false; sim.element_count()];
    for &e in x.members() {
        mask[e] = true;
    }
    sim.pair_sum_within(x.members(), &mask) / x.len() as f64
}

/// `S + mu * D`.
pub fn objective_dss(similarity: f64, density: Density, mu: f64) -> Result<f64> {
    let mu = check_nonnegative("mu", mu)?;
    Ok(similarity + mu * density.value())
}

/// `S - lambda / D`.
pub fn objective_dss_inv(similarity: f64, density: Density, lambda: f64) -> Result<f64> {
    let lambda = check_nonnegative("lambda", lambda)?;
    if density.numerator == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    Ok(similarity - lambda * density.inverse())
}

/// The `lambda` under which an optimum of the `mu`-weighted problem is also
/// optimal for the inverse-density problem: `D(X*)^2 * mu`.
pub fn map_mu_to_lambda(solution: &Solution, mu: f64) -> Result<f64> {
    let mu = check_nonnegative("mu", mu)?;
    let d = solution.density.value();
    Ok(d * d * mu)
}

/// Inverse of [`map_mu_to_lambda`].
pub fn map_lambda_to_mu(solution: &Solution, lambda: f64) -> Result<f64> {
    let lambda = check_nonnegative("lambda", lambda)?;
    let d = solution.density.value();
    Ok(lambda / (d * d))
}

/// A nonempty edge set with its metrics at the `lambda` that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Solution {
    pub lambda: f64,
    pub edge_set: EdgeSet,
    pub similarity: f64,
    pub density: Density,
    pub objective_inv: f64,
}

impl Solution {
    pub fn evaluate(
        graph: &Graph,
        sim: &EdgeSimilarity,
        edge_set: EdgeSet,
        lambda: f64,
    ) -> Result<Self> {
        let density = density(graph, &edge_set)?;
        let similarity = subgraph_similarity(sim, &edge_set);
        let objective_inv = objective_dss_inv(similarity, density, lambda)?;
        Ok(Self {
            lambda,
            edge_set,
            similarity,
            density,
            objective_inv,
        })
    }

    /// `S + mu * D` for this solution.
    pub fn objective_dss(&self, mu: f64) -> Result<f64> {
        objective_dss(self.similarity, self.density, mu)
    }

    pub fn num_edges(&self) -> usize {
        self.edge_set.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.edge_set.node_cover().len()
    }
}
