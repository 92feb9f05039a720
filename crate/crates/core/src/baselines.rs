//! Densest weighted subgraph baselines that fold density and similarity into
//! a single pair weight.
//!
//! `bl_den` weights node pairs by adjacency plus `gamma` times the Jaccard
//! similarity of their layer sets and returns the edges induced by the
//! densest node set. `bl_sim` weights edge pairs by similarity plus `gamma`
//! for sharing an endpoint and returns the densest edge set.

use std::collections::HashMap;

use crate::error::{check_nonnegative, Error, Result};
use crate::fp::maximize_ratio;
use crate::graph::{EdgeSet, Graph};
use crate::ingest::{jaccard, MultilayerGraph};
use crate::similarity::EdgeSimilarity;

/// Above this many materialized pairs `bl_sim` is expensive enough that
/// callers should ask before running it.
pub const BL_SIM_PAIR_WARNING: usize = 20_000_000;

#[derive(Debug, Clone)]
pub struct WeightedCompleteGraph {
    weights: EdgeSimilarity,
    gamma: f64,
}

impl WeightedCompleteGraph {
    pub fn new(weights: EdgeSimilarity, gamma: f64) -> Result<Self> {
        let gamma = check_nonnegative("gamma", gamma)?;
        Ok(Self { weights, gamma })
    }

    pub fn weights(&self) -> &EdgeSimilarity {
        &self.weights
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn element_count(&self) -> usize {
        self.weights.element_count()
    }
}

/// Elements maximizing `sum_{pairs} w / |X|`, with the attained ratio.
pub fn densest_weighted_subgraph(wg: &WeightedCompleteGraph) -> Result<(Vec<usize>, f64)> {
    if wg.weights.s_max().is_none() {
        return Err(Error::NoNonzeroSimilarity);
    }
    let optimum = maximize_ratio(&wg.weights, None, None)?;
    Ok((optimum.selected, optimum.ratio))
}

#[derive(Debug, Clone)]
pub struct BaselineResult {
    pub edge_set: EdgeSet,
    /// Selected nodes for `bl_den`, selected edges for `bl_sim`.
    pub selected: Vec<usize>,
    pub ratio: f64,
}

/// Node-pair weights `[u ~ v] + gamma * jaccard(l(u), l(v))`.
pub fn bl_den_weights(ml: &MultilayerGraph, gamma: f64) -> Result<WeightedCompleteGraph> {
    let gamma = check_nonnegative("gamma", gamma)?;
    let graph = ml.graph();
    let n = graph.node_count();
    let mut weights: HashMap<(usize, usize), f64> =
        graph.edges().iter().map(|&e| (e, 1.0)).collect();
    if gamma > 0.0 {
        let labels: Vec<Vec<usize>> = (0..n).map(|v| ml.node_labels(v)).collect();
        let mut buckets = vec![Vec::new(); ml.layer_count()];
        for (v, ls) in labels.iter().enumerate() {
            for &l in ls {
                buckets[l].push(v);
            }
        }
        for (l, bucket) in buckets.iter().enumerate() {
            for (i, &u) in bucket.iter().enumerate() {
                for &v in &bucket[i + 1..] {
                    let first = labels[u]
                        .iter()
                        .find(|x| labels[v].binary_search(x).is_ok());
                    if first == Some(&l) {
                        *weights.entry((u, v)).or_insert(0.0) +=
                            gamma * jaccard(&labels[u], &labels[v])?;
                    }
                }
            }
        }
    }
    let sim = EdgeSimilarity::from_pairs(n, weights.into_iter().map(|((u, v), w)| (u, v, w)))?;
    WeightedCompleteGraph::new(sim, gamma)
}

pub fn bl_den(ml: &MultilayerGraph, gamma: f64) -> Result<BaselineResult> {
    let wg = bl_den_weights(ml, gamma)?;
    let (selected, ratio) = densest_weighted_subgraph(&wg)?;
    Ok(BaselineResult {
        edge_set: ml.graph().induced_by_nodes(&selected),
        selected,
        ratio,
    })
}

/// Number of pairs `bl_sim` would materialize for `gamma > 0`.
pub fn bl_sim_pair_estimate(graph: &Graph, sim: &EdgeSimilarity) -> usize {
    let adjacent: usize = (0..graph.node_count())
        .map(|v| graph.degree(v) * graph.degree(v).saturating_sub(1) / 2)
        .sum();
    sim.pair_count() + adjacent
}

/// Edge-pair weights `s(e, f) + gamma * [e, f share a node]`.
pub fn bl_sim_weights(
    graph: &Graph,
    sim: &EdgeSimilarity,
    gamma: f64,
) -> Result<WeightedCompleteGraph> {
    let gamma = check_nonnegative("gamma", gamma)?;
    if gamma == 0.0 {
        return WeightedCompleteGraph::new(sim.clone(), gamma);
    }
    // In a simple graph two edges share at most one node, so each adjacent
    // pair is produced once.
    let mut adjacent: Vec<(usize, usize)> = Vec::new();
    for v in 0..graph.node_count() {
        let inc = graph.incident_edges(v);
        for (i, &a) in inc.iter().enumerate() {
            for &b in &inc[i + 1..] {
                adjacent.push((a.min(b), a.max(b)));
            }
        }
    }
    adjacent.sort_unstable();
    let mut merged = Vec::with_capacity(adjacent.len() + sim.pair_count());
    let mut adj = adjacent.into_iter().peekable();
    for (a, b, s) in sim.pairs() {
        while let Some(&(x, y)) = adj.peek() {
            if (x, y) >= (a, b) {
                break;
            }
            merged.push((x, y, gamma));
            adj.next();
        }
        if adj.peek() == Some(&(a, b)) {
            adj.next();
            merged.push((a, b, s + gamma));
        } else {
            merged.push((a, b, s));
        }
    }
    merged.extend(adj.map(|(x, y)| (x, y, gamma)));
    WeightedCompleteGraph::new(
        EdgeSimilarity::from_pairs(graph.edge_count(), merged)?,
        gamma,
    )
}

pub fn bl_sim(graph: &Graph, sim: &EdgeSimilarity, gamma: f64) -> Result<BaselineResult> {
    let wg = bl_sim_weights(graph, sim, gamma)?;
    let (selected, ratio) = densest_weighted_subgraph(&wg)?;
    Ok(BaselineResult {
        edge_set: EdgeSet::new(graph, selected.iter().copied())?,
        selected,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::parse_multiplex;

    #[test]
    fn densest_examples() {
        // Triangle of weight 1 plus a pendant pair of weight 0.1.
        let w = EdgeSimilarity::from_pairs(4, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (2, 3, 0.1)])
            .unwrap();
        let (set, ratio) =
            densest_weighted_subgraph(&WeightedCompleteGraph::new(w, 0.0).unwrap()).unwrap();
        assert_eq!(set, vec![0, 1, 2]);
        assert!((ratio - 1.0).abs() < 1e-12);

        let w = EdgeSimilarity::from_pairs(3, [(0, 2, 2.0)]).unwrap();
        let (set, ratio) =
            densest_weighted_subgraph(&WeightedCompleteGraph::new(w, 0.0).unwrap()).unwrap();
        assert_eq!(set, vec![0, 2]);
        assert!((ratio - 1.0).abs() < 1e-12);

        let n = 6;
        let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b, 0.3)));
        let w = EdgeSimilarity::from_pairs(n, pairs).unwrap();
        let (set, ratio) =
            densest_weighted_subgraph(&WeightedCompleteGraph::new(w, 0.0).unwrap()).unwrap();
        assert_eq!(set, (0..n).collect::<Vec<_>>());
        assert!((ratio - 0.3 * 5.0 / 2.0).abs() < 1e-12);

        let zero = WeightedCompleteGraph::new(EdgeSimilarity::empty(3), 0.0).unwrap();
        assert!(matches!(
            densest_weighted_subgraph(&zero),
            Err(Error::NoNonzeroSimilarity)
        ));
    }

    #[test]
    fn bl_den_finds_the_clique() {
        let ml =
            parse_multiplex("1 a b\n1 a c\n1 a d\n1 b c\n1 b d\n1 c d\n1 e f\n1 g h\n").unwrap();
        let result = bl_den(&ml, 0.0).unwrap();
        assert_eq!(result.edge_set.members(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(result.selected, vec![0, 1, 2, 3]);
        assert!((result.ratio - 1.5).abs() < 1e-12);
    }

    #[test]
    fn bl_den_gamma_favors_shared_layers() {
        // a-b share both layers; every other pair is a single-layer edge.
        let ml = parse_multiplex("1 a b\n2 a b\n1 c d\n1 d e\n1 c e\n3 x y\n").unwrap();
        let wg = bl_den_weights(&ml, 1.0).unwrap();
        assert_eq!(wg.weights().value(0, 1), 2.0);
        let result = bl_den(&ml, 1000.0).unwrap();
        assert!(result.selected.contains(&0) && result.selected.contains(&1));
    }

    #[test]
    fn bl_sim_weights_merge_adjacency() {
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let sim = EdgeSimilarity::from_pairs(3, [(0, 1, 0.5), (0, 2, 0.25)]).unwrap();
        let wg = bl_sim_weights(&g, &sim, 2.0).unwrap();
        assert_eq!(wg.weights().value(0, 1), 2.5);
        assert_eq!(wg.weights().value(1, 2), 2.0);
        assert_eq!(wg.weights().value(0, 2), 0.25);
        assert_eq!(bl_sim_pair_estimate(&g, &sim), 4);
    }

    #[test]
    fn bl_sim_large_gamma_picks_the_triangle() {
        // Triangle with no similarity, and a distant path whose two edges
        // are similar.
        let g = Graph::new(7, [(0, 1), (1, 2), (0, 2), (3, 4), (5, 6)]).unwrap();
        let sim = EdgeSimilarity::from_pairs(5, [(3, 4, 1.0)]).unwrap();
        let result = bl_sim(&g, &sim, 100.0).unwrap();
        assert_eq!(result.edge_set.members(), &[0, 1, 2]);
        let result = bl_sim(&g, &sim, 0.0).unwrap();
        assert_eq!(result.edge_set.members(), &[3, 4]);
    }
}
