//! Undirected simple graphs and edge-induced subgraphs.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Immutable undirected simple graph with dense node and edge indices.
///
/// Edges are stored canonically as `(min, max)`. Construction rejects
/// self-loops and duplicate edges and requires at least two edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    incident: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(node_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut canonical = Vec::new();
        let mut seen = HashSet::new();
        for (u, v) in edges {
            for id in [u, v] {
                if id >= node_count {
                    return Err(Error::InvalidNodeId { id, node_count });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
            canonical.push(e);
        }
        if canonical.len() < 2 {
            return Err(Error::TooFewEdges(canonical.len()));
        }
        let mut incident = vec![Vec::new(); node_count];
        for (id, &(u, v)) in canonical.iter().enumerate() {
            incident[u].push(id);
            incident[v].push(id);
        }
        Ok(Self {
            node_count,
            edges: canonical,
            incident,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    /// Edge ids incident to `node`.
    pub fn incident_edges(&self, node: usize) -> &[usize] {
        &self.incident[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.incident[node].len()
    }

    /// The edge set containing every edge of the graph.
    pub fn full_edge_set(&self) -> EdgeSet {
        EdgeSet::from_sorted_unchecked(self, (0..self.edge_count()).collect())
    }

    /// Edges whose two endpoints are both in `nodes` (node-induced subgraph).
    pub fn induced_by_nodes(&self, nodes: &[usize]) -> EdgeSet {
        let mut mask = vec![false; self.node_count];
        for &v in nodes {
            mask[v] = true;
        }
        let members = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| mask[u] && mask[v])
            .map(|(id, _)| id)
            .collect();
        EdgeSet::from_sorted_unchecked(self, members)
    }
}

/// A subset of graph edges together with its node cover `V(X)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeSet {
    members: Vec<usize>,
    node_cover: Vec<usize>,
}

impl EdgeSet {
    /// Builds an edge set from arbitrary ids; duplicates collapse.
    pub fn new(graph: &Graph, ids: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = ids.into_iter().collect();
        if let Some(&id) = members.iter().find(|&&id| id >= graph.edge_count()) {
            return Err(Error::InvalidEdgeId {
                id,
                edge_count: graph.edge_count(),
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self::from_sorted_unchecked(graph, members))
    }

    pub(crate) fn from_sorted_unchecked(graph: &Graph, members: Vec<usize>) -> Self {
        let mut node_cover: Vec<usize> = members
            .iter()
            .flat_map(|&e| {
                let (u, v) = graph.edge(e);
                [u, v]
            })
            .collect();
        node_cover.sort_unstable();
        node_cover.dedup();
        Self {
            members,
            node_cover,
        }
    }

    /// Sorted edge ids.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Sorted ids of the endpoints of the member edges.
    pub fn node_cover(&self) -> &[usize] {
        &self.node_cover
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.members.binary_search(&edge).is_ok()
    }
}

/// Exact edge-to-node ratio `|X| / |V(X)|`.
///
/// Comparisons cross-multiply the integer pair and never go through floats,
/// so `2/4 == 1/2`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Density {
    pub numerator: u64,
    pub denominator: u64,
}

impl Density {
    pub fn new(numerator: u64, denominator: u64) -> Result<Self> {
        if numerator == 0 || denominator == 0 {
            return Err(Error::EmptyEdgeSet);
        }
        Ok(Self {
            numerator,
            denominator,
        })
    }

    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// `1 / D`, i.e. `|V(X)| / |X|`.
    pub fn inverse(&self) -> f64 {
        self.denominator as f64 / self.numerator as f64
    }

    /// The negated inverse `-1 / D` used by the relaxed objective.
    pub fn negated_inverse(&self) -> f64 {
        -self.inverse()
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Density {}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}
