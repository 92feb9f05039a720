//! The linearized subproblem `Q(X | c) = sum_{pairs in X} w - lambda |V(X)| - c |X|`
//! solved as a minimum cut.
//!
//! Network layout: source `0`, sink `1`, one node per element, and (when a
//! cover is present) one node per coverable node. Element pairs are joined
//! in both directions with capacity `w / 2`, each element points to the
//! nodes it covers with infinite capacity, and covered nodes drain into the
//! sink with capacity `lambda`. Every element gets a source arc of capacity
//! `max(0, w_total / 2 - c)` and a sink arc of capacity
//! `max(0, c - w_total / 2)`; only one of them is positive. Shifting a
//! negative source capacity onto the sink arc adds the same constant to
//! every cut, which is subtracted back out of the reported cut value.

use crate::error::{check_nonnegative, Error, Result};
use crate::graph::Graph;
use crate::mincut::{Capacity, FlowNetwork, ParametricMinCut};
use crate::similarity::EdgeSimilarity;

const SOURCE: usize = 0;
const SINK: usize = 1;

/// Element-to-node coverage, e.g. graph edges covering their endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    node_count: usize,
    offsets: Vec<usize>,
    nodes: Vec<usize>,
}

impl Cover {
    pub fn new(node_count: usize, lists: &[Vec<usize>]) -> Result<Self> {
        let mut offsets = vec![0];
        let mut nodes = Vec::new();
        for list in lists {
            let mut list = list.clone();
            list.sort_unstable();
            list.dedup();
            if let Some(&id) = list.iter().find(|&&v| v >= node_count) {
                return Err(Error::InvalidNodeId { id, node_count });
            }
            nodes.extend(list);
            offsets.push(nodes.len());
        }
        Ok(Self {
            node_count,
            offsets,
            nodes,
        })
    }

    /// Each edge covers its two endpoints.
    pub fn from_graph(graph: &Graph) -> Self {
        let mut offsets = Vec::with_capacity(graph.edge_count() + 1);
        let mut nodes = Vec::with_capacity(2 * graph.edge_count());
        offsets.push(0);
        for &(u, v) in graph.edges() {
            nodes.extend([u, v]);
            offsets.push(nodes.len());
        }
        Self {
            node_count: graph.node_count(),
            offsets,
            nodes,
        }
    }

    pub fn element_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn covered(&self, element: usize) -> &[usize] {
        &self.nodes[self.offsets[element]..self.offsets[element + 1]]
    }

    /// Number of distinct nodes covered by `elements`.
    pub fn cover_size(&self, elements: &[usize]) -> usize {
        let mut seen = vec![false; self.node_count];
        let mut count = 0;
        for &e in elements {
            for &v in self.covered(e) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                }
            }
        }
        count
    }
}

/// One instance of the linearized problem.
#[derive(Debug, Clone, Copy)]
pub struct QInstance<'a> {
    weights: &'a EdgeSimilarity,
    cover: Option<&'a Cover>,
    lambda: f64,
    c: f64,
}

impl<'a> QInstance<'a> {
    /// A cover-free instance (no node penalty).
    pub fn new(weights: &'a EdgeSimilarity, c: f64) -> Self {
        Self {
            weights,
            cover: None,
            lambda: 0.0,
            c,
        }
    }

    /// Adds a node penalty `lambda` per covered node.
    pub fn with_cover(mut self, cover: &'a Cover, lambda: f64) -> Result<Self> {
        check_nonnegative("lambda", lambda)?;
        if cover.element_count() != self.weights.element_count() {
            return Err(Error::InvalidNetwork(format!(
                "cover has {} elements, weights have {}",
                cover.element_count(),
                self.weights.element_count()
            )));
        }
        self.cover = Some(cover);
        self.lambda = lambda;
        Ok(self)
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn element_count(&self) -> usize {
        self.weights.element_count()
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn weights(&self) -> &'a EdgeSimilarity {
        self.weights
    }

    pub fn cover(&self) -> Option<&'a Cover> {
        self.cover
    }

    /// `sum_{pairs in X} w - lambda |V(X)|`.
    pub fn numerator(&self, selected: &[usize]) -> f64 {
        let mut mask = vec![false; self.element_count()];
        for &e in selected {
            mask[e] = true;
        }
        let pairs = self.weights.pair_sum_within(selected, &mask);
        let penalty = match self.cover {
            Some(cover) => self.lambda * cover.cover_size(selected) as f64,
            None => 0.0,
        };
        pairs - penalty
    }

    /// `Q(X | c)` evaluated directly.
    pub fn evaluate(&self, selected: &[usize]) -> f64 {
        self.numerator(selected) - self.c * selected.len() as f64
    }
}

/// The network built for a [`QInstance`] and the ids needed to read it.
#[derive(Debug, Clone)]
pub struct QNetwork {
    pub network: FlowNetwork,
    pub element_offset: usize,
    pub cover_offset: Option<usize>,
    /// Sum of the sink-arc capacities, i.e. the constant every cut carries
    /// on top of the unshifted cut value.
    pub shift: f64,
}

fn terminal_capacities(half_total: f64, c: f64) -> (f64, f64) {
    let diff = half_total - c;
    if diff >= 0.0 {
        (diff, 0.0)
    } else {
        (0.0, -diff)
    }
}

/// Builds the flow network for `q`. Parametric arcs are registered per
/// element as `[source arc, sink arc]`.
pub fn build_flow_graph(q: &QInstance<'_>) -> Result<QNetwork> {
    let m = q.element_count();
    let cover_nodes = q.cover.map_or(0, |c| c.node_count());
    let element_offset = 2;
    let cover_offset = q.cover.map(|_| 2 + m);
    let mut net = FlowNetwork::new(2 + m + cover_nodes, SOURCE, SINK)?;
    let mut shift = 0.0;
    for e in 0..m {
        let (to_source, to_sink) = terminal_capacities(0.5 * q.weights.total(e), q.c);
        net.add_parametric_arc(SOURCE, element_offset + e, to_source)?;
        net.add_parametric_arc(element_offset + e, SINK, to_sink)?;
        shift += to_sink;
    }
    for (a, b, w) in q.weights.pairs() {
        let half = Capacity::Finite(0.5 * w);
        net.add_arc(element_offset + a, element_offset + b, half)?;
        net.add_arc(element_offset + b, element_offset + a, half)?;
    }
    if let (Some(cover), Some(offset)) = (q.cover, cover_offset) {
        for e in 0..m {
            for &v in cover.covered(e) {
                net.add_arc(element_offset + e, offset + v, Capacity::Infinite)?;
            }
        }
        for v in 0..cover.node_count() {
            net.add_arc(offset + v, SINK, Capacity::Finite(q.lambda))?;
        }
    }
    Ok(QNetwork {
        network: net,
        element_offset,
        cover_offset,
        shift,
    })
}

/// Result of one Q solve.
#[derive(Debug, Clone, PartialEq)]
pub struct QSolution {
    /// Selected elements (sorted): the maximal optimal set.
    pub selected: Vec<usize>,
    /// `-C* + sum_pairs w - c * |elements|`.
    pub q_value: f64,
    /// Minimum cut value of the unshifted network (source capacities
    /// `w_total / 2 - c`, possibly negative).
    pub cut_value: f64,
    /// Cover nodes on the source side of the cut.
    pub covered_nodes: Vec<usize>,
}

/// Solves a single instance from scratch.
pub fn solve_q(q: &QInstance<'_>) -> Result<QSolution> {
    QSolver::new(q)?.solve()
}

/// Solver for a sequence of instances differing only in a non-decreasing
/// `c`; the min-cut state is reused between solves.
#[derive(Debug, Clone)]
pub struct QSolver<'a> {
    instance: QInstance<'a>,
    layout: QNetwork,
    cut: ParametricMinCut,
}

impl<'a> QSolver<'a> {
    pub fn new(q: &QInstance<'a>) -> Result<Self> {
        let layout = build_flow_graph(q)?;
        let cut = ParametricMinCut::new(layout.network.clone())?;
        Ok(Self {
            instance: *q,
            layout,
            cut,
        })
    }

    pub fn instance(&self) -> &QInstance<'a> {
        &self.instance
    }

    /// Moves to a new `c`, which must not be smaller than the current one.
    pub fn set_c(&mut self, c: f64) -> Result<()> {
        if c < self.instance.c {
            return Err(Error::MonotonicityViolated {
                arc: 0,
                old: self.instance.c,
                new: c,
            });
        }
        let weights = self.instance.weights;
        let mut caps = Vec::with_capacity(2 * weights.element_count());
        let mut shift = 0.0;
        for e in 0..weights.element_count() {
            let (to_source, to_sink) = terminal_capacities(0.5 * weights.total(e), c);
            caps.push(to_source);
            caps.push(to_sink);
            shift += to_sink;
        }
        self.cut.update_parametric(&caps)?;
        self.instance.c = c;
        self.layout.shift = shift;
        Ok(())
    }

    pub fn solve(&mut self) -> Result<QSolution> {
        let cut = self.cut.solve()?;
        let q = &self.instance;
        let m = q.element_count();
        let selected: Vec<usize> = (0..m)
            .filter(|&e| cut.in_source_side(self.layout.element_offset + e))
            .collect();
        let covered_nodes = match (q.cover, self.layout.cover_offset) {
            (Some(cover), Some(offset)) => (0..cover.node_count())
                .filter(|&v| cut.in_source_side(offset + v))
                .collect(),
            _ => Vec::new(),
        };
        let cut_value = cut.cut_value - self.layout.shift;
        let q_value = -cut_value + q.weights.pair_sum() - q.c * m as f64;
        Ok(QSolution {
            selected,
            q_value,
            cut_value,
            covered_nodes,
        })
    }
}
