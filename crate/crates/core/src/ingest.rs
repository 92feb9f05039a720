//! Multiplex edge lists, Jaccard edge similarity, dataset statistics and
//! random instances.
//!
//! Input lines are `layer u v [weight]`, whitespace separated; `#` starts a
//! comment line and blank lines are skipped. Layer and node names are
//! arbitrary tokens, numbered densely in order of first appearance. The
//! weight column is accepted and ignored.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::similarity::EdgeSimilarity;

/// A multiplex network together with its flattened simple graph.
#[derive(Debug, Clone)]
pub struct MultilayerGraph {
    layers: Vec<String>,
    node_names: Vec<String>,
    layer_edges: Vec<Vec<(usize, usize)>>,
    edge_labels: Vec<Vec<usize>>,
    graph: Graph,
}

impl MultilayerGraph {
    /// Builds from `(layer, u, v)` name triples.
    pub fn from_triples<'a>(
        triples: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    ) -> Result<Self> {
        let mut builder = Builder::default();
        for (line, (l, u, v)) in triples.into_iter().enumerate() {
            builder.add(line + 1, l, u, v)?;
        }
        builder.finish()
    }

    pub fn layers(&self) -> &[String] {
        &self.layers
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn node_names(&self) -> &[String] {
        &self.node_names
    }

    pub fn node_name(&self, id: usize) -> &str {
        &self.node_names[id]
    }

    /// Canonical edges of one layer, sorted.
    pub fn layer_edges(&self, layer: usize) -> &[(usize, usize)] {
        &self.layer_edges[layer]
    }

    /// Sorted layer indices of a flattened edge.
    pub fn edge_labels(&self, edge: usize) -> &[usize] {
        &self.edge_labels[edge]
    }

    /// Sorted union of the labels of the edges touching `node`.
    pub fn node_labels(&self, node: usize) -> Vec<usize> {
        let mut labels: Vec<usize> = self
            .graph
            .incident_edges(node)
            .iter()
            .flat_map(|&e| self.edge_labels[e].iter().copied())
            .collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }

    /// The flattened graph; edge ids follow first appearance in the input.
    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

#[derive(Default)]
struct Builder {
    layer_index: HashMap<String, usize>,
    node_index: HashMap<String, usize>,
    layers: Vec<String>,
    node_names: Vec<String>,
    layer_sets: Vec<std::collections::HashSet<(usize, usize)>>,
    edge_index: HashMap<(usize, usize), usize>,
    edges: Vec<(usize, usize)>,
    edge_labels: Vec<Vec<usize>>,
}

impl Builder {
    fn intern(index: &mut HashMap<String, usize>, names: &mut Vec<String>, name: &str) -> usize {
        if let Some(&id) = index.get(name) {
            return id;
        }
        let id = names.len();
        index.insert(name.to_owned(), id);
        names.push(name.to_owned());
        id
    }

    fn add(&mut self, line: usize, layer: &str, u: &str, v: &str) -> Result<()> {
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("self-loop on node {u}"),
            });
        }
        let l = Self::intern(&mut self.layer_index, &mut self.layers, layer);
        if l == self.layer_sets.len() {
            self.layer_sets.push(Default::default());
        }
        let a = Self::intern(&mut self.node_index, &mut self.node_names, u);
        let b = Self::intern(&mut self.node_index, &mut self.node_names, v);
        let edge = (a.min(b), a.max(b));
        if !self.layer_sets[l].insert(edge) {
            return Ok(());
        }
        let next = self.edges.len();
        let id = *self.edge_index.entry(edge).or_insert(next);
        if id == next {
            self.edges.push(edge);
            self.edge_labels.push(Vec::new());
        }
        self.edge_labels[id].push(l);
        Ok(())
    }

    fn finish(self) -> Result<MultilayerGraph> {
        if self.edges.len() < 2 {
            return Err(Error::TooFewEdges(self.edges.len()));
        }
        let graph = Graph::new(self.node_names.len(), self.edges)?;
        let layer_edges = self
            .layer_sets
            .into_iter()
            .map(|set| {
                let mut edges: Vec<_> = set.into_iter().collect();
                edges.sort_unstable();
                edges
            })
            .collect();
        let edge_labels = self
            .edge_labels
            .into_iter()
            .map(|mut labels| {
                labels.sort_unstable();
                labels
            })
            .collect();
        Ok(MultilayerGraph {
            layers: self.layers,
            node_names: self.node_names,
            layer_edges,
            edge_labels,
            graph,
        })
    }
}

fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .map(|(i, line)| line.map(|l| (i + 1, l)).map_err(Error::from))
        .filter(|r| match r {
            Ok((_, l)) => {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            }
            Err(_) => true,
        })
}

/// Parses a multiplex edge list.
pub fn parse_multiplex(text: &str) -> Result<MultilayerGraph> {
    parse_multiplex_reader(text.as_bytes())
}

pub fn parse_multiplex_reader<R: BufRead>(reader: R) -> Result<MultilayerGraph> {
    let mut builder = Builder::default();
    for item in data_lines(reader) {
        let (line, text) = item?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 3 && tokens.len() != 4 {
            return Err(Error::Parse {
                line,
                message: format!(
                    "expected 'layer u v [weight]', found {} fields",
                    tokens.len()
                ),
            });
        }
        if let Some(w) = tokens.get(3) {
            if w.parse::<f64>().is_err() {
                return Err(Error::Parse {
                    line,
                    message: format!("invalid weight '{w}'"),
                });
            }
        }
        builder.add(line, tokens[0], tokens[1], tokens[2])?;
    }
    builder.finish()
}

/// `|A & B| / |A | B|` for sorted, duplicate-free slices.
pub fn jaccard<T: Ord>(a: &[T], b: &[T]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyLabelSet);
    }
    let common = intersection_size(a, b);
    Ok(common as f64 / (a.len() + b.len() - common) as f64)
}

fn intersection_size<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn first_common<T: Ord + Copy>(a: &[T], b: &[T]) -> Option<T> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

/// Jaccard similarity of the layer sets of every pair of flattened edges
/// sharing at least one layer. Other pairs are zero and not stored.
pub fn build_similarity(ml: &MultilayerGraph) -> Result<(Graph, EdgeSimilarity)> {
    let m = ml.graph.edge_count();
    let mut buckets = vec![Vec::new(); ml.layer_count()];
    for e in 0..m {
        for &l in &ml.edge_labels[e] {
            buckets[l].push(e);
        }
    }
    // Each pair is emitted from the first layer it shares.
    let pairs: Vec<(usize, usize, f64)> = buckets
        .iter()
        .enumerate()
        .flat_map(|(l, bucket)| {
            (0..bucket.len())
                .into_par_iter()
                .flat_map_iter(move |i| {
                    let a = bucket[i];
                    bucket[i + 1..].iter().filter_map(move |&b| {
                        let (la, lb) = (&ml.edge_labels[a], &ml.edge_labels[b]);
                        (first_common(la, lb) == Some(l)).then(|| {
                            let common = intersection_size(la, lb);
                            (a, b, common as f64 / (la.len() + lb.len() - common) as f64)
                        })
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let sim = EdgeSimilarity::from_pairs(m, pairs)?;
    Ok((ml.graph.clone(), sim))
}

/// Summary statistics of a multiplex dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub num_nodes: usize,
    pub num_edges: usize,
    pub num_layers: usize,
    pub avg_edges_per_layer: f64,
    pub num_mult_edges: usize,
    pub num_meta_pairs: usize,
    pub density: f64,
    pub avg_layer_density: f64,
    pub similarity: f64,
    pub avg_edge_participation: f64,
}

pub fn stats(ml: &MultilayerGraph, graph: &Graph, sim: &EdgeSimilarity) -> DatasetStats {
    let num_layers = ml.layer_count();
    let num_mult_edges: usize = ml.layer_edges.iter().map(Vec::len).sum();
    let layer_density = |edges: &[(usize, usize)]| {
        let mut nodes: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        nodes.sort_unstable();
        nodes.dedup();
        edges.len() as f64 / nodes.len() as f64
    };
    let avg_layer_density =
        ml.layer_edges.iter().map(|e| layer_density(e)).sum::<f64>() / num_layers as f64;
    let num_edges = graph.edge_count();
    let num_nodes = (0..graph.node_count())
        .filter(|&v| graph.degree(v) > 0)
        .count();
    DatasetStats {
        num_nodes,
        num_edges,
        num_layers,
        avg_edges_per_layer: num_mult_edges as f64 / num_layers as f64,
        num_mult_edges,
        num_meta_pairs: sim.pair_count(),
        density: num_edges as f64 / num_nodes as f64,
        avg_layer_density,
        similarity: sim.pair_sum() / num_edges as f64,
        avg_edge_participation: num_mult_edges as f64 / num_edges as f64,
    }
}

/// Walks lexicographically ordered pairs `(a, b)`, `a < b < n`, by
/// increasing rank.
struct PairCursor {
    n: usize,
    row: usize,
    row_start: u64,
}

impl PairCursor {
    fn new(n: usize) -> Self {
        Self {
            n,
            row: 0,
            row_start: 0,
        }
    }

    fn pair(&mut self, rank: u64) -> (usize, usize) {
        loop {
            let row_len = (self.n - 1 - self.row) as u64;
            if rank < self.row_start + row_len {
                return (self.row, self.row + 1 + (rank - self.row_start) as usize);
            }
            self.row_start += row_len;
            self.row += 1;
        }
    }
}

/// Uniform random graph with `m` distinct edges on `n` nodes, each edge pair
/// independently similar with probability `p_sim` with a value uniform on
/// `(0, 1]`. Nodes are renumbered by first appearance in the edge list, so
/// writing the instance out and reading it back reproduces it exactly.
pub fn generate_random(
    n: usize,
    m: usize,
    p_sim: f64,
    seed: u64,
) -> Result<(Graph, EdgeSimilarity)> {
    if m < 2 {
        return Err(Error::TooFewEdges(m));
    }
    let slots = (n as u64) * (n.saturating_sub(1) as u64) / 2;
    if (m as u64) > slots {
        return Err(Error::InfeasibleInstance { nodes: n, edges: m });
    }
    if !(0.0..=1.0).contains(&p_sim) {
        return Err(Error::NegativeParameter {
            name: "p_sim",
            value: p_sim,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let slots =
        usize::try_from(slots).map_err(|_| Error::InfeasibleInstance { nodes: n, edges: m })?;
    let mut ranks = index::sample(&mut rng, slots, m).into_vec();
    ranks.sort_unstable();
    let mut cursor = PairCursor::new(n);
    let mut relabel = vec![usize::MAX; n];
    let mut next = 0;
    let mut edges = Vec::with_capacity(m);
    for rank in ranks {
        let (u, v) = cursor.pair(rank as u64);
        for w in [u, v] {
            if relabel[w] == usize::MAX {
                relabel[w] = next;
                next += 1;
            }
        }
        edges.push((relabel[u], relabel[v]));
    }
    let graph = Graph::new(next, edges)?;

    let total = (m as u64) * (m as u64 - 1) / 2;
    let mut pairs = Vec::new();
    if p_sim > 0.0 {
        let gap = Geometric::new(p_sim).map_err(|_| Error::NegativeParameter {
            name: "p_sim",
            value: p_sim,
        })?;
        let mut cursor = PairCursor::new(m);
        let mut rank = gap.sample(&mut rng);
        while rank < total {
            let (a, b) = cursor.pair(rank);
            pairs.push((a, b, 1.0 - rng.random::<f64>()));
            rank = rank.saturating_add(1).saturating_add(gap.sample(&mut rng));
        }
    }
    let sim = EdgeSimilarity::from_pairs(m, pairs)?;
    Ok((graph, sim))
}

/// Writes the graph as a single-layer edge list, `1 u v` per line.
pub fn write_edge_list<W: Write>(mut out: W, graph: &Graph) -> std::io::Result<()> {
    for &(u, v) in graph.edges() {
        writeln!(out, "1 {u} {v}")?;
    }
    Ok(())
}

/// Writes stored pairs as `e_i e_j s` lines with shortest round-trip values.
pub fn write_similarity<W: Write>(mut out: W, sim: &EdgeSimilarity) -> std::io::Result<()> {
    for (a, b, w) in sim.pairs() {
        writeln!(out, "{a} {b} {w}")?;
    }
    Ok(())
}

/// Reads `e_i e_j s` lines over `edge_count` edges.
pub fn read_similarity<R: BufRead>(reader: R, edge_count: usize) -> Result<EdgeSimilarity> {
    let mut pairs = Vec::new();
    for item in data_lines(reader) {
        let (line, text) = item?;
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let parsed = match tokens.as_slice() {
            [a, b, s] => match (a.parse::<usize>(), b.parse::<usize>(), s.parse::<f64>()) {
                (Ok(a), Ok(b), Ok(s)) => Some((a, b, s)),
                _ => None,
            },
            _ => None,
        };
        let Some((a, b, s)) = parsed else {
            return Err(Error::Parse {
                line,
                message: "expected 'e_i e_j s'".to_owned(),
            });
        };
        if a >= edge_count || b >= edge_count || a == b || !s.is_finite() || s < 0.0 {
            return Err(Error::Parse {
                line,
                message: format!("invalid similarity entry ({a}, {b}, {s})"),
            });
        }
        pairs.push((a, b, s));
    }
    EdgeSimilarity::from_pairs(edge_count, pairs)
}
