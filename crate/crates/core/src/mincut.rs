//! Maximum flow / minimum cut with monotone parametric re-solves.
//!
//! The engine is a highest-label push-relabel solver with gap relabeling and
//! periodic global relabeling. It runs on the reversed network (arcs
//! flipped, source and sink swapped), where shrinking original source arcs
//! and growing original sink arcs keeps the previous preflow valid, so it is
//! reused as a warm start.
//!
//! The returned cut side is the maximal source set of the original network:
//! every node with no residual path to the sink.

use std::collections::VecDeque;
use std::io::{self, Write};

use crate::error::{Error, Result};

/// Arc capacity. `Infinite` is structural and never enters arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Capacity {
    Finite(f64),
    Infinite,
}

impl Capacity {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            Capacity::Finite(c) => Some(c),
            Capacity::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Capacity::Infinite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: Capacity,
}

/// Which end of the network a parametric arc is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParametricSide {
    /// `source -> v`; capacity may only decrease between solves.
    Source,
    /// `v -> sink`; capacity may only increase between solves.
    Sink,
}

/// Directed capacitated network with a designated source and sink.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    node_count: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
    parametric: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(node_count: usize, source: usize, sink: usize) -> Result<Self> {
        if source >= node_count || sink >= node_count || source == sink {
            return Err(Error::InvalidNetwork(format!(
                "source {source} and sink {sink} must be distinct nodes below {node_count}"
            )));
        }
        Ok(Self {
            node_count,
            source,
            sink,
            arcs: Vec::new(),
            parametric: Vec::new(),
        })
    }

    /// Adds an arc and returns its id. Arcs into the source, out of the sink,
    /// and infinite arcs touching either terminal are rejected, so the cut
    /// `{source}` is always finite.
    pub fn add_arc(&mut self, from: usize, to: usize, capacity: Capacity) -> Result<usize> {
        if from >= self.node_count || to >= self.node_count || from == to {
            return Err(Error::InvalidNetwork(format!("bad arc {from} -> {to}")));
        }
        if to == self.source || from == self.sink {
            return Err(Error::InvalidNetwork(format!(
                "arc {from} -> {to} enters the source or leaves the sink"
            )));
        }
        match capacity {
            Capacity::Finite(c) if !(c.is_finite() && c >= 0.0) => {
                return Err(Error::InvalidNetwork(format!(
                    "arc {from} -> {to} has capacity {c}"
                )));
            }
            Capacity::Infinite if from == self.source || to == self.sink => {
                return Err(Error::InvalidNetwork(format!(
                    "infinite arc {from} -> {to} touches a terminal"
                )));
            }
            _ => {}
        }
        self.arcs.push(Arc { from, to, capacity });
        Ok(self.arcs.len() - 1)
    }

    /// Adds a finite arc out of the source or into the sink whose capacity
    /// can be rewritten by [`ParametricMinCut::update_parametric`].
    pub fn add_parametric_arc(&mut self, from: usize, to: usize, capacity: f64) -> Result<usize> {
        if from != self.source && to != self.sink {
            return Err(Error::InvalidNetwork(format!(
                "parametric arc {from} -> {to} must leave the source or enter the sink"
            )));
        }
        let id = self.add_arc(from, to, Capacity::Finite(capacity))?;
        self.parametric.push(id);
        Ok(id)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Arc ids of the parametric arcs, in registration order.
    pub fn parametric_arcs(&self) -> &[usize] {
        &self.parametric
    }

    pub fn parametric_side(&self, arc: usize) -> ParametricSide {
        if self.arcs[arc].from == self.source {
            ParametricSide::Source
        } else {
            ParametricSide::Sink
        }
    }

    /// Current capacities of the parametric arcs.
    pub fn parametric_capacities(&self) -> Vec<f64> {
        self.parametric
            .iter()
            .map(|&a| self.arcs[a].capacity.finite().unwrap_or(0.0))
            .collect()
    }

    /// Writes the network in DIMACS max-flow format (1-based node ids).
    /// Infinite arcs are written with a capacity exceeding the sum of all
    /// finite capacities, which no finite cut can reach.
    pub fn write_dimacs<W: Write>(&self, mut out: W) -> io::Result<()> {
        let finite_sum: f64 = self.arcs.iter().filter_map(|a| a.capacity.finite()).sum();
        let big = (finite_sum + 1.0).ceil();
        writeln!(
            out,
            "c densim flow network; infinite capacity written as {big}"
        )?;
        writeln!(out, "p max {} {}", self.node_count, self.arcs.len())?;
        writeln!(out, "n {} s", self.source + 1)?;
        writeln!(out, "n {} t", self.sink + 1)?;
        for arc in &self.arcs {
            let cap = arc.capacity.finite().unwrap_or(big);
            writeln!(out, "a {} {} {}", arc.from + 1, arc.to + 1, cap)?;
        }
        Ok(())
    }

    fn max_finite_capacity(&self) -> f64 {
        self.arcs
            .iter()
            .filter_map(|a| a.capacity.finite())
            .fold(0.0, f64::max)
    }
}

/// A minimum cut together with the maximum flow value.
#[derive(Debug, Clone, PartialEq)]
pub struct CutResult {
    pub cut_value: f64,
    pub flow_value: f64,
    source_side: Vec<bool>,
}

impl CutResult {
    pub fn in_source_side(&self, node: usize) -> bool {
        self.source_side[node]
    }

    /// Sorted node ids on the source side (includes the source).
    pub fn source_side(&self) -> Vec<usize> {
        self.source_side
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn source_mask(&self) -> &[bool] {
        &self.source_side
    }
}

/// Solves a network once from scratch.
pub fn min_cut(net: &FlowNetwork) -> Result<CutResult> {
    ParametricMinCut::new(net.clone())?.solve()
}

/// A network plus retained solver state for monotone re-solves.
#[derive(Debug, Clone)]
pub struct ParametricMinCut {
    net: FlowNetwork,
    engine: PushRelabel,
}

impl ParametricMinCut {
    pub fn new(net: FlowNetwork) -> Result<Self> {
        let engine = PushRelabel::new(&net);
        Ok(Self { net, engine })
    }

    pub fn network(&self) -> &FlowNetwork {
        &self.net
    }

    /// Rewrites the parametric capacities (one value per parametric arc, in
    /// registration order). Source-side arcs may only decrease and sink-side
    /// arcs may only increase; the flow from the previous solve is kept.
    pub fn update_parametric(&mut self, capacities: &[f64]) -> Result<()> {
        if capacities.len() != self.net.parametric.len() {
            return Err(Error::InvalidNetwork(format!(
                "expected {} parametric capacities, got {}",
                self.net.parametric.len(),
                capacities.len()
            )));
        }
        for (&arc, &new) in self.net.parametric.iter().zip(capacities) {
            let old = self.net.arcs[arc].capacity.finite().unwrap_or(0.0);
            let ok = new.is_finite()
                && new >= 0.0
                && match self.net.parametric_side(arc) {
                    ParametricSide::Source => new <= old,
                    ParametricSide::Sink => new >= old,
                };
            if !ok {
                return Err(Error::MonotonicityViolated { arc, old, new });
            }
        }
        for (&arc, &new) in self.net.parametric.iter().zip(capacities) {
            self.net.arcs[arc].capacity = Capacity::Finite(new);
            self.engine.set_capacity(arc, new);
        }
        self.engine.rescale(&self.net);
        Ok(())
    }

    /// Computes the maximum flow (reusing prior flow) and the maximal
    /// source-side minimum cut.
    pub fn solve(&mut self) -> Result<CutResult> {
        self.engine.run();
        let reach = self.engine.reachable_from_source();
        // The original source side is everything that cannot reach the
        // original sink, i.e. everything the reversed source cannot reach.
        let source_side: Vec<bool> = reach.iter().map(|&r| !r).collect();
        let mut cut_value = 0.0;
        for arc in &self.net.arcs {
            if source_side[arc.from] && !source_side[arc.to] {
                match arc.capacity {
                    Capacity::Finite(c) => cut_value += c,
                    Capacity::Infinite => return Err(Error::InfiniteCut),
                }
            }
        }
        Ok(CutResult {
            cut_value,
            flow_value: self.engine.flow_value(),
            source_side,
        })
    }
}

/// Push-relabel state on the reversed network.
///
/// Network arc `k` (`x -> y`) becomes internal arc `2k` (`y -> x`, same
/// capacity) and its residual twin `2k + 1` (`x -> y`, capacity 0).
#[derive(Debug, Clone)]
struct PushRelabel {
    n: usize,
    src: usize,
    snk: usize,
    head: Vec<u32>,
    cap: Vec<f64>,
    unbounded: Vec<bool>,
    flow: Vec<f64>,
    adj_start: Vec<usize>,
    adj: Vec<u32>,
    excess: Vec<f64>,
    label: Vec<usize>,
    current: Vec<usize>,
    count: Vec<usize>,
    buckets: Vec<Vec<u32>>,
    active: Vec<bool>,
    highest: usize,
    eps: f64,
}

impl PushRelabel {
    fn new(net: &FlowNetwork) -> Self {
        let n = net.node_count;
        let m = net.arcs.len();
        let mut head = vec![0u32; 2 * m];
        let mut tail = vec![0usize; 2 * m];
        let mut cap = vec![0.0; 2 * m];
        let mut unbounded = vec![false; 2 * m];
        for (k, arc) in net.arcs.iter().enumerate() {
            tail[2 * k] = arc.to;
            head[2 * k] = arc.from as u32;
            tail[2 * k + 1] = arc.from;
            head[2 * k + 1] = arc.to as u32;
            match arc.capacity {
                Capacity::Finite(c) => cap[2 * k] = c,
                Capacity::Infinite => unbounded[2 * k] = true,
            }
        }
        let mut adj_start = vec![0usize; n + 1];
        for &t in &tail {
            adj_start[t + 1] += 1;
        }
        for v in 0..n {
            adj_start[v + 1] += adj_start[v];
        }
        let mut fill = adj_start.clone();
        let mut adj = vec![0u32; 2 * m];
        for (a, &t) in tail.iter().enumerate() {
            adj[fill[t]] = a as u32;
            fill[t] += 1;
        }
        let mut engine = Self {
            n,
            src: net.sink,
            snk: net.source,
            head,
            cap,
            unbounded,
            flow: vec![0.0; 2 * m],
            adj_start,
            adj,
            excess: vec![0.0; n],
            label: vec![0; n],
            current: vec![0; n],
            count: vec![0; n],
            buckets: vec![Vec::new(); 2 * n + 1],
            active: vec![false; n],
            highest: 0,
            eps: 0.0,
        };
        engine.rescale(net);
        engine
    }

    fn rescale(&mut self, net: &FlowNetwork) {
        self.eps = 1e-14 * net.max_finite_capacity().max(1.0);
    }

    #[inline]
    fn residual_positive(&self, a: usize) -> bool {
        self.unbounded[a] || self.cap[a] - self.flow[a] > self.eps
    }

    #[inline]
    fn push_amount(&self, a: usize, excess: f64) -> f64 {
        if self.unbounded[a] {
            excess
        } else {
            excess.min(self.cap[a] - self.flow[a])
        }
    }

    fn set_capacity(&mut self, network_arc: usize, new: f64) {
        let a = 2 * network_arc;
        self.cap[a] = new;
        // Clipping only ever happens on arcs into the reversed sink; the
        // surplus goes back to the arc's tail as excess.
        if self.flow[a] > new {
            let surplus = self.flow[a] - new;
            let tail = self.head[a ^ 1] as usize;
            let head = self.head[a] as usize;
            self.flow[a] = new;
            self.flow[a ^ 1] = -new;
            self.excess[tail] += surplus;
            self.excess[head] -= surplus;
        }
    }

    fn flow_value(&self) -> f64 {
        self.excess[self.snk]
    }

    fn saturate_source_arcs(&mut self) {
        let v = self.src;
        for i in self.adj_start[v]..self.adj_start[v + 1] {
            let a = self.adj[i] as usize;
            debug_assert!(!self.unbounded[a]);
            let r = self.cap[a] - self.flow[a];
            if r > 0.0 {
                let w = self.head[a] as usize;
                self.flow[a] += r;
                self.flow[a ^ 1] -= r;
                self.excess[w] += r;
                self.excess[v] -= r;
            }
        }
    }

    /// Exact distance labels: distance to the sink, else `n +` distance to
    /// the source, else `2n`.
    fn global_relabel(&mut self) {
        let n = self.n;
        let unset = usize::MAX;
        self.label.fill(unset);
        let mut queue = VecDeque::new();
        for (root, base) in [(self.snk, 0), (self.src, n)] {
            self.label[root] = base;
            queue.push_back(root);
            while let Some(w) = queue.pop_front() {
                for i in self.adj_start[w]..self.adj_start[w + 1] {
                    let back = self.adj[i] as usize ^ 1;
                    let v = self.head[back ^ 1] as usize;
                    if self.label[v] == unset && self.residual_positive(back) {
                        self.label[v] = self.label[w] + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        for l in self.label.iter_mut() {
            if *l == unset {
                *l = 2 * n;
            }
        }
        self.label[self.src] = n;
        self.label[self.snk] = 0;

        self.count.fill(0);
        for b in self.buckets.iter_mut() {
            b.clear();
        }
        self.active.fill(false);
        self.highest = 0;
        for v in 0..n {
            self.current[v] = self.adj_start[v];
            if self.label[v] < n {
                self.count[self.label[v]] += 1;
            }
            if v != self.src && v != self.snk && self.excess[v] > self.eps {
                self.activate(v);
            }
        }
    }

    #[inline]
    fn activate(&mut self, v: usize) {
        let l = self.label[v];
        if l >= 2 * self.n {
            return;
        }
        self.active[v] = true;
        self.buckets[l].push(v as u32);
        if l > self.highest {
            self.highest = l;
        }
    }

    fn pop_highest(&mut self) -> Option<usize> {
        loop {
            if let Some(v) = self.buckets[self.highest].pop() {
                let v = v as usize;
                if self.active[v] && self.label[v] == self.highest {
                    self.active[v] = false;
                    return Some(v);
                }
                continue;
            }
            if self.highest == 0 {
                return None;
            }
            self.highest -= 1;
        }
    }

    fn run(&mut self) {
        self.saturate_source_arcs();
        self.global_relabel();
        let mut relabels_since_global = 0usize;
        let budget = self.n.max(16);
        while let Some(v) = self.pop_highest() {
            relabels_since_global += self.discharge(v);
            if relabels_since_global >= budget {
                relabels_since_global = 0;
                self.global_relabel();
            }
        }
    }

    /// Pushes the excess out of `v`; returns the number of relabels.
    fn discharge(&mut self, v: usize) -> usize {
        let n = self.n;
        let mut relabels = 0;
        while self.excess[v] > self.eps {
            if self.current[v] == self.adj_start[v + 1] {
                relabels += 1;
                self.relabel(v);
                if self.label[v] >= 2 * n {
                    // Only float residue can strand excess; drop it.
                    self.excess[v] = 0.0;
                    break;
                }
                continue;
            }
            let a = self.adj[self.current[v]] as usize;
            let w = self.head[a] as usize;
            if self.label[v] == self.label[w] + 1 && self.residual_positive(a) {
                let delta = self.push_amount(a, self.excess[v]);
                self.flow[a] += delta;
                self.flow[a ^ 1] -= delta;
                self.excess[v] -= delta;
                self.excess[w] += delta;
                if w != self.src && w != self.snk && !self.active[w] && self.excess[w] > self.eps {
                    self.activate(w);
                }
            } else {
                self.current[v] += 1;
            }
        }
        relabels
    }

    fn relabel(&mut self, v: usize) {
        let n = self.n;
        let old = self.label[v];
        let mut best = 2 * n;
        for i in self.adj_start[v]..self.adj_start[v + 1] {
            let a = self.adj[i] as usize;
            if self.residual_positive(a) {
                best = best.min(self.label[self.head[a] as usize] + 1);
            }
        }
        self.label[v] = best;
        self.current[v] = self.adj_start[v];
        if old < n {
            self.count[old] -= 1;
        }
        if best < n {
            self.count[best] += 1;
        }
        if old < n && self.count[old] == 0 {
            self.gap(old);
        }
    }

    /// No node is left at label `k < n`: nodes above it cannot reach the
    /// sink any more.
    fn gap(&mut self, k: usize) {
        let n = self.n;
        for u in 0..n {
            let l = self.label[u];
            if l > k && l < n {
                self.count[l] -= 1;
                self.label[u] = n + 1;
                if self.active[u] {
                    self.activate(u);
                }
            }
        }
    }

    fn reachable_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[self.src] = true;
        let mut queue = VecDeque::from([self.src]);
        while let Some(v) = queue.pop_front() {
            for i in self.adj_start[v]..self.adj_start[v + 1] {
                let a = self.adj[i] as usize;
                let w = self.head[a] as usize;
                if !seen[w] && self.residual_positive(a) {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}
