#![allow(dead_code)]

use densim_core::{Density, EdgeSet, EdgeSimilarity, Graph, Solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random simple graph with `2..=max_edges` edges and random pairwise
/// similarities. `quantized` draws values from `{0.1, 0.2, ..., 1.0}`.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    max_edges: usize,
    quantized: bool,
) -> (Graph, EdgeSimilarity) {
    loop {
        let n = rng.random_range(3..=7);
        let mut slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let m = rng.random_range(2..=max_edges.min(slots.len()));
        let mut edges = Vec::new();
        for _ in 0..m {
            edges.push(slots.swap_remove(rng.random_range(0..slots.len())));
        }
        let used: Vec<usize> = {
            let mut v: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let edges: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| {
                (
                    used.binary_search(&a).unwrap(),
                    used.binary_search(&b).unwrap(),
                )
            })
            .collect();
        let g = Graph::new(used.len(), edges).unwrap();
        let density = rng.random_range(0.2..0.9);
        let mut pairs = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if rng.random_bool(density) {
                    let w = if quantized {
                        rng.random_range(1..=10) as f64 / 10.0
                    } else {
                        1.0 - rng.random::<f64>()
                    };
                    pairs.push((a, b, w));
                }
            }
        }
        if pairs.is_empty() {
            continue;
        }
        return (g, EdgeSimilarity::from_pairs(m, pairs).unwrap());
    }
}

/// Every nonempty edge subset, evaluated.
pub fn all_subsets(g: &Graph, sim: &EdgeSimilarity) -> Vec<Solution> {
    let m = g.edge_count();
    (1u32..(1 << m))
        .map(|mask| {
            let x = EdgeSet::new(g, (0..m).filter(|&e| mask & (1 << e) != 0)).unwrap();
            Solution::evaluate(g, sim, x, 0.0).unwrap()
        })
        .collect()
}

/// For each density the best similarity; only these can ever be optimal.
pub fn frontier(subsets: &[Solution]) -> Vec<(f64, Density)> {
    let mut best: Vec<(f64, Density)> = Vec::new();
    for s in subsets {
        match best.iter_mut().find(|(_, d)| *d == s.density) {
            Some(entry) => entry.0 = entry.0.max(s.similarity),
            None => best.push((s.similarity, s.density)),
        }
    }
    best
}

pub fn best_inv(frontier: &[(f64, Density)], lambda: f64) -> (f64, Density) {
    argmax(frontier, |s, d| s - lambda * d.inverse())
}

pub fn best_dss(frontier: &[(f64, Density)], mu: f64) -> (f64, Density) {
    argmax(frontier, |s, d| s + mu * d.value())
}

/// Maximizer with ties (within `1e-12`) going to the larger density.
fn argmax(frontier: &[(f64, Density)], f: impl Fn(f64, Density) -> f64) -> (f64, Density) {
    let mut best = frontier[0];
    let mut best_value = f(best.0, best.1);
    for &(s, d) in &frontier[1..] {
        let v = f(s, d);
        let tie = (v - best_value).abs() <= 1e-12 * best_value.abs().max(1.0);
        if (!tie && v > best_value) || (tie && d > best.1) {
            best = (s, d);
            best_value = v;
        }
    }
    best
}

pub fn same(a: (f64, Density), b: (f64, Density)) -> bool {
    a.1 == b.1 && (a.0 - b.0).abs() <= 1e-9 * a.0.abs().max(1.0)
}
