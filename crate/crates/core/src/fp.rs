//! Ratio maximization `max_X F1(X) / |X|` by iterated linearization, with
//! `F1(X) = sum_{pairs in X} w - lambda |V(X)|`.
//!
//! Starting from the full element set, each step solves
//! `max_X F1(X) - c_k |X|` and moves `c` to the ratio of the maximizer. The
//! ratios increase strictly, so the loop ends after at most `|E|` solves.

use serde::Serialize;

use crate::error::{check_nonnegative, Error, Result};
use crate::graph::{EdgeSet, Graph};
use crate::objective::Solution;
use crate::qsolver::{Cover, QInstance, QSolver};
use crate::similarity::EdgeSimilarity;

/// One linearized solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FpStep {
    pub c: f64,
    pub q_value: f64,
    pub selected: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FpTrace {
    pub steps: Vec<FpStep>,
}

impl FpTrace {
    /// Number of min-cut solves.
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioOptimum {
    /// Sorted maximizer; empty only when every nonempty set scores below
    /// the empty one, which cannot happen without a cover.
    pub selected: Vec<usize>,
    pub ratio: f64,
    pub trace: FpTrace,
}

/// Default stopping tolerance for a weight map.
pub fn default_tolerance(weights: &EdgeSimilarity) -> f64 {
    1e-9 * weights.pair_sum().max(1.0)
}

/// Maximizes `F1(X) / |X|` over nonempty `X`. `cover` adds the node
/// penalty `lambda |V(X)|` to `F1`.
pub fn maximize_ratio(
    weights: &EdgeSimilarity,
    cover: Option<(&Cover, f64)>,
    tol: Option<f64>,
) -> Result<RatioOptimum> {
    let m = weights.element_count();
    if m == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let tol = match tol {
        Some(t) => check_nonnegative("tol", t)?,
        None => default_tolerance(weights),
    };
    let base = QInstance::new(weights, 0.0);
    let base = match cover {
        Some((cover, lambda)) => base.with_cover(cover, lambda)?,
        None => base,
    };

    let mut current: Vec<usize> = (0..m).collect();
    let mut c = base.numerator(&current) / m as f64;
    let mut solver = QSolver::new(&base.with_c(c))?;
    let mut trace = FpTrace::default();
    loop {
        let sol = solver.solve()?;
        let q_value = base.with_c(c).evaluate(&sol.selected);
        trace.steps.push(FpStep {
            c,
            q_value,
            selected: sol.selected.len(),
        });
        if q_value <= tol || sol.selected.is_empty() {
            return Ok(RatioOptimum {
                selected: current,
                ratio: c,
                trace,
            });
        }
        let next_c = base.numerator(&sol.selected) / sol.selected.len() as f64;
        if next_c <= c || trace.steps.len() > m {
            log::warn!(
                "ratio iteration stalled at c = {c} after {} solves",
                trace.steps.len()
            );
            return Ok(RatioOptimum {
                selected: current,
                ratio: c,
                trace,
            });
        }
        current = sol.selected;
        c = next_c;
        solver.set_c(c)?;
    }
}

/// Solves `max_{X nonempty} S(X) - lambda / D(X)` on `graph`.
pub fn solve_dss_inv(
    graph: &Graph,
    sim: &EdgeSimilarity,
    lambda: f64,
    tol: Option<f64>,
) -> Result<(Solution, FpTrace)> {
    let lambda = check_nonnegative("lambda", lambda)?;
    if sim.element_count() != graph.edge_count() {
        return Err(Error::InvalidNetwork(format!(
            "similarity covers {} elements but the graph has {} edges",
            sim.element_count(),
            graph.edge_count()
        )));
    }
    let cover = Cover::from_graph(graph);
    let optimum = maximize_ratio(sim, Some((&cover, lambda)), tol)?;
    let edge_set = if optimum.selected.is_empty() {
        // Every single edge scores -2 lambda.
        EdgeSet::new(graph, [0])?
    } else {
        EdgeSet::new(graph, optimum.selected)?
    };
    Ok((
        Solution::evaluate(graph, sim, edge_set, lambda)?,
        optimum.trace,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::objective_dss_inv;

    fn brute_force(graph: &Graph, sim: &EdgeSimilarity, lambda: f64) -> f64 {
        let m = graph.edge_count();
        (1u32..(1 << m))
            .map(|mask| {
                let x = EdgeSet::new(graph, (0..m).filter(|&e| mask & (1 << e) != 0)).unwrap();
                Solution::evaluate(graph, sim, x, lambda)
                    .unwrap()
                    .objective_inv
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn path_with_one_pair() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let sim = EdgeSimilarity::from_pairs(2, [(0, 1, 0.8)]).unwrap();
        let (sol, trace) = solve_dss_inv(&g, &sim, 0.05, None).unwrap();
        assert_eq!(sol.edge_set.members(), &[0, 1]);
        assert!((sol.objective_inv - 0.325).abs() < 1e-12);
        assert!(trace.iterations() >= 1);
        assert!((brute_force(&g, &sim, 0.05) - 0.325).abs() < 1e-12);
    }

    #[test]
    fn zero_similarity_picks_the_densest_subgraph() {
        // K4 (density 3/2) plus a pendant edge (whole graph 7/5).
        let g = Graph::new(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        let sim = EdgeSimilarity::empty(7);
        let (sol, _) = solve_dss_inv(&g, &sim, 1.0, None).unwrap();
        assert_eq!(sol.edge_set.members(), &[0, 1, 2, 3, 4, 5]);
        let expected = objective_dss_inv(0.0, sol.density, 1.0).unwrap();
        assert!((expected + 2.0 / 3.0).abs() < 1e-15);
        assert!((sol.objective_inv - expected).abs() < 1e-15);
    }

    #[test]
    fn trace_ratios_increase() {
        let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5)]).unwrap();
        let sim =
            EdgeSimilarity::from_pairs(5, [(0, 1, 0.1), (1, 2, 0.2), (3, 4, 1.0), (0, 3, 0.05)])
                .unwrap();
        for lambda in [0.0, 0.01, 0.1, 1.0, 10.0] {
            let (sol, trace) = solve_dss_inv(&g, &sim, lambda, None).unwrap();
            assert!(trace.steps.windows(2).all(|w| w[1].c > w[0].c));
            assert!(trace.iterations() <= g.edge_count() + 1);
            let best = brute_force(&g, &sim, lambda);
            assert!(
                (sol.objective_inv - best).abs() < 1e-9,
                "lambda {lambda}: {} vs {best}",
                sol.objective_inv
            );
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        assert!(solve_dss_inv(&g, &EdgeSimilarity::empty(2), -1.0, None).is_err());
        assert!(solve_dss_inv(&g, &EdgeSimilarity::empty(3), 1.0, None).is_err());
    }
}
