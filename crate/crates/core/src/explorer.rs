//! Enumeration of all distinct `(S, D)` optima of the inverse-density
//! problem across `lambda`, by breadth-first bisection of `lambda`
//! intervals.
//!
//! As `lambda` grows the optimal `S` can only fall and `D` can only rise, so
//! an interval whose endpoints share a signature holds no other signature and
//! is dropped. Intervals narrower than `delta_lambda` are evaluated once at
//! their midpoint and not split further.
//!
//! The search starts from `[lambda_min, lambda_max]` as given by
//! [`lambda_bounds`], widened first: the lower end is halved until its
//! solution has the largest attainable `S`, the upper end doubled until its
//! solution has the largest attainable `D`.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_nonnegative, Error, Result};
use crate::fp::{maximize_ratio, solve_dss_inv};
use crate::graph::{Density, EdgeSet, Graph};
use crate::objective::{subgraph_similarity, Solution};
use crate::qsolver::Cover;
use crate::similarity::EdgeSimilarity;

/// Limit on halvings or doublings of a range end.
const MAX_RANGE_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaBounds {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub delta_lambda: f64,
    pub s_min: f64,
    pub s_max: f64,
}

impl LambdaBounds {
    /// Upper bound on the number of distinct `lambda` worth testing,
    /// `(lambda_max - lambda_min) / delta_lambda`.
    pub fn evaluation_bound(&self) -> f64 {
        (self.lambda_max - self.lambda_min) / self.delta_lambda
    }
}

/// Search range and granularity for `lambda`, from the smallest nonzero and
/// the largest similarity.
pub fn lambda_bounds(graph: &Graph, sim: &EdgeSimilarity) -> Result<LambdaBounds> {
    let (s_min, s_max) = match (sim.s_min_nonzero(), sim.s_max()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => return Err(Error::NoNonzeroSimilarity),
    };
    let m = graph.edge_count() as f64;
    Ok(LambdaBounds {
        lambda_min: s_min / (2.0 * m),
        lambda_max: s_max * m * m / 2.0,
        delta_lambda: s_min / (2.0 * m),
        s_min,
        s_max,
    })
}

/// Same exact density and similarity within `1e-9` relative.
pub fn signature_equal(a: &Solution, b: &Solution) -> bool {
    same_signature(a.similarity, a.density, b.similarity, b.density)
}

fn same_signature(sa: f64, da: Density, sb: f64, db: Density) -> bool {
    da == db && (sa - sb).abs() <= 1e-9 * sa.abs().max(1.0)
}

#[derive(Debug, Clone)]
pub struct ExploreOptions {
    /// Maximum number of `lambda` evaluations.
    pub budget: Option<usize>,
    /// Stop once this many distinct solutions are known.
    pub max_solutions: Option<usize>,
    /// Worker threads for midpoints at the same depth.
    pub jobs: usize,
    /// Stopping tolerance forwarded to the ratio solver.
    pub tol: Option<f64>,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        Self {
            budget: None,
            max_solutions: None,
            jobs: 1,
            tol: None,
        }
    }
}

/// One `lambda` evaluation, in the order performed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub lambda: f64,
    pub similarity: f64,
    pub density: Density,
    pub min_cut_solves: usize,
}

/// One bisected interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalRecord {
    pub lower: f64,
    pub upper: f64,
    pub depth: usize,
    pub new_solution: bool,
    pub split_lower: bool,
    pub split_upper: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionCatalog {
    pub bounds: LambdaBounds,
    /// The `lambda` range actually bisected; contains the bounds' range.
    pub search_range: (f64, f64),
    /// Largest attainable `S` and `D`, which the two range ends reach.
    pub max_similarity: f64,
    pub max_density: Density,
    /// Min-cut solves spent computing the two maxima.
    pub extreme_min_cut_solves: usize,
    /// Distinct signatures ordered by `lambda`.
    pub solutions: Vec<Solution>,
    pub evaluations: Vec<Evaluation>,
    pub intervals: Vec<IntervalRecord>,
    /// Set when the budget or solution cap stopped the search early.
    pub truncated: bool,
}

impl SolutionCatalog {
    pub fn tested_lambdas(&self) -> usize {
        self.evaluations.len()
    }

    pub fn min_cut_solves(&self) -> usize {
        self.evaluations.iter().map(|e| e.min_cut_solves).sum()
    }

    pub fn mean_min_cut_solves(&self) -> f64 {
        if self.evaluations.is_empty() {
            0.0
        } else {
            self.min_cut_solves() as f64 / self.evaluations.len() as f64
        }
    }

    /// Checks that consecutive entries strictly lose similarity and gain
    /// density (tolerating `1e-9` relative noise on `S`).
    pub fn check_monotone(&self) -> std::result::Result<(), String> {
        for (i, w) in self.solutions.windows(2).enumerate() {
            let (a, b) = (&w[0], &w[1]);
            let slack = 1e-9 * a.similarity.abs().max(1.0);
            if a.lambda >= b.lambda {
                return Err(format!(
                    "entries {i} and {} are not ordered by lambda",
                    i + 1
                ));
            }
            if b.density <= a.density {
                return Err(format!(
                    "density does not increase between entries {i} and {}: {} then {}",
                    i + 1,
                    a.density,
                    b.density
                ));
            }
            if b.similarity >= a.similarity - slack {
                return Err(format!(
                    "similarity does not decrease between entries {i} and {}: {} then {}",
                    i + 1,
                    a.similarity,
                    b.similarity
                ));
            }
        }
        Ok(())
    }
}

struct Pending {
    lower: Solution,
    upper: Solution,
    depth: usize,
}

/// Runs the breadth-first `lambda` exploration.
pub fn explore(
    graph: &Graph,
    sim: &EdgeSimilarity,
    options: &ExploreOptions,
) -> Result<SolutionCatalog> {
    let bounds = lambda_bounds(graph, sim)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidNetwork(format!("thread pool: {e}")))?;
    let evaluate = |lambda: f64| solve_dss_inv(graph, sim, lambda, options.tol);

    let cover = Cover::from_graph(graph);
    let best_s = maximize_ratio(sim, None, options.tol)?;
    let max_similarity =
        subgraph_similarity(sim, &EdgeSet::new(graph, best_s.selected.iter().copied())?);
    let best_d = maximize_ratio(
        &EdgeSimilarity::empty(graph.edge_count()),
        Some((&cover, 1.0)),
        None,
    )?;
    let max_density = EdgeSet::new(graph, best_d.selected.iter().copied())
        .and_then(|x| crate::objective::density(graph, &x))?;

    let mut catalog = SolutionCatalog {
        bounds,
        search_range: (bounds.lambda_min, bounds.lambda_max),
        max_similarity,
        max_density,
        extreme_min_cut_solves: best_s.trace.iterations() + best_d.trace.iterations(),
        solutions: Vec::new(),
        evaluations: Vec::new(),
        intervals: Vec::new(),
        truncated: false,
    };
    let budget = options.budget.unwrap_or(usize::MAX);
    let cap = options.max_solutions.unwrap_or(usize::MAX);
    let record = |catalog: &mut SolutionCatalog, sol: &Solution, solves: usize| {
        catalog.evaluations.push(Evaluation {
            lambda: sol.lambda,
            similarity: sol.similarity,
            density: sol.density,
            min_cut_solves: solves,
        });
    };

    if budget == 0 || cap == 0 {
        catalog.truncated = true;
        return Ok(catalog);
    }
    let has_max_similarity =
        |sol: &Solution| sol.similarity >= max_similarity - 1e-9 * max_similarity.abs().max(1.0);
    let mut low = evaluate(bounds.lambda_min)?;
    record(&mut catalog, &low.0, low.1.iterations());
    let mut steps = 0;
    while !has_max_similarity(&low.0) && steps < MAX_RANGE_STEPS {
        if catalog.evaluations.len() >= budget {
            catalog.truncated = true;
            catalog.solutions.push(low.0);
            return finish(catalog);
        }
        low = evaluate(0.5 * low.0.lambda)?;
        record(&mut catalog, &low.0, low.1.iterations());
        steps += 1;
    }
    let low = low.0;
    catalog.search_range.0 = low.lambda;
    catalog.solutions.push(low.clone());
    if catalog.evaluations.len() >= budget || cap == 1 {
        catalog.truncated = true;
        return finish(catalog);
    }

    let mut high = evaluate(bounds.lambda_max)?;
    record(&mut catalog, &high.0, high.1.iterations());
    let mut steps = 0;
    while high.0.density < max_density && steps < MAX_RANGE_STEPS {
        if catalog.evaluations.len() >= budget {
            catalog.truncated = true;
            if !signature_equal(&low, &high.0) {
                catalog.solutions.push(high.0);
            }
            return finish(catalog);
        }
        high = evaluate(2.0 * high.0.lambda)?;
        record(&mut catalog, &high.0, high.1.iterations());
        steps += 1;
    }
    let high = high.0;
    catalog.search_range.1 = high.lambda;
    if catalog.search_range != (bounds.lambda_min, bounds.lambda_max) {
        log::info!(
            "widened lambda range to [{}, {}]",
            catalog.search_range.0,
            catalog.search_range.1
        );
    }

    let mut queue = VecDeque::new();
    if !signature_equal(&low, &high) {
        catalog.solutions.push(high.clone());
        queue.push_back(Pending {
            lower: low,
            upper: high,
            depth: 0,
        });
    }

    'levels: while !queue.is_empty() {
        let remaining = budget - catalog.evaluations.len();
        if remaining == 0 || catalog.solutions.len() >= cap {
            catalog.truncated = true;
            break;
        }
        let take = queue.len().min(remaining);
        let level: Vec<Pending> = queue.drain(..take).collect();
        let midpoints: Vec<f64> = level
            .iter()
            .map(|p| 0.5 * (p.lower.lambda + p.upper.lambda))
            .collect();
        let results: Vec<Result<_>> = if options.jobs > 1 {
            pool.install(|| midpoints.par_iter().map(|&l| evaluate(l)).collect())
        } else {
            midpoints.iter().map(|&l| evaluate(l)).collect()
        };
        log::debug!(
            "explored {} midpoints at depth {}, {} solutions so far",
            level.len(),
            level[0].depth,
            catalog.solutions.len()
        );
        // Children of this level go behind any intervals left over from it.
        let mut children = Vec::new();
        for (item, result) in level.into_iter().zip(results) {
            if catalog.solutions.len() >= cap {
                catalog.truncated = true;
                break 'levels;
            }
            let (mid, trace) = result?;
            record(&mut catalog, &mid, trace.iterations());
            let equal_lower = signature_equal(&mid, &item.lower);
            let equal_upper = signature_equal(&mid, &item.upper);
            let new_solution = !equal_lower && !equal_upper;
            if new_solution {
                catalog.solutions.push(mid.clone());
            }
            let splittable = item.upper.lambda - item.lower.lambda >= bounds.delta_lambda;
            let split_lower = splittable && !equal_lower;
            let split_upper = splittable && !equal_upper;
            catalog.intervals.push(IntervalRecord {
                lower: item.lower.lambda,
                upper: item.upper.lambda,
                depth: item.depth,
                new_solution,
                split_lower,
                split_upper,
            });
            if split_lower {
                children.push(Pending {
                    lower: item.lower,
                    upper: mid.clone(),
                    depth: item.depth + 1,
                });
            }
            if split_upper {
                children.push(Pending {
                    lower: mid,
                    upper: item.upper,
                    depth: item.depth + 1,
                });
            }
        }
        queue.extend(children);
    }
    if !queue.is_empty() {
        catalog.truncated = true;
    }
    finish(catalog)
}

fn finish(mut catalog: SolutionCatalog) -> Result<SolutionCatalog> {
    catalog
        .solutions
        .sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let mut kept: Vec<Solution> = Vec::with_capacity(catalog.solutions.len());
    for sol in catalog.solutions {
        if !kept.iter().any(|k| signature_equal(k, &sol)) {
            kept.push(sol);
        }
    }
    catalog.solutions = kept;
    if let Err(message) = catalog.check_monotone() {
        log::warn!("catalog is not monotone: {message}");
    }
    Ok(catalog)
}

/// The catalog entry maximizing `S + mu D`, ties going to the larger `D`.
pub fn solve_dss(catalog: &SolutionCatalog, mu: f64) -> Result<&Solution> {
    let mu = check_nonnegative("mu", mu)?;
    if catalog.truncated {
        return Err(Error::TruncatedCatalog);
    }
    let mut best: Option<(&Solution, f64)> = None;
    for sol in &catalog.solutions {
        let value = sol.objective_dss(mu)?;
        best = match best {
            None => Some((sol, value)),
            Some((b, bv)) => {
                let tie = (value - bv).abs() <= 1e-12 * bv.abs().max(1.0);
                if (tie && sol.density > b.density) || (!tie && value > bv) {
                    Some((sol, value))
                } else {
                    Some((b, bv))
                }
            }
        };
    }
    best.map(|(s, _)| s).ok_or(Error::EmptyEdgeSet)
}
