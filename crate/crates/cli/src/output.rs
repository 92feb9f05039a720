use densim_core::{DatasetStats, LambdaBounds, MultilayerGraph, Solution, SolutionCatalog};
use serde::Serialize;

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest decimal form of `x` at 12 significant digits.
pub fn num(x: f64) -> String {
    format!("{}", round12(x))
}

#[derive(Debug, Serialize)]
pub struct DatasetInfo {
    pub file: String,
    pub sim_file: Option<String>,
    pub nodes: usize,
    pub edges: usize,
    pub layers: usize,
    pub s_min: f64,
    pub s_max: f64,
}

#[derive(Debug, Serialize)]
pub struct BoundsInfo {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub delta_lambda: f64,
}

impl From<&LambdaBounds> for BoundsInfo {
    fn from(b: &LambdaBounds) -> Self {
        Self {
            lambda_min: round12(b.lambda_min),
            lambda_max: round12(b.lambda_max),
            delta_lambda: round12(b.delta_lambda),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SolutionEntry {
    pub lambda: f64,
    pub similarity: f64,
    pub density_num: u64,
    pub density_den: u64,
    pub objective: f64,
    pub num_edges: usize,
    pub num_nodes: usize,
    pub edges: Vec<(String, String)>,
}

impl SolutionEntry {
    pub fn new(ml: &MultilayerGraph, solution: &Solution) -> Self {
        let graph = ml.graph();
        let edges = solution
            .edge_set
            .members()
            .iter()
            .map(|&e| {
                let (u, v) = graph.edge(e);
                (ml.node_name(u).to_owned(), ml.node_name(v).to_owned())
            })
            .collect();
        Self {
            lambda: round12(solution.lambda),
            similarity: round12(solution.similarity),
            density_num: solution.density.numerator,
            density_den: solution.density.denominator,
            objective: round12(solution.objective_inv),
            num_edges: solution.num_edges(),
            num_nodes: solution.num_nodes(),
            edges,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Counters {
    pub tested_lambdas: usize,
    pub min_cut_solves: usize,
    pub mean_min_cut_solves: f64,
    pub extreme_min_cut_solves: usize,
    pub intervals: usize,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub seconds_per_lambda: f64,
}

#[derive(Debug, Serialize)]
pub struct CatalogDocument {
    pub dataset: DatasetInfo,
    pub bounds: BoundsInfo,
    pub search_range: (f64, f64),
    pub truncated: bool,
    pub solutions: Vec<SolutionEntry>,
    pub counters: Counters,
    pub timing: Timing,
}

impl CatalogDocument {
    pub fn new(
        dataset: DatasetInfo,
        ml: &MultilayerGraph,
        catalog: &SolutionCatalog,
        seconds: f64,
    ) -> Self {
        let tested = catalog.tested_lambdas();
        Self {
            dataset,
            bounds: (&catalog.bounds).into(),
            search_range: (
                round12(catalog.search_range.0),
                round12(catalog.search_range.1),
            ),
            truncated: catalog.truncated,
            solutions: catalog
                .solutions
                .iter()
                .map(|s| SolutionEntry::new(ml, s))
                .collect(),
            counters: Counters {
                tested_lambdas: tested,
                min_cut_solves: catalog.min_cut_solves(),
                mean_min_cut_solves: round12(catalog.mean_min_cut_solves()),
                extreme_min_cut_solves: catalog.extreme_min_cut_solves,
                intervals: catalog.intervals.len(),
            },
            timing: Timing {
                total_seconds: round12(seconds),
                seconds_per_lambda: round12(seconds / tested.max(1) as f64),
            },
        }
    }

    pub fn csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        for s in &self.solutions {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                num(s.lambda),
                num(s.similarity),
                s.density_num,
                s.density_den,
                s.num_edges,
                s.num_nodes
            ));
        }
        out
    }
}

pub const CSV_HEADER: &str = "lambda,S,D_num,D_den,edges,nodes\n";

#[derive(Debug, Serialize)]
pub struct SolveDocument {
    pub dataset: DatasetInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective_dss: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    pub solution: SolutionEntry,
}

pub fn stats_table(s: &DatasetStats) -> String {
    let rows = [
        ("|V|", s.num_nodes.to_string()),
        ("|E|", s.num_edges.to_string()),
        ("L", s.num_layers.to_string()),
        ("|E|avg", num(s.avg_edges_per_layer)),
        ("|E_mult|", s.num_mult_edges.to_string()),
        ("|E_meta|", s.num_meta_pairs.to_string()),
        ("D", num(s.density)),
        ("D_avg", num(s.avg_layer_density)),
        ("S", num(s.similarity)),
        ("l_avg", num(s.avg_edge_participation)),
    ];
    rows.iter().map(|(k, v)| format!("{k:<10} {v}\n")).collect()
}

pub fn stats_json(s: &DatasetStats) -> serde_json::Value {
    let mut value = serde_json::to_value(s).unwrap_or_default();
    if let Some(map) = value.as_object_mut() {
        for v in map.values_mut() {
            if let Some(x) = v.as_f64().filter(|_| v.is_f64()) {
                *v = serde_json::json!(round12(x));
            }
        }
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(num(0.1 + 0.2), "0.3");
        assert_eq!(num(59.434_012_345_678_9), "59.4340123457");
        assert_eq!(num(-2.5), "-2.5");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(1234567.0), "1234567");
    }
}
