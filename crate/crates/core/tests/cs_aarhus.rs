use std::path::PathBuf;
use std::time::Instant;

use densim_core::*;

fn load() -> MultilayerGraph {
    let path =
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/cs_aarhus_multiplex.edges");
    parse_multiplex(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn dataset_statistics() {
    let ml = load();
    let (g, sim) = build_similarity(&ml).unwrap();
    let s = stats(&ml, &g, &sim);
    assert_eq!((s.num_nodes, s.num_edges, s.num_layers), (61, 353, 5));
    assert_eq!(s.num_mult_edges, 620);
    assert_eq!(s.avg_edges_per_layer, 124.0);
    assert_eq!(s.num_meta_pairs, 39565);
    assert!((s.density - 5.78).abs() < 0.01);
    assert!((s.avg_layer_density - 2.60).abs() < 0.01);
    assert!((s.similarity - 57.44).abs() < 0.01);
    assert!((s.avg_edge_participation - 1.75).abs() < 0.01);
}

#[test]
fn exploration_endpoints_and_count() {
    let ml = load();
    let (g, sim) = build_similarity(&ml).unwrap();
    let start = Instant::now();
    let cat = explore(&g, &sim, &ExploreOptions::default()).unwrap();
    assert!(start.elapsed().as_secs() < 60);
    assert!(!cat.truncated);
    assert_eq!(cat.solutions.len(), 15);
    cat.check_monotone().unwrap();
    assert_eq!(cat.search_range.0, cat.bounds.lambda_min);
    assert_eq!(cat.search_range.1, cat.bounds.lambda_max);

    let first = &cat.solutions[0];
    assert_eq!((first.num_edges(), first.num_nodes()), (289, 61));
    assert!((first.similarity - 59.43).abs() < 0.02);
    let last = cat.solutions.last().unwrap();
    assert_eq!((last.num_edges(), last.num_nodes()), (281, 45));
    assert!((last.similarity - 44.83).abs() < 0.02);
    assert!((last.density.value() - 6.24).abs() < 0.02);
    assert!(cat.mean_min_cut_solves() <= 6.0);

    let evaluate = |x: EdgeSet| Solution::evaluate(&g, &sim, x, 0.0).unwrap();
    let by_sim = evaluate(bl_sim(&g, &sim, 0.0).unwrap().edge_set);
    let by_den = evaluate(bl_den(&ml, 0.0).unwrap().edge_set);
    assert!(signature_equal(&by_sim, first));
    assert!(signature_equal(&by_den, last));
}
