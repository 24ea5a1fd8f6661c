mod common;

use balance_core::{
    enumerate_optima, frustration_count, local_search, lower_bound, micro_stats, solve_exact,
    SolveOptions,
};
use common::{brute_force, brute_micro, mixed_graph, random_graph, rng};
use rand::Rng;

const DENSITIES: [f64; 4] = [0.15, 0.4, 0.7, 1.0];

#[test]
fn exact_solver_matches_exhaustive_search() {
    let mut r = rng(11);
    let opts = SolveOptions::default();
    for case in 0..240 {
        let n = r.gen_range(2..=12);
        let density = DENSITIES[case % DENSITIES.len()];
        let g = mixed_graph(&mut r, n, density);
        let (best, optima) = brute_force(&g);
        let res = solve_exact(&g, &opts);
        assert!(res.proven, "case {case}");
        assert_eq!(res.l, best, "case {case}: {:?}", g.edges());
        assert_eq!(frustration_count(&g, &res.partition).unwrap(), best);
        assert!(res.partition_is_lex_min);
        assert_eq!(res.partition, optima[0], "case {case}: lexicographic minimum");
    }
}

#[test]
fn enumeration_matches_exhaustive_optimal_set() {
    let mut r = rng(12);
    let opts = SolveOptions::default();
    for case in 0..220 {
        let n = r.gen_range(2..=12);
        let density = DENSITIES[case % DENSITIES.len()];
        let g = mixed_graph(&mut r, n, density);
        let (_, optima) = brute_force(&g);
        let found = enumerate_optima(&g, 1 << 12, &opts);
        assert!(!found.truncated && !found.interrupted);
        let mut got = found.partitions.clone();
        got.sort();
        assert_eq!(got, optima, "case {case}: {:?}", g.edges());
    }
}

#[test]
fn enumeration_cap_truncates() {
    // Four isolated-pair components: 2^3 canonical optima once anchored.
    let g = balance_core::SignedDigraph::from_triples([
        ("a", "b", 1),
        ("c", "d", 1),
        ("e", "f", -1),
        ("g", "h", 1),
    ])
    .unwrap();
    let all = enumerate_optima(&g, 100, &SolveOptions::default());
    assert_eq!(all.partitions.len(), 8);
    let capped = enumerate_optima(&g, 3, &SolveOptions::default());
    assert_eq!(capped.partitions.len(), 3);
    assert!(capped.truncated);
}

#[test]
fn bounds_bracket_the_optimum() {
    let mut r = rng(13);
    let opts = SolveOptions::default();
    for case in 0..200 {
        let n = r.gen_range(2..=12);
        let g = random_graph(&mut r, n, DENSITIES[case % 4], 0.5, 0.5);
        let (best, _) = brute_force(&g);
        let (p, upper) = local_search(&g, &opts);
        assert!(lower_bound(&g) <= best);
        assert!(best <= upper);
        assert_eq!(frustration_count(&g, &p).unwrap(), upper);
        assert!(2 * upper <= g.edge_count() as u64);
    }
}

#[test]
fn census_matches_semicycle_definition() {
    let mut r = rng(14);
    for case in 0..200 {
        let n = r.gen_range(3..=12);
        let g = mixed_graph(&mut r, n, DENSITIES[case % 4]);
        let report = micro_stats(&g);
        let (balanced, unbalanced) = brute_micro(&g);
        assert_eq!(
            (report.balanced_count, report.unbalanced_count),
            (balanced, unbalanced),
            "case {case}"
        );
        assert_eq!(report.transitive_triad_count, balanced + unbalanced);
    }
}
