//! Macro-level balance: the frustration index `L(G)` of a signed digraph.
//!
//! `L(G)` is the minimum, over all bipartitions, of the number of positive
//! edges between the two sides plus negative edges within a side. The exact
//! solver reduces the graph and runs branch-and-bound over node sides; [`lower_bound`] and [`local_search`] bracket the optimum cheaply
//! and are the only tools used on large graphs unless exact solving is
//! forced.

mod kernel;
mod local;
mod residual;
mod search;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, Partition, Sign, SignedDigraph};

pub use local::local_search;
use residual::{incremental_cycle_packing, Residual};
use search::{Budget, Mode, Problem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("graph has no edges")]
    EmptyGraph,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Maximum number of branch-and-bound nodes over the whole solve.
    pub node_budget: u64,
    pub time_budget: Duration,
    /// Local-search starts used for the initial upper bound.
    pub restarts: usize,
    pub seed: u64,
    pub enumerate_all: bool,
    pub enumeration_cap: usize,
    /// Graphs with more edges than this are only bracketed by bounds...
    pub large_graph_edges: usize,
    /// ...unless this is set.
    pub force_exact: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            node_budget: 50_000_000,
            time_budget: Duration::from_secs(300),
            restarts: 50,
            seed: 0,
            enumerate_all: false,
            enumeration_cap: 1000,
            large_graph_edges: 10_000,
            force_exact: false,
        }
    }
}

/// Certified bracket on `L(G)`. `upper_partition` attains `upper`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: u64,
    pub upper: u64,
    pub upper_partition: Partition,
}

/// Canonical optimal partitions in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Optima {
    pub partitions: Vec<Partition>,
    /// More optima exist than the cap allowed.
    pub truncated: bool,
    /// The budget ran out before the enumeration finished.
    pub interrupted: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveResult {
    /// Best frustration count found; the optimum when `proven`.
    pub l: u64,
    /// Canonical partition attaining `l`.
    pub partition: Partition,
    pub proven: bool,
    /// `partition` is the lexicographically smallest optimal side vector.
    pub partition_is_lex_min: bool,
    pub explored_nodes: u64,
    pub bounds: Bounds,
    pub all_optima: Option<Optima>,
}

/// Where an edge sits relative to a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Situation {
    Internal,
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    pub source: usize,
    pub target: usize,
    pub sign: Sign,
    pub situation: Situation,
    pub frustrated: bool,
    /// 3 positive internal, 1 negative internal, -1 positive external,
    /// -3 negative external.
    pub t: i8,
}

pub fn frustration_count(g: &SignedDigraph, p: &Partition) -> Result<u64, GraphError> {
    p.check(g)?;
    Ok(g.edges()
        .iter()
        .filter(|e| e.sign.is_positive() != p.same_side(e.source, e.target))
        .count() as u64)
}

pub fn classify_edges(g: &SignedDigraph, p: &Partition) -> Result<Vec<EdgeClass>, GraphError> {
    p.check(g)?;
    Ok(g.edges()
        .iter()
        .map(|e| {
            let internal = p.same_side(e.source, e.target);
            let (situation, t) = match (e.sign, internal) {
                (Sign::Positive, true) => (Situation::Internal, 3),
                (Sign::Negative, true) => (Situation::Internal, 1),
                (Sign::Positive, false) => (Situation::External, -1),
                (Sign::Negative, false) => (Situation::External, -3),
            };
            EdgeClass {
                source: e.source,
                target: e.target,
                sign: e.sign,
                situation,
                frustrated: e.sign.is_positive() != internal,
                t,
            }
        })
        .collect())
}

/// Reciprocal dyads carrying both signs, plus a greedy packing of
/// edge-disjoint unbalanced semicycles over the remaining edges.
pub fn lower_bound(g: &SignedDigraph) -> u64 {
    let res = Residual::from_graph(g);
    let order: Vec<usize> = (0..res.n).collect();
    res.constant
        + incremental_cycle_packing(&res, &order)
            .last()
            .copied()
            .unwrap_or(0)
}

/// `F(G) = 1 - 2L/m`, unrounded.
pub fn normalized_f(l: u64, m: usize) -> Result<f64, SolveError> {
    if m == 0 {
        return Err(SolveError::EmptyGraph);
    }
    Ok(1.0 - 2.0 * l as f64 / m as f64)
}

fn branching_priority(g: &SignedDigraph) -> Vec<usize> {
    (0..g.node_count()).map(|v| g.degree(v)).collect()
}

fn deadline(opts: &SolveOptions) -> Option<Instant> {
    Instant::now().checked_add(opts.time_budget)
}

/// Exact frustration index.
///
/// The pair-cost graph is reduced, split into biconnected blocks and each
/// block is solved by branch-and-bound. Once the optimum is proven, sides
/// are fixed in node order (0 whenever an optimum survives) to obtain the
/// lexicographically smallest optimal side vector, with the smallest node of
/// every component on side 0. Budget exhaustion is reported through
/// `proven = false`.
pub fn solve_exact(g: &SignedDigraph, opts: &SolveOptions) -> SolveResult {
    let res = Residual::from_graph(g);
    let lower = lower_bound(g);
    let (upper_partition, upper) = local_search(g, opts);
    let bounds = Bounds {
        lower,
        upper,
        upper_partition: upper_partition.clone(),
    };

    if g.edge_count() > opts.large_graph_edges && !opts.force_exact {
        return SolveResult {
            l: upper,
            partition: upper_partition,
            proven: lower == upper,
            partition_is_lex_min: false,
            explored_nodes: 0,
            bounds,
            all_optima: None,
        };
    }

    let mut budget = Budget::new(opts.node_budget, deadline(opts));
    let solved = kernel::solve(&res, &mut budget, opts.restarts.max(1), opts.seed);
    let mut sides = solved.sides;
    let proven = solved.proven;
    let mut lex_min = proven;
    if proven {
        for comp in res.components() {
            if sides[comp[0]] {
                for &v in &comp {
                    sides[v] = !sides[v];
                }
            }
            if lex_min && !lexicographic_minimum(&res, &comp, &mut sides, &mut budget, opts) {
                lex_min = false;
            }
        }
    } else if upper < solved.cost {
        sides = upper_partition.sides().to_vec();
    }
    let total = res.cost(&sides);

    let partition = Partition::new(sides).canonical();
    debug_assert_eq!(res.cost(partition.sides()), total);
    let mut result = SolveResult {
        l: total,
        partition,
        proven,
        partition_is_lex_min: proven && lex_min,
        explored_nodes: budget.explored,
        bounds,
        all_optima: None,
    };
    if result.proven && result.bounds.lower > result.l {
        // Cannot happen with valid bounds; surfaced rather than clamped.
        result.proven = false;
    }
    if opts.enumerate_all && result.proven {
        result.all_optima = Some(enumerate_with_target(
            g,
            &res,
            result.l,
            opts.enumeration_cap,
            &mut budget,
        ));
        result.explored_nodes = budget.explored;
    }
    result
}

fn component_cost(res: &Residual, comp: &[usize], sides: &[bool]) -> u64 {
    let mut c = 0;
    for &u in comp {
        for &(v, w) in &res.adj[u] {
            if u < v {
                c += residual::pair_cost(w, sides[u] == sides[v]);
            }
        }
    }
    c
}

/// Walks the component's nodes in order, keeping each on side 0 whenever an
/// optimum with the sides fixed so far still exists. Each test pins the
/// decided prefix, contracts it into one node and re-solves. `witness`
/// always holds an optimum consistent with the decided prefix. Returns false
/// if the budget ran out first.
fn lexicographic_minimum(
    res: &Residual,
    comp: &[usize],
    witness: &mut [bool],
    budget: &mut Budget,
    opts: &SolveOptions,
) -> bool {
    let optimum = component_cost(res, comp, witness);
    let mut pinned: Vec<Option<bool>> = vec![None; comp.len()];
    pinned[0] = Some(false);
    for i in 1..comp.len() {
        pinned[i] = Some(false);
        if !witness[comp[i]] {
            continue;
        }
        let c = kernel::contract(res, comp, &pinned);
        let s = kernel::solve(&c.res, budget, opts.restarts.max(1), opts.seed);
        if !s.proven {
            pinned[i] = Some(true);
            return false;
        }
        if s.cost == optimum {
            let flip = s.sides[0];
            for (j, &u) in comp.iter().enumerate() {
                witness[u] = match (pinned[j], c.index[j]) {
                    (Some(p), _) => p,
                    (None, Some(k)) => s.sides[k] != flip,
                    (None, None) => unreachable!(),
                };
            }
        } else {
            pinned[i] = Some(true);
        }
    }
    true
}

fn enumerate_with_target(
    g: &SignedDigraph,
    res: &Residual,
    l: u64,
    cap: usize,
    budget: &mut Budget,
) -> Optima {
    if res.n == 0 {
        return Optima {
            partitions: vec![Partition::new(vec![])],
            truncated: false,
            interrupted: false,
        };
    }
    let priority = branching_priority(g);
    let active: Vec<usize> = (0..res.n).collect();
    let fixed = [(0usize, false)];
    let problem = Problem {
        res,
        active: &active,
        fixed: &fixed,
        priority: &priority,
    };
    let target = l - res.constant;
    let out = search::run(&problem, Mode::Enumerate { target, cap }, budget);
    let mut partitions: Vec<Partition> = out.found.into_iter().map(Partition::new).collect();
    partitions.sort();
    let truncated = partitions.len() > cap;
    partitions.truncate(cap);
    Optima {
        partitions,
        truncated,
        interrupted: out.interrupted,
    }
}

/// All canonical optimal partitions (up to `cap`), solving for `L` first.
pub fn enumerate_optima(g: &SignedDigraph, cap: usize, opts: &SolveOptions) -> Optima {
    let solved = solve_exact(
        g,
        &SolveOptions {
            enumerate_all: false,
            force_exact: true,
            ..opts.clone()
        },
    );
    if !solved.proven {
        return Optima {
            partitions: vec![solved.partition],
            truncated: false,
            interrupted: true,
        };
    }
    let res = Residual::from_graph(g);
    let mut budget = Budget::new(
        opts.node_budget.saturating_sub(solved.explored_nodes),
        deadline(opts),
    );
    enumerate_with_target(g, &res, solved.l, cap.max(1), &mut budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(edges: &[(&str, &str, i64)]) -> SignedDigraph {
        SignedDigraph::from_triples(edges.iter().copied()).unwrap()
    }

    #[test]
    fn count_examples() {
        let pos = g(&[("a", "b", 1), ("b", "c", 1), ("c", "a", 1)]);
        assert_eq!(frustration_count(&pos, &Partition::uniform(3)).unwrap(), 0);
        let one = g(&[("a", "b", 1)]);
        let split = Partition::new(vec![false, true]);
        assert_eq!(frustration_count(&one, &split).unwrap(), 1);
        assert!(frustration_count(&one, &Partition::uniform(3)).is_err());
    }

    #[test]
    fn edge_classes() {
        let x = g(&[("a", "b", 1), ("a", "c", -1), ("b", "c", 1), ("c", "b", -1)]);
        let p = Partition::new(vec![false, false, true]);
        let classes = classify_edges(&x, &p).unwrap();
        let ts: Vec<i8> = classes.iter().map(|c| c.t).collect();
        assert_eq!(ts, vec![3, -3, -1, -3]);
        let frustrated = classes.iter().filter(|c| c.frustrated).count() as u64;
        assert_eq!(frustrated, frustration_count(&x, &p).unwrap());
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(&g(&[("a", "b", 1), ("b", "a", -1)])), 1);
        assert_eq!(lower_bound(&g(&[("a", "b", 1), ("b", "c", 1), ("c", "a", 1)])), 0);
        assert_eq!(lower_bound(&g(&[("a", "b", 1), ("b", "c", 1), ("c", "a", -1)])), 1);
    }

    #[test]
    fn normalized_examples() {
        assert!((normalized_f(14, 116).unwrap() - (1.0 - 28.0 / 116.0)).abs() < 1e-12);
        assert_eq!(normalized_f(0, 7).unwrap(), 1.0);
        assert!((normalized_f(60, 2010).unwrap() - 0.9403).abs() < 1e-4);
        assert_eq!(normalized_f(0, 0), Err(SolveError::EmptyGraph));
    }

    #[test]
    fn mixed_dyad_solve() {
        let r = solve_exact(&g(&[("a", "b", 1), ("b", "a", -1)]), &SolveOptions::default());
        assert_eq!(r.l, 1);
        assert!(r.proven);
        // Both partitions cost 1; the all-zero one is lexicographically first.
        assert_eq!(r.partition, Partition::uniform(2));
    }

    #[test]
    fn two_positive_cliques_with_negative_bridge() {
        let mut e = Vec::new();
        let left = ["a", "b", "c"];
        let right = ["x", "y", "z"];
        for s in [&left, &right] {
            for &u in s.iter() {
                for &v in s.iter() {
                    if u != v {
                        e.push((u, v, 1));
                    }
                }
            }
        }
        for &u in &left {
            for &v in &right {
                e.push((u, v, -1));
            }
        }
        let r = solve_exact(&g(&e), &SolveOptions::default());
        assert_eq!(r.l, 0);
        assert!(r.proven);
        assert_eq!(r.partition.side_one(), vec![3, 4, 5]);
    }

    #[test]
    fn single_positive_edge_has_one_optimum() {
        let o = enumerate_optima(&g(&[("a", "b", 1)]), 10, &SolveOptions::default());
        assert_eq!(o.partitions, vec![Partition::uniform(2)]);
        assert!(!o.truncated);
    }

    #[test]
    fn enumeration_cap_truncates() {
        // Unbalanced triangle: three optima.
        let x = g(&[("a", "b", 1), ("b", "c", 1), ("c", "a", -1)]);
        let o = enumerate_optima(&x, 2, &SolveOptions::default());
        assert_eq!(o.partitions.len(), 2);
        assert!(o.truncated);
        let all = enumerate_optima(&x, 10, &SolveOptions::default());
        assert_eq!(all.partitions.len(), 3);
        assert!(all.partitions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn large_mode_returns_bounds_only() {
        let x = g(&[("a", "b", 1), ("b", "c", 1), ("c", "a", -1)]);
        let opts = SolveOptions {
            large_graph_edges: 2,
            ..SolveOptions::default()
        };
        let r = solve_exact(&x, &opts);
        assert_eq!(r.explored_nodes, 0);
        assert!(r.bounds.lower <= r.l);
        assert_eq!(frustration_count(&x, &r.partition).unwrap(), r.l);
    }
}
