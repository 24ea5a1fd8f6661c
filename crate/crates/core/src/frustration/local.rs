//! Single-flip hill climbing, used as the warm start for the exact solver
//! and as the upper bound on large graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::residual::{pair_cost, Residual};
use super::SolveOptions;
use crate::graph::{Partition, SignedDigraph};

/// Best local optimum over `opts.restarts` starts (at least one).
///
/// The first start puts every node on side 0, the second follows a BFS
/// spanning forest that satisfies every tree edge, and the rest are uniform
/// random assignments drawn from `opts.seed`. Returns the canonical partition
/// and its frustration count.
pub fn local_search(g: &SignedDigraph, opts: &SolveOptions) -> (Partition, u64) {
    let res = Residual::from_graph(g);
    let (sides, cost) = climb_residual(&res, opts.restarts.max(1), opts.seed);
    (Partition::new(sides).canonical(), cost)
}

/// Best local optimum of a pair-cost graph over `restarts` starts, with its
/// full cost.
pub(crate) fn climb_residual(res: &Residual, restarts: usize, seed: u64) -> (Vec<bool>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<bool>, u64)> = None;
    for r in 0..restarts.max(1) {
        let mut sides = match r {
            0 => vec![false; res.n],
            1 => tree_start(res),
            _ => (0..res.n).map(|_| rng.gen::<bool>()).collect(),
        };
        climb(res, &mut sides);
        let cost = res.cost(&sides);
        if best.as_ref().is_none_or(|b| cost < b.1) {
            best = Some((sides, cost));
        }
    }
    best.expect("at least one start")
}

fn tree_start(res: &Residual) -> Vec<bool> {
    let mut sides = vec![false; res.n];
    let mut seen = vec![false; res.n];
    let mut queue = std::collections::VecDeque::new();
    for root in 0..res.n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &(v, w) in &res.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    sides[v] = if w > 0 { sides[u] } else { !sides[u] };
                    queue.push_back(v);
                }
            }
        }
    }
    sides
}

/// Flips improving nodes until none is left.
fn climb(res: &Residual, sides: &mut [bool]) {
    // gain[v] = cost drop from flipping v.
    let contrib = |w: i32, same: bool| pair_cost(w, same) as i64 - pair_cost(w, !same) as i64;
    let mut gain: Vec<i64> = (0..res.n)
        .map(|v| {
            res.adj[v]
                .iter()
                .map(|&(u, w)| contrib(w, sides[u] == sides[v]))
                .sum()
        })
        .collect();
    loop {
        let mut improved = false;
        for v in 0..res.n {
            if gain[v] <= 0 {
                continue;
            }
            for &(u, w) in &res.adj[v] {
                let before = contrib(w, sides[u] == sides[v]);
                gain[u] -= 2 * before;
            }
            sides[v] = !sides[v];
            gain[v] = -gain[v];
            improved = true;
        }
        if !improved {
            break;
        }
    }
}
