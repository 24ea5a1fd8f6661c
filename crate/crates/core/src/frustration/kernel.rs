//! Exact minimization of a pair-cost graph by reduction and decomposition.
//!
//! Nodes of degree 0, 1 and 2 are eliminated without loss: a pendant node
//! can always agree with its neighbour, and a degree-2 node folds its two
//! pairs into one pair between its neighbours (plus a constant). What is
//! left has minimum degree 3 and is split into biconnected blocks, which are
//! independent up to flipping, and each block goes to branch-and-bound.

use super::local::climb_residual;
use super::residual::{pair_cost, PairGraph, Residual};
use super::search::{self, Budget, Mode, Problem};

#[derive(Debug, Clone, Copy)]
enum Step {
    Free(usize),
    Pendant { v: usize, u: usize, w: i32 },
    Series { v: usize, u: usize, a: i32, t: usize, b: i32 },
}

/// Best side vector found, its full cost, and whether it is proven optimal.
#[derive(Debug, Clone)]
pub(crate) struct Solved {
    pub sides: Vec<bool>,
    pub cost: u64,
    pub proven: bool,
}

struct Reduced {
    graph: PairGraph,
    alive: Vec<bool>,
    log: Vec<Step>,
}

fn reduce(res: &Residual) -> Reduced {
    let mut graph = PairGraph::from_residual(res);
    let n = res.n;
    let mut alive = vec![true; n];
    let mut log = Vec::new();
    let mut queue: std::collections::VecDeque<usize> =
        (0..n).filter(|&v| graph.adj[v].len() <= 2).collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v] || graph.adj[v].len() > 2 {
            continue;
        }
        let nbrs: Vec<(usize, i32)> = graph.adj[v].iter().map(|(&u, &w)| (u, w)).collect();
        match nbrs.as_slice() {
            [] => log.push(Step::Free(v)),
            &[(u, w)] => {
                graph.remove(v, u);
                log.push(Step::Pendant { v, u, w });
                queue.push_back(u);
            }
            &[(u, a), (t, b)] => {
                graph.remove(v, u);
                graph.remove(v, t);
                let c = |w: i32, same: bool| pair_cost(w, same);
                // v picks its best side for each relation between u and t.
                let same = (c(a, true) + c(b, true)).min(c(a, false) + c(b, false));
                let split = (c(a, true) + c(b, false)).min(c(a, false) + c(b, true));
                graph.add_profile(u, t, same, split);
                log.push(Step::Series { v, u, a, t, b });
                queue.push_back(u);
                queue.push_back(t);
            }
            _ => unreachable!(),
        }
        alive[v] = false;
    }
    Reduced { graph, alive, log }
}

/// Undoes the eliminations in reverse, giving each removed node a best side.
fn expand(log: &[Step], sides: &mut [bool]) {
    for step in log.iter().rev() {
        match *step {
            Step::Free(v) => sides[v] = false,
            Step::Pendant { v, u, w } => sides[v] = if w > 0 { sides[u] } else { !sides[u] },
            Step::Series { v, u, a, t, b } => {
                let cost = |x: bool| pair_cost(a, sides[u] == x) + pair_cost(b, x == sides[t]);
                sides[v] = cost(true) < cost(false);
            }
        }
    }
}

/// Biconnected blocks of the live part of `g`, as sorted node lists.
fn blocks(g: &PairGraph, alive: &[bool]) -> Vec<Vec<usize>> {
    let n = g.adj.len();
    let adj: Vec<Vec<usize>> = g.adj.iter().map(|m| m.keys().copied().collect()).collect();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if !alive[root] || disc[root] != usize::MAX || adj[root].is_empty() {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (node, parent, next neighbour index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
            if *next < adj[u].len() {
                let v = adj[u][*next];
                *next += 1;
                if v == parent {
                    continue;
                }
                if disc[v] == usize::MAX {
                    disc[v] = time;
                    low[v] = time;
                    time += 1;
                    edge_stack.push((u, v));
                    stack.push((v, u, 0));
                } else if disc[v] < disc[u] {
                    low[u] = low[u].min(disc[v]);
                    edge_stack.push((u, v));
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        let mut nodes = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            nodes.push(e.0);
                            nodes.push(e.1);
                            if e == (p, u) {
                                break;
                            }
                        }
                        nodes.sort_unstable();
                        nodes.dedup();
                        out.push(nodes);
                    }
                }
            }
        }
    }
    out
}

/// Nodes in maximum-adjacency order from the heaviest node: each next node
/// has the largest total |weight| to the nodes already placed.
fn adjacency_order(res: &Residual) -> Vec<usize> {
    let n = res.n;
    let weight = |v: usize| res.adj[v].iter().map(|&(_, w)| w.unsigned_abs() as u64).sum::<u64>();
    let mut placed = vec![false; n];
    let mut attach = vec![0u64; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by(|&a, &b| {
                (attach[a], weight(a), std::cmp::Reverse(a))
                    .cmp(&(attach[b], weight(b), std::cmp::Reverse(b)))
            })
            .expect("unplaced node");
        placed[next] = true;
        order.push(next);
        for &(u, w) in &res.adj[next] {
            attach[u] += w.unsigned_abs() as u64;
        }
    }
    order
}

fn solve_block(
    g: &PairGraph,
    nodes: &[usize],
    budget: &mut Budget,
    restarts: usize,
    seed: u64,
) -> (Vec<bool>, u64, bool) {
    let local: std::collections::HashMap<usize, usize> =
        nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut sub = PairGraph::new(nodes.len());
    for (i, &v) in nodes.iter().enumerate() {
        for (&u, &w) in &g.adj[v] {
            if let Some(&j) = local.get(&u) {
                if i < j {
                    sub.add(i, j, w);
                }
            }
        }
    }
    let sub = sub.into_residual();
    let (mut best, mut cost) = climb_residual(&sub, restarts, seed);
    let order = adjacency_order(&sub);
    let anchor = order[0];
    if best[anchor] {
        best.iter_mut().for_each(|s| *s = !*s);
    }
    let priority: Vec<usize> = {
        let mut p = vec![0; sub.n];
        for (rank, &v) in order.iter().enumerate() {
            p[v] = sub.n - rank;
        }
        p
    };
    let active: Vec<usize> = (0..sub.n).collect();
    let problem = Problem {
        res: &sub,
        active: &active,
        fixed: &[(anchor, false)],
        priority: &priority,
    };
    let out = search::run(&problem, Mode::Minimize { incumbent: cost }, budget);
    if let Some((c, s)) = out.best {
        cost = c;
        best = s;
    }
    (best, cost, !out.interrupted)
}

/// Minimizes the full cost of `res` (constant included).
pub(crate) fn solve(res: &Residual, budget: &mut Budget, restarts: usize, seed: u64) -> Solved {
    let reduced = reduce(res);
    let g = &reduced.graph;
    let mut sides = vec![false; res.n];
    let mut assigned = vec![false; res.n];
    let mut proven = true;

    let blocks = blocks(g, &reduced.alive);
    let mut solutions = Vec::with_capacity(blocks.len());
    for (i, nodes) in blocks.iter().enumerate() {
        let (s, _, complete) = solve_block(g, nodes, budget, restarts, seed.wrapping_add(i as u64));
        proven &= complete;
        solutions.push(s);
    }

    // Stitch blocks together through their cut nodes: every block after the
    // first in a component meets the assigned part in exactly one node.
    let mut of_node: Vec<Vec<usize>> = vec![Vec::new(); res.n];
    for (b, nodes) in blocks.iter().enumerate() {
        for &v in nodes {
            of_node[v].push(b);
        }
    }
    let mut done = vec![false; blocks.len()];
    for start in 0..blocks.len() {
        if done[start] {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([start]);
        done[start] = true;
        while let Some(b) = queue.pop_front() {
            let nodes = &blocks[b];
            let sol = &solutions[b];
            let flip = nodes
                .iter()
                .enumerate()
                .find(|&(_, &v)| assigned[v])
                .is_some_and(|(i, &v)| sol[i] != sides[v]);
            for (i, &v) in nodes.iter().enumerate() {
                if !assigned[v] {
                    sides[v] = sol[i] ^ flip;
                    assigned[v] = true;
                    for &nb in &of_node[v] {
                        if !done[nb] {
                            done[nb] = true;
                            queue.push_back(nb);
                        }
                    }
                }
            }
        }
    }
    expand(&reduced.log, &mut sides);
    let cost = res.cost(&sides);
    Solved {
        sides,
        cost,
        proven,
    }
}

/// The subproblem on `nodes` with some of them pinned: pinned nodes merge
/// into one node (index 0), other nodes follow in the given order.
pub(crate) struct Contracted {
    pub res: Residual,
    /// Index in the contracted graph of each entry of `nodes`, for free nodes.
    pub index: Vec<Option<usize>>,
}

pub(crate) fn contract(res: &Residual, nodes: &[usize], pinned: &[Option<bool>]) -> Contracted {
    let mut index = vec![None; nodes.len()];
    let mut pos = vec![usize::MAX; res.n];
    let mut next = 1;
    for (i, &v) in nodes.iter().enumerate() {
        pos[v] = i;
        if pinned[i].is_none() {
            index[i] = Some(next);
            next += 1;
        }
    }
    let mut g = PairGraph::new(next);
    for (i, &v) in nodes.iter().enumerate() {
        for &(u, w) in &res.adj[v] {
            let j = pos[u];
            if j == usize::MAX || u < v {
                continue;
            }
            match (pinned[i], pinned[j]) {
                (Some(a), Some(b)) => g.constant += pair_cost(w, a == b),
                (Some(a), None) => g.add(0, index[j].unwrap(), if a { -w } else { w }),
                (None, Some(b)) => g.add(index[i].unwrap(), 0, if b { -w } else { w }),
                (None, None) => g.add(index[i].unwrap(), index[j].unwrap(), w),
            }
        }
    }
    Contracted {
        res: g.into_residual(),
        index,
    }
}
