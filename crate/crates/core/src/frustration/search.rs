//! Depth-first branch-and-bound over node side assignments.
//!
//! The bound at a search node is
//!
//! ```text
//! cost among decided pairs
//!   + Σ over undecided nodes of min(cost of side 0, cost of side 1)
//!     counting only edges to decided nodes
//!   + unbalanced-cycle packing inside the undecided suffix
//! ```
//!
//! The three terms count disjoint edge sets, so the sum never exceeds the
//! best completion. Pair constants (mixed reciprocal dyads) are paid by every
//! partition and are left to the caller.

use std::time::Instant;

use super::residual::{incremental_cycle_packing, pair_cost, Residual};

/// Shared node/time allowance for a sequence of searches.
#[derive(Debug)]
pub(crate) struct Budget {
    pub node_limit: u64,
    pub deadline: Option<Instant>,
    pub explored: u64,
    pub exhausted: bool,
}

impl Budget {
    pub fn new(node_limit: u64, deadline: Option<Instant>) -> Self {
        Budget {
            node_limit,
            deadline,
            explored: 0,
            exhausted: false,
        }
    }

    #[inline]
    fn tick(&mut self) -> bool {
        self.explored += 1;
        if self.explored > self.node_limit {
            self.exhausted = true;
        } else if self.explored.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.exhausted = true;
                }
            }
        }
        self.exhausted
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Find a completion strictly cheaper than `incumbent`.
    Minimize { incumbent: u64 },
    /// Collect completions costing exactly `target`, stopping after `cap + 1`.
    Enumerate { target: u64, cap: usize },
}

/// A search over `active` nodes with some of them pinned in advance.
pub(crate) struct Problem<'a> {
    pub res: &'a Residual,
    pub active: &'a [usize],
    pub fixed: &'a [(usize, bool)],
    /// Branching priority (higher first), indexed by node.
    pub priority: &'a [usize],
}

#[derive(Debug, Default)]
pub(crate) struct Outcome {
    /// Cheapest completion found (Minimize), as a full
    /// side vector over all residual nodes (inactive nodes left `false`).
    pub best: Option<(u64, Vec<bool>)>,
    pub found: Vec<Vec<bool>>,
    /// The search stopped on the budget before finishing.
    pub interrupted: bool,
}

struct State<'a, 'b> {
    res: &'a Residual,
    order: Vec<usize>,
    side: Vec<i8>,
    inc: Vec<[u64; 2]>,
    cur: u64,
    sum_min: u64,
    suffix_lb: Vec<u64>,
    mode: Mode,
    budget: &'b mut Budget,
    out: Outcome,
}

pub(crate) fn run(problem: &Problem<'_>, mode: Mode, budget: &mut Budget) -> Outcome {
    let res = problem.res;
    let mut is_fixed = vec![false; res.n];
    for &(v, _) in problem.fixed {
        is_fixed[v] = true;
    }
    let mut free: Vec<usize> = problem
        .active
        .iter()
        .copied()
        .filter(|&v| !is_fixed[v])
        .collect();
    free.sort_by(|&a, &b| problem.priority[b].cmp(&problem.priority[a]).then(a.cmp(&b)));

    let nfixed = problem.fixed.len();
    let mut order: Vec<usize> = problem.fixed.iter().map(|&(v, _)| v).collect();
    order.extend_from_slice(&free);

    let mut suffix_lb = vec![0u64; order.len() + 1];
    let rev: Vec<usize> = free.iter().rev().copied().collect();
    let packing = incremental_cycle_packing(res, &rev);
    for (i, lb) in packing.into_iter().enumerate() {
        // rev[..=i] is order[order.len() - 1 - i ..]
        suffix_lb[order.len() - 1 - i] = lb;
    }
    for k in 0..nfixed {
        suffix_lb[k] = suffix_lb[nfixed];
    }

    let mut state = State {
        res,
        order,
        side: vec![-1; res.n],
        inc: vec![[0, 0]; res.n],
        cur: 0,
        sum_min: 0,
        suffix_lb,
        mode,
        budget,
        out: Outcome::default(),
    };
    for &(v, s) in problem.fixed {
        state.assign(v, s as usize);
    }
    let root_bound = state.cur + state.sum_min + state.suffix_lb[nfixed];
    if !state.prune(root_bound) {
        state.dfs(nfixed);
    }
    state.out.interrupted = state.budget.exhausted;
    state.out
}

impl<'a, 'b> State<'a, 'b> {
    fn assign(&mut self, v: usize, s: usize) {
        let [c0, c1] = self.inc[v];
        self.cur += self.inc[v][s];
        // v stops contributing its min once decided; undecided nodes start at 0.
        self.sum_min -= c0.min(c1);
        self.side[v] = s as i8;
        for &(u, w) in &self.res.adj[v] {
            if self.side[u] >= 0 {
                continue;
            }
            let before = self.inc[u][0].min(self.inc[u][1]);
            self.inc[u][0] += pair_cost(w, s == 0);
            self.inc[u][1] += pair_cost(w, s == 1);
            let after = self.inc[u][0].min(self.inc[u][1]);
            self.sum_min = self.sum_min + after - before;
        }
    }

    fn unassign(&mut self, v: usize, s: usize) {
        for &(u, w) in &self.res.adj[v] {
            if self.side[u] >= 0 {
                continue;
            }
            let before = self.inc[u][0].min(self.inc[u][1]);
            self.inc[u][0] -= pair_cost(w, s == 0);
            self.inc[u][1] -= pair_cost(w, s == 1);
            let after = self.inc[u][0].min(self.inc[u][1]);
            self.sum_min = self.sum_min + after - before;
        }
        self.side[v] = -1;
        let [c0, c1] = self.inc[v];
        self.sum_min += c0.min(c1);
        self.cur -= self.inc[v][s];
    }

    fn prune(&self, bound: u64) -> bool {
        match self.mode {
            Mode::Minimize { incumbent } => {
                let best = self.out.best.as_ref().map_or(incumbent, |b| b.0);
                bound >= best
            }
            Mode::Enumerate { target, .. } => bound > target,
        }
    }

    fn snapshot(&self) -> Vec<bool> {
        self.side.iter().map(|&s| s == 1).collect()
    }

    /// Returns true when the search should stop.
    fn dfs(&mut self, k: usize) -> bool {
        if self.budget.tick() {
            return true;
        }
        if k == self.order.len() {
            return self.leaf();
        }
        let v = self.order[k];
        let [c0, c1] = self.inc[v];
        let first = match self.mode {
            Mode::Enumerate { .. } => 0,
            _ => usize::from(c1 < c0),
        };
        for s in [first, 1 - first] {
            self.assign(v, s);
            let bound = self.cur + self.sum_min + self.suffix_lb[k + 1];
            let stop = !self.prune(bound) && self.dfs(k + 1);
            self.unassign(v, s);
            if stop {
                return true;
            }
        }
        false
    }

    fn leaf(&mut self) -> bool {
        let cost = self.cur;
        match self.mode {
            Mode::Minimize { .. } => {
                self.out.best = Some((cost, self.snapshot()));
                false
            }
            Mode::Enumerate { target, cap } => {
                if cost == target {
                    let s = self.snapshot();
                    self.out.found.push(s);
                }
                self.out.found.len() > cap
            }
        }
    }
}
