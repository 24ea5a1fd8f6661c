//! Pairwise cost model behind the 0/1 program.
//!
//! Each unordered node pair carries up to two directed edges. With `p`
//! positive and `q` negative edges on the pair, putting the endpoints on
//! different sides costs `p` and on the same side costs `q`. The constant
//! part `min(p, q)` is paid by every partition (a reciprocal dyad with both
//! signs always frustrates exactly one edge); the rest is a signed weight
//! `w = p - q`: `w > 0` is paid when the endpoints are split, `w < 0` when
//! they are together.

use std::collections::{BTreeMap, HashMap};

use crate::graph::{Sign, SignedDigraph};

#[derive(Debug, Clone)]
pub(crate) struct Residual {
    pub n: usize,
    /// Sorted by neighbor; only nonzero weights.
    pub adj: Vec<Vec<(usize, i32)>>,
    pub constant: u64,
}

#[inline]
pub(crate) fn pair_cost(w: i32, same: bool) -> u64 {
    if same {
        (-w).max(0) as u64
    } else {
        w.max(0) as u64
    }
}

impl Residual {
    pub fn from_graph(g: &SignedDigraph) -> Residual {
        let n = g.node_count();
        let mut adj: Vec<Vec<(usize, i32)>> = vec![Vec::new(); n];
        let mut constant = 0u64;
        for e in g.edges() {
            let (u, v) = (e.source, e.target);
            // Each unordered pair is handled once, from its lower endpoint.
            let reverse = g.edge_sign(v, u);
            if reverse.is_some() && u > v {
                continue;
            }
            let mut p = 0i32;
            let mut q = 0i32;
            for s in std::iter::once(e.sign).chain(reverse) {
                match s {
                    Sign::Positive => p += 1,
                    Sign::Negative => q += 1,
                }
            }
            constant += p.min(q) as u64;
            let w = p - q;
            if w != 0 {
                adj[u].push((v, w));
                adj[v].push((u, w));
            }
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Residual { n, adj, constant }
    }

    #[cfg(test)]
    pub fn weight(&self, u: usize, v: usize) -> Option<i32> {
        let list = &self.adj[u];
        list.binary_search_by_key(&v, |&(x, _)| x)
            .ok()
            .map(|i| list[i].1)
    }

    /// Full frustration count of a side vector, constant included.
    pub fn cost(&self, sides: &[bool]) -> u64 {
        let mut total = self.constant;
        for (u, list) in self.adj.iter().enumerate() {
            for &(v, w) in list {
                if u < v {
                    total += pair_cost(w, sides[u] == sides[v]);
                }
            }
        }
        total
    }

    /// Connected components of the residual graph, each sorted, ordered by
    /// their smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut head = 0;
            while head < members.len() {
                let u = members[head];
                head += 1;
                for &(v, _) in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// Same-side and split costs of a pair with weight `w`.
#[inline]
pub(crate) fn profile(w: i32) -> (u64, u64) {
    (pair_cost(w, true), pair_cost(w, false))
}

/// Pair-cost graph under construction. Adding a pair that already exists
/// sums the two cost profiles and moves their common part into the constant.
#[derive(Debug, Clone)]
pub(crate) struct PairGraph {
    pub adj: Vec<BTreeMap<usize, i32>>,
    pub constant: u64,
}

impl PairGraph {
    pub fn new(n: usize) -> Self {
        PairGraph {
            adj: vec![BTreeMap::new(); n],
            constant: 0,
        }
    }

    pub fn from_residual(res: &Residual) -> Self {
        PairGraph {
            adj: res.adj.iter().map(|l| l.iter().copied().collect()).collect(),
            constant: res.constant,
        }
    }

    /// Adds a pair whose cost is `same` when `u`, `v` share a side and
    /// `split` otherwise.
    pub fn add_profile(&mut self, u: usize, v: usize, same: u64, split: u64) {
        debug_assert_ne!(u, v);
        let (s0, p0) = profile(self.adj[u].get(&v).copied().unwrap_or(0));
        let (s, p) = (s0 + same, p0 + split);
        let common = s.min(p);
        self.constant += common;
        let w = (p - common) as i64 - (s - common) as i64;
        let w = i32::try_from(w).expect("pair weight overflow");
        if w == 0 {
            self.adj[u].remove(&v);
            self.adj[v].remove(&u);
        } else {
            self.adj[u].insert(v, w);
            self.adj[v].insert(u, w);
        }
    }

    pub fn add(&mut self, u: usize, v: usize, w: i32) {
        let (same, split) = profile(w);
        self.add_profile(u, v, same, split);
    }

    pub fn remove(&mut self, u: usize, v: usize) -> Option<i32> {
        self.adj[v].remove(&u);
        self.adj[u].remove(&v)
    }

    pub fn into_residual(self) -> Residual {
        Residual {
            n: self.adj.len(),
            adj: self
                .adj
                .into_iter()
                .map(|m| m.into_iter().collect())
                .collect(),
            constant: self.constant,
        }
    }
}

/// Greedy packing of edge-disjoint unbalanced cycles, adding nodes in
/// `order` one at a time. Entry `i` is the packing value over the subgraph
/// induced by `order[..=i]`.
///
/// Every unbalanced cycle holds at least one frustrated pair under any
/// partition, so a packing in which each pair `uv` is used at most `|w_uv|`
/// times is a lower bound on the pair costs. When a node is added, only
/// cycles through it can be new; they are found shortest-first by BFS over
/// (node, parity) states.
pub(crate) fn incremental_cycle_packing(res: &Residual, order: &[usize]) -> Vec<u64> {
    let mut present = vec![false; res.n];
    // Remaining capacity per adjacency slot, mirrored on both endpoints.
    let mut cap: Vec<Vec<u32>> = res
        .adj
        .iter()
        .map(|l| l.iter().map(|&(_, w)| w.unsigned_abs()).collect())
        .collect();
    let mut total = 0u64;
    let mut out = Vec::with_capacity(order.len());
    let mut bfs = CycleSearch::new(res.n);
    for &v in order {
        present[v] = true;
        while let Some(cycle) = bfs.shortest_unbalanced(res, &present, &cap, v) {
            let t = cycle
                .iter()
                .map(|&(a, slot)| cap[a][slot])
                .min()
                .expect("cycle has edges");
            for &(a, slot) in &cycle {
                let b = res.adj[a][slot].0;
                cap[a][slot] -= t;
                let back = res.adj[b]
                    .binary_search_by_key(&a, |&(x, _)| x)
                    .expect("symmetric adjacency");
                cap[b][back] -= t;
            }
            total += t as u64;
        }
        out.push(total);
    }
    out
}

struct CycleSearch {
    /// Parent state of (node, parity), as (node, parity, slot used).
    parent: Vec<[Option<(usize, u8, usize)>; 2]>,
    seen: Vec<[bool; 2]>,
    touched: Vec<usize>,
}

impl CycleSearch {
    fn new(n: usize) -> Self {
        CycleSearch {
            parent: vec![[None; 2]; n],
            seen: vec![[false; 2]; n],
            touched: Vec::new(),
        }
    }

    /// A simple unbalanced cycle through or reachable from `v` using pairs
    /// with spare capacity, as (node, adjacency slot) steps.
    fn shortest_unbalanced(
        &mut self,
        res: &Residual,
        present: &[bool],
        cap: &[Vec<u32>],
        v: usize,
    ) -> Option<Vec<(usize, usize)>> {
        for &x in &self.touched {
            self.seen[x] = [false; 2];
            self.parent[x] = [None; 2];
        }
        self.touched.clear();
        let mut queue = std::collections::VecDeque::new();
        self.seen[v][0] = true;
        self.touched.push(v);
        queue.push_back((v, 0u8));
        let mut hit = false;
        while let Some((a, pa)) = queue.pop_front() {
            for (slot, &(b, w)) in res.adj[a].iter().enumerate() {
                if !present[b] || cap[a][slot] == 0 {
                    continue;
                }
                let pb = pa ^ u8::from(w < 0);
                if self.seen[b][pb as usize] {
                    continue;
                }
                self.seen[b][pb as usize] = true;
                self.parent[b][pb as usize] = Some((a, pa, slot));
                self.touched.push(b);
                if b == v && pb == 1 {
                    hit = true;
                    break;
                }
                queue.push_back((b, pb));
            }
            if hit {
                break;
            }
        }
        if !hit {
            return None;
        }
        // Closed walk v -> ... -> v with odd parity, as steps in walk order.
        let mut walk = Vec::new();
        let (mut x, mut px) = (v, 1u8);
        while let Some((a, pa, slot)) = self.parent[x][px as usize] {
            walk.push((a, slot));
            x = a;
            px = pa;
            if x == v && px == 0 {
                break;
            }
        }
        walk.reverse();
        Some(odd_simple_cycle(res, walk))
    }
}

/// Cuts repeated nodes out of an odd closed walk until a simple odd cycle
/// remains.
fn odd_simple_cycle(res: &Residual, mut walk: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    let parity = |steps: &[(usize, usize)]| {
        steps
            .iter()
            .filter(|&&(a, slot)| res.adj[a][slot].1 < 0)
            .count()
            % 2
    };
    loop {
        let mut first_at: HashMap<usize, usize> = HashMap::new();
        let mut split = None;
        for (i, &(a, _)) in walk.iter().enumerate() {
            if let Some(&j) = first_at.get(&a) {
                split = Some((j, i));
                break;
            }
            first_at.insert(a, i);
        }
        let Some((j, i)) = split else {
            return walk;
        };
        // walk[j..i] is a closed sub-walk starting and ending at the same node.
        if parity(&walk[j..i]) == 1 {
            walk = walk[j..i].to_vec();
        } else {
            walk.drain(j..i);
        }
    }
}
