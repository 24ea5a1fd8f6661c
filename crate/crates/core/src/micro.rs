//! Triads, semicycles and triad-level balance `T(G)`.
//!
//! A triad is any three nodes with at least one directed edge between every
//! pair. A semicycle picks one edge per pair. A semicycle is transitive when
//! every chained pair of its edges `A→B, B→C` has the closing edge `A→C`
//! somewhere in the triad's edge set, and balanced when its sign product is
//! positive. Only triads whose semicycles are all transitive are counted.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{Sign, SignedDigraph};

/// Null-dyad-free classes of the Holland–Leinhardt triad census.
///
/// Labels follow the NetworkX convention: in `120D` the node outside the
/// mutual dyad sends to both others, in `120U` it receives from both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CensusType {
    #[serde(rename = "030T")]
    T030T,
    #[serde(rename = "030C")]
    T030C,
    #[serde(rename = "120D")]
    T120D,
    #[serde(rename = "120U")]
    T120U,
    #[serde(rename = "120C")]
    T120C,
    #[serde(rename = "210")]
    T210,
    #[serde(rename = "300")]
    T300,
}

impl CensusType {
    pub const ALL: [CensusType; 7] = [
        CensusType::T030T,
        CensusType::T030C,
        CensusType::T120D,
        CensusType::T120U,
        CensusType::T120C,
        CensusType::T210,
        CensusType::T300,
    ];

    /// The four classes whose semicycles are all transitive.
    pub const TRANSITIVE: [CensusType; 4] = [
        CensusType::T300,
        CensusType::T120D,
        CensusType::T120U,
        CensusType::T030T,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CensusType::T030T => "030T",
            CensusType::T030C => "030C",
            CensusType::T120D => "120D",
            CensusType::T120U => "120U",
            CensusType::T120C => "120C",
            CensusType::T210 => "210",
            CensusType::T300 => "300",
        }
    }

    pub fn is_transitive_class(self) -> bool {
        Self::TRANSITIVE.contains(&self)
    }
}

impl fmt::Display for CensusType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Local pair indices: (0,1), (0,2), (1,2).
const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Three mutually connected nodes together with every edge among them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triad {
    nodes: [usize; 3],
    /// `arcs[2 * pair + 0]` is low→high, `arcs[2 * pair + 1]` is high→low
    /// in local positions, see [`PAIRS`].
    arcs: [Option<Sign>; 6],
}

/// A directed signed edge between graph node indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub source: usize,
    pub target: usize,
    pub sign: Sign,
}

/// One edge per pair of a triad.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Semicycle {
    pub arcs: [Arc; 3],
}

impl Triad {
    /// Reads the triad on `nodes` from `g`; `None` if some pair is unconnected.
    pub fn from_graph(g: &SignedDigraph, mut nodes: [usize; 3]) -> Option<Triad> {
        nodes.sort_unstable();
        let mut arcs = [None; 6];
        for (p, &(a, b)) in PAIRS.iter().enumerate() {
            arcs[2 * p] = g.edge_sign(nodes[a], nodes[b]);
            arcs[2 * p + 1] = g.edge_sign(nodes[b], nodes[a]);
            if arcs[2 * p].is_none() && arcs[2 * p + 1].is_none() {
                return None;
            }
        }
        Some(Triad { nodes, arcs })
    }

    /// Sorted node indices.
    pub fn nodes(&self) -> [usize; 3] {
        self.nodes
    }

    fn local_sign(&self, from: usize, to: usize) -> Option<Sign> {
        let (pair, dir) = match (from, to) {
            (0, 1) => (0, 0),
            (1, 0) => (0, 1),
            (0, 2) => (1, 0),
            (2, 0) => (1, 1),
            (1, 2) => (2, 0),
            (2, 1) => (2, 1),
            _ => return None,
        };
        self.arcs[2 * pair + dir]
    }

    fn local_of(&self, node: usize) -> Option<usize> {
        self.nodes.iter().position(|&n| n == node)
    }

    /// Whether the directed edge `source → target` (graph indices) is present.
    pub fn has_arc(&self, source: usize, target: usize) -> bool {
        match (self.local_of(source), self.local_of(target)) {
            (Some(a), Some(b)) => self.local_sign(a, b).is_some(),
            _ => false,
        }
    }

    /// All edges of the triad (3 to 6).
    pub fn arcs(&self) -> Vec<Arc> {
        let mut out = Vec::with_capacity(6);
        for (p, &(a, b)) in PAIRS.iter().enumerate() {
            if let Some(sign) = self.arcs[2 * p] {
                out.push(Arc {
                    source: self.nodes[a],
                    target: self.nodes[b],
                    sign,
                });
            }
            if let Some(sign) = self.arcs[2 * p + 1] {
                out.push(Arc {
                    source: self.nodes[b],
                    target: self.nodes[a],
                    sign,
                });
            }
        }
        out
    }

    pub fn mutual_dyads(&self) -> usize {
        (0..3)
            .filter(|p| self.arcs[2 * p].is_some() && self.arcs[2 * p + 1].is_some())
            .count()
    }

    /// Census class of this triad.
    pub fn classify(&self) -> CensusType {
        let has = |a: usize, b: usize| self.local_sign(a, b).is_some();
        match self.mutual_dyads() {
            3 => CensusType::T300,
            2 => CensusType::T210,
            1 => {
                let mp = (0..3)
                    .find(|&p| self.arcs[2 * p].is_some() && self.arcs[2 * p + 1].is_some())
                    .expect("one mutual dyad");
                let (x, y) = PAIRS[mp];
                let z = 3 - x - y;
                match (has(z, x), has(z, y)) {
                    (true, true) => CensusType::T120D,
                    (false, false) => CensusType::T120U,
                    _ => CensusType::T120C,
                }
            }
            _ => {
                // Three asymmetric dyads: cyclic iff every node has out-degree 1.
                let cyclic = (0..3).all(|a| (0..3).filter(|&b| b != a && has(a, b)).count() == 1);
                if cyclic {
                    CensusType::T030C
                } else {
                    CensusType::T030T
                }
            }
        }
    }

    /// Every one-edge-per-pair selection, `2^(mutual dyads)` of them.
    pub fn semicycles(&self) -> Vec<Semicycle> {
        let options: Vec<Vec<Arc>> = PAIRS
            .iter()
            .enumerate()
            .map(|(p, &(a, b))| {
                let mut v = Vec::with_capacity(2);
                if let Some(sign) = self.arcs[2 * p] {
                    v.push(Arc {
                        source: self.nodes[a],
                        target: self.nodes[b],
                        sign,
                    });
                }
                if let Some(sign) = self.arcs[2 * p + 1] {
                    v.push(Arc {
                        source: self.nodes[b],
                        target: self.nodes[a],
                        sign,
                    });
                }
                v
            })
            .collect();
        let mut out = Vec::with_capacity(8);
        for &e0 in &options[0] {
            for &e1 in &options[1] {
                for &e2 in &options[2] {
                    out.push(Semicycle { arcs: [e0, e1, e2] });
                }
            }
        }
        out
    }
}

pub fn classify_triad(t: &Triad) -> CensusType {
    t.classify()
}

pub fn semicycles(t: &Triad) -> Vec<Semicycle> {
    t.semicycles()
}

/// Every chained pair `A→B, B→C` of the semicycle must close with `A→C` in
/// the triad's edge set.
pub fn is_transitive(sc: &Semicycle, t: &Triad) -> bool {
    for first in &sc.arcs {
        for second in &sc.arcs {
            if first.target == second.source
                && first.source != second.target
                && !t.has_arc(first.source, second.target)
            {
                return false;
            }
        }
    }
    true
}

pub fn semicycle_balanced(sc: &Semicycle) -> bool {
    sc.arcs
        .iter()
        .fold(Sign::Positive, |acc, a| acc.product(a.sign))
        .is_positive()
}

/// Lazily enumerates triads in lexicographic order of their sorted node
/// indices (which is the node-id order of the graph).
pub struct TriadIter<'g> {
    g: &'g SignedDigraph,
    nbrs: Vec<Vec<usize>>,
    u: usize,
    vi: usize,
    wi: usize,
}

impl<'g> Iterator for TriadIter<'g> {
    type Item = Triad;

    fn next(&mut self) -> Option<Triad> {
        let n = self.nbrs.len();
        while self.u < n {
            let u = self.u;
            let nu = &self.nbrs[u];
            while self.vi < nu.len() {
                let v = nu[self.vi];
                if v <= u {
                    self.vi += 1;
                    continue;
                }
                let nv = &self.nbrs[v];
                while self.wi < nv.len() {
                    let w = nv[self.wi];
                    self.wi += 1;
                    if w > v && nu.binary_search(&w).is_ok() {
                        return Triad::from_graph(self.g, [u, v, w]);
                    }
                }
                self.vi += 1;
                self.wi = 0;
            }
            self.u += 1;
            self.vi = 0;
            self.wi = 0;
        }
        None
    }
}

pub fn enumerate_triads(g: &SignedDigraph) -> TriadIter<'_> {
    TriadIter {
        g,
        nbrs: g.undirected_neighbors(),
        u: 0,
        vi: 0,
        wi: 0,
    }
}

/// Triad-level balance summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MicroReport {
    /// All triads regardless of transitivity.
    pub triad_count: u64,
    pub transitive_triad_count: u64,
    pub balanced_count: u64,
    pub unbalanced_count: u64,
    /// Balanced / transitive; `None` without transitive triads.
    pub t: Option<f64>,
    pub census: BTreeMap<CensusType, u64>,
    pub balanced_by_type: BTreeMap<CensusType, u64>,
    pub unbalanced_by_type: BTreeMap<CensusType, u64>,
}

impl MicroReport {
    /// Balanced triads of each transitive class over all transitive triads.
    /// The four fractions sum to `t`.
    pub fn balanced_fraction_by_type(&self) -> BTreeMap<CensusType, f64> {
        CensusType::TRANSITIVE
            .iter()
            .map(|&c| {
                let b = self.balanced_by_type.get(&c).copied().unwrap_or(0);
                let frac = if self.transitive_triad_count > 0 {
                    b as f64 / self.transitive_triad_count as f64
                } else {
                    0.0
                };
                (c, frac)
            })
            .collect()
    }
}

#[derive(Default, Clone)]
struct Tally {
    triads: u64,
    census: [u64; 7],
    balanced: [u64; 7],
    unbalanced: [u64; 7],
}

impl Tally {
    fn add(&mut self, t: &Triad) {
        let class = t.classify();
        let ci = class as usize;
        self.triads += 1;
        self.census[ci] += 1;
        let scs = t.semicycles();
        if !scs.iter().all(|sc| is_transitive(sc, t)) {
            return;
        }
        debug_assert!(class.is_transitive_class());
        if scs.iter().all(semicycle_balanced) {
            self.balanced[ci] += 1;
        } else {
            self.unbalanced[ci] += 1;
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.triads += other.triads;
        for i in 0..7 {
            self.census[i] += other.census[i];
            self.balanced[i] += other.balanced[i];
            self.unbalanced[i] += other.unbalanced[i];
        }
        self
    }
}

/// Computes `T(G)` and the per-class tallies.
///
/// Work is split by the lowest node of each triad; the tallies are integer
/// sums, so the result does not depend on the number of worker threads.
pub fn micro_stats(g: &SignedDigraph) -> MicroReport {
    let nbrs = g.undirected_neighbors();
    let tally = (0..g.node_count())
        .into_par_iter()
        .map(|u| {
            let mut tally = Tally::default();
            let nu = &nbrs[u];
            for &v in nu.iter().filter(|&&v| v > u) {
                for &w in nbrs[v].iter().filter(|&&w| w > v) {
                    if nu.binary_search(&w).is_ok() {
                        let t = Triad::from_graph(g, [u, v, w]).expect("connected triple");
                        tally.add(&t);
                    }
                }
            }
            tally
        })
        .reduce(Tally::default, Tally::merge);

    let to_map = |counts: &[u64; 7], only_transitive: bool| -> BTreeMap<CensusType, u64> {
        CensusType::ALL
            .iter()
            .filter(|c| !only_transitive || c.is_transitive_class())
            .map(|&c| (c, counts[c as usize]))
            .collect()
    };
    let balanced: u64 = tally.balanced.iter().sum();
    let unbalanced: u64 = tally.unbalanced.iter().sum();
    let transitive = balanced + unbalanced;
    MicroReport {
        triad_count: tally.triads,
        transitive_triad_count: transitive,
        balanced_count: balanced,
        unbalanced_count: unbalanced,
        t: (transitive > 0).then(|| balanced as f64 / transitive as f64),
        census: to_map(&tally.census, false),
        balanced_by_type: to_map(&tally.balanced, true),
        unbalanced_by_type: to_map(&tally.unbalanced, true),
    }
}
