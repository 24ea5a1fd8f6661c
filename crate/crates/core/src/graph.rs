//! Signed digraph model: signs, node identifiers, graphs, partitions and the
//! temporal / multilayer containers built on top of them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on node {0}")]
    SelfLoop(String),
    #[error("ordered pair ({tail}, {head}) carries both signs")]
    ConflictingSign { tail: String, head: String },
    #[error("invalid sign value {0}, expected +1 or -1")]
    InvalidSign(i64),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("node {0} has no side assigned")]
    UnassignedNode(String),
    #[error("partition covers {found} nodes but the graph has {expected}")]
    PartitionSize { expected: usize, found: usize },
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("{0} must not be empty")]
    Empty(&'static str),
}

/// Edge sign. There is no neutral value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_int(value: i64) -> Result<Sign, GraphError> {
        match value {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            other => Err(GraphError::InvalidSign(other)),
        }
    }

    /// Sign of a nonzero number; `None` for zero or NaN.
    pub fn of(value: f64) -> Option<Sign> {
        if value > 0.0 {
            Some(Sign::Positive)
        } else if value < 0.0 {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn product(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Opaque node identifier.
///
/// Ordering is lexicographic, except that two purely numeric identifiers are
/// compared by numeric value (as if zero-padded to equal width) and numeric
/// identifiers sort before all others.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn numeric_digits(&self) -> Option<&str> {
        let s = self.0.as_str();
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            let trimmed = s.trim_start_matches('0');
            Some(if trimmed.is_empty() { "0" } else { trimmed })
        } else {
            None
        }
    }
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric_digits(), other.numeric_digits()) {
            (Some(a), Some(b)) => a
                .len()
                .cmp(&b.len())
                .then_with(|| a.cmp(b))
                .then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId::new(s)
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

/// A directed signed edge between node indices of its graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub sign: Sign,
}

/// Immutable signed digraph without self-loops and with at most one edge per
/// ordered pair. Nodes are stored in [`NodeId`] order, so node index order is
/// the canonical node ordering used everywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedDigraph {
    nodes: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    edges: Vec<Edge>,
    out_adj: Vec<Vec<(usize, Sign)>>,
    in_adj: Vec<Vec<(usize, Sign)>>,
}

/// Incremental construction of a [`SignedDigraph`].
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    nodes: HashSet<NodeId>,
    edges: BTreeMap<(NodeId, NodeId), Sign>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an isolated node (no-op if it already exists).
    pub fn node(&mut self, id: impl Into<NodeId>) -> &mut Self {
        self.nodes.insert(id.into());
        self
    }

    /// Adds an edge; an identical duplicate is ignored.
    pub fn edge(
        &mut self,
        source: impl Into<NodeId>,
        target: impl Into<NodeId>,
        sign: Sign,
    ) -> Result<&mut Self, GraphError> {
        let source = source.into();
        let target = target.into();
        if source == target {
            return Err(GraphError::SelfLoop(source.0));
        }
        match self.edges.get(&(source.clone(), target.clone())) {
            Some(&existing) if existing != sign => {
                return Err(GraphError::ConflictingSign {
                    tail: source.0,
                    head: target.0,
                })
            }
            Some(_) => {}
            None => {
                self.nodes.insert(source.clone());
                self.nodes.insert(target.clone());
                self.edges.insert((source, target), sign);
            }
        }
        Ok(self)
    }

    pub fn build(&self) -> SignedDigraph {
        let mut nodes: Vec<NodeId> = self.nodes.iter().cloned().collect();
        nodes.sort();
        let index: HashMap<NodeId, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|((s, t), &sign)| Edge {
                source: index[s],
                target: index[t],
                sign,
            })
            .collect();
        edges.sort();
        let mut out_adj = vec![Vec::new(); nodes.len()];
        let mut in_adj = vec![Vec::new(); nodes.len()];
        for e in &edges {
            out_adj[e.source].push((e.target, e.sign));
            in_adj[e.target].push((e.source, e.sign));
        }
        for list in in_adj.iter_mut() {
            list.sort();
        }
        SignedDigraph {
            nodes,
            index,
            edges,
            out_adj,
            in_adj,
        }
    }
}

impl SignedDigraph {
    /// Builds a graph from `(source, target, sign)` triples with integer signs.
    pub fn from_triples<S, T>(
        triples: impl IntoIterator<Item = (S, T, i64)>,
    ) -> Result<SignedDigraph, GraphError>
    where
        S: Into<NodeId>,
        T: Into<NodeId>,
    {
        let mut builder = GraphBuilder::new();
        for (s, t, v) in triples {
            let sign = Sign::from_int(v)?;
            builder.edge(s, t, sign)?;
        }
        Ok(builder.build())
    }

    pub fn from_edges<S, T>(
        edges: impl IntoIterator<Item = (S, T, Sign)>,
    ) -> Result<SignedDigraph, GraphError>
    where
        S: Into<NodeId>,
        T: Into<NodeId>,
    {
        let mut builder = GraphBuilder::new();
        for (s, t, sign) in edges {
            builder.edge(s, t, sign)?;
        }
        Ok(builder.build())
    }

    /// A builder pre-filled with this graph's nodes and edges.
    pub fn to_builder(&self) -> GraphBuilder {
        let mut b = GraphBuilder::new();
        for id in &self.nodes {
            b.node(id.clone());
        }
        for e in &self.edges {
            b.edges.insert(
                (self.nodes[e.source].clone(), self.nodes[e.target].clone()),
                e.sign,
            );
        }
        b
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn positive_count(&self) -> usize {
        self.edges.iter().filter(|e| e.sign.is_positive()).count()
    }

    pub fn negative_count(&self) -> usize {
        self.edge_count() - self.positive_count()
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node(&self, index: usize) -> &NodeId {
        &self.nodes[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(&NodeId::new(id)).copied()
    }

    pub fn index_of_id(&self, id: &NodeId) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Edges sorted by `(source, target)` node index.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, node: usize) -> &[(usize, Sign)] {
        &self.out_adj[node]
    }

    pub fn in_edges(&self, node: usize) -> &[(usize, Sign)] {
        &self.in_adj[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.out_adj[node].len() + self.in_adj[node].len()
    }

    pub fn edge_sign(&self, source: usize, target: usize) -> Option<Sign> {
        let out = &self.out_adj[source];
        out.binary_search_by_key(&target, |&(t, _)| t)
            .ok()
            .map(|i| out[i].1)
    }

    /// Sorted neighbor lists of the underlying undirected simple graph.
    pub fn undirected_neighbors(&self) -> Vec<Vec<usize>> {
        let mut nbrs = vec![Vec::new(); self.node_count()];
        for e in &self.edges {
            nbrs[e.source].push(e.target);
            nbrs[e.target].push(e.source);
        }
        for list in nbrs.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        nbrs
    }

    pub fn summary(&self) -> GraphSummary {
        let n = self.node_count();
        let m = self.edge_count();
        let m_plus = self.positive_count();
        let density = if n >= 2 {
            Some(m as f64 / (n as f64 * (n as f64 - 1.0)))
        } else {
            None
        };
        GraphSummary {
            n,
            m,
            m_plus,
            m_minus: m - m_plus,
            density,
        }
    }
}

/// Counts and density of a graph. Density is `None` for fewer than two nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    pub m_plus: usize,
    pub m_minus: usize,
    pub density: Option<f64>,
}

pub fn summary(g: &SignedDigraph) -> GraphSummary {
    g.summary()
}

/// Two-way split of a graph's nodes, indexed by node index.
///
/// `false` is side 0, `true` is side 1. The derived ordering is the
/// lexicographic order of side vectors under the node ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    sides: Vec<bool>,
}

impl Partition {
    pub fn new(sides: Vec<bool>) -> Self {
        Partition { sides }
    }

    /// Every node on side 0.
    pub fn uniform(n: usize) -> Self {
        Partition {
            sides: vec![false; n],
        }
    }

    /// Partition whose side-1 members are `members` (node ids of `g`).
    pub fn from_members<'a>(
        g: &SignedDigraph,
        members: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self, GraphError> {
        let mut sides = vec![false; g.node_count()];
        for id in members {
            let i = g
                .index_of(id)
                .ok_or_else(|| GraphError::UnknownNode(id.to_string()))?;
            sides[i] = true;
        }
        Ok(Partition { sides })
    }

    /// Partition from an explicit node → side map that must cover every node.
    pub fn from_assignment(
        g: &SignedDigraph,
        assignment: &HashMap<NodeId, u8>,
    ) -> Result<Self, GraphError> {
        let mut sides = vec![None; g.node_count()];
        for (id, &side) in assignment {
            let i = g
                .index_of_id(id)
                .ok_or_else(|| GraphError::UnknownNode(id.to_string()))?;
            sides[i] = Some(side != 0);
        }
        let sides = sides
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.ok_or_else(|| GraphError::UnassignedNode(g.node(i).to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Partition { sides })
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn side(&self, node: usize) -> bool {
        self.sides[node]
    }

    pub fn sides(&self) -> &[bool] {
        &self.sides
    }

    pub fn same_side(&self, a: usize, b: usize) -> bool {
        self.sides[a] == self.sides[b]
    }

    pub fn complement(&self) -> Partition {
        Partition {
            sides: self.sides.iter().map(|s| !s).collect(),
        }
    }

    /// Lowest node on side 0.
    pub fn canonical(&self) -> Partition {
        match self.sides.first() {
            Some(true) => self.complement(),
            _ => self.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.sides.first() != Some(&true)
    }

    /// Node indices on side 1.
    pub fn side_one(&self) -> Vec<usize> {
        (0..self.sides.len()).filter(|&i| self.sides[i]).collect()
    }

    /// Node ids on side 1 of the canonical form.
    pub fn side_one_ids<'g>(&self, g: &'g SignedDigraph) -> Vec<&'g NodeId> {
        self.canonical()
            .side_one()
            .into_iter()
            .map(|i| g.node(i))
            .collect()
    }

    pub(crate) fn check(&self, g: &SignedDigraph) -> Result<(), GraphError> {
        if self.sides.len() != g.node_count() {
            Err(GraphError::PartitionSize {
                expected: g.node_count(),
                found: self.sides.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Ordered, uniquely labelled snapshots of one network.
#[derive(Debug, Clone)]
pub struct TemporalNetwork {
    snapshots: Vec<(String, SignedDigraph)>,
}

impl TemporalNetwork {
    pub fn new(snapshots: Vec<(String, SignedDigraph)>) -> Result<Self, GraphError> {
        if snapshots.is_empty() {
            return Err(GraphError::Empty("snapshot list"));
        }
        check_unique(snapshots.iter().map(|(l, _)| l.as_str()))?;
        Ok(TemporalNetwork { snapshots })
    }

    pub fn snapshots(&self) -> &[(String, SignedDigraph)] {
        &self.snapshots
    }
}

/// Named layers over a shared population of nodes, in insertion order.
#[derive(Debug, Clone)]
pub struct MultilayerNetwork {
    layers: Vec<(String, SignedDigraph)>,
}

impl MultilayerNetwork {
    pub fn new(layers: Vec<(String, SignedDigraph)>) -> Result<Self, GraphError> {
        if layers.is_empty() {
            return Err(GraphError::Empty("layer list"));
        }
        check_unique(layers.iter().map(|(l, _)| l.as_str()))?;
        Ok(MultilayerNetwork { layers })
    }

    pub fn layers(&self) -> &[(String, SignedDigraph)] {
        &self.layers
    }

    pub fn layer(&self, name: &str) -> Option<&SignedDigraph> {
        self.layers.iter().find(|(l, _)| l == name).map(|(_, g)| g)
    }
}

fn check_unique<'a>(labels: impl Iterator<Item = &'a str>) -> Result<(), GraphError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(GraphError::DuplicateLabel(l.to_string()));
        }
    }
    Ok(())
}

/// How [`flatten`] resolves an ordered pair carrying opposite signs in
/// different layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConflictPolicy {
    #[default]
    Error,
    KeepNegative,
    KeepPositive,
}

/// Union of all layers. Same-sign repeats collapse to one edge.
pub fn flatten(
    ml: &MultilayerNetwork,
    policy: ConflictPolicy,
) -> Result<SignedDigraph, GraphError> {
    let mut nodes: HashSet<NodeId> = HashSet::new();
    let mut edges: BTreeMap<(NodeId, NodeId), Sign> = BTreeMap::new();
    for (_, g) in ml.layers() {
        nodes.extend(g.nodes().iter().cloned());
        for e in g.edges() {
            let key = (g.node(e.source).clone(), g.node(e.target).clone());
            match edges.get(&key).copied() {
                None => {
                    edges.insert(key, e.sign);
                }
                Some(existing) if existing == e.sign => {}
                Some(_) => match policy {
                    ConflictPolicy::Error => {
                        return Err(GraphError::ConflictingSign {
                            tail: key.0.to_string(),
                            head: key.1.to_string(),
                        })
                    }
                    ConflictPolicy::KeepNegative => {
                        edges.insert(key, Sign::Negative);
                    }
                    ConflictPolicy::KeepPositive => {
                        edges.insert(key, Sign::Positive);
                    }
                },
            }
        }
    }
    Ok(GraphBuilder { nodes, edges }.build())
}

/// Negates every edge with exactly one endpoint in `subset`.
pub fn switch<'a>(
    g: &SignedDigraph,
    subset: impl IntoIterator<Item = &'a str>,
) -> Result<SignedDigraph, GraphError> {
    let mut inside = vec![false; g.node_count()];
    for id in subset {
        let i = g
            .index_of(id)
            .ok_or_else(|| GraphError::UnknownNode(id.to_string()))?;
        inside[i] = true;
    }
    Ok(switch_indices(g, &inside))
}

/// [`switch`] with the subset given as a membership mask over node indices.
pub fn switch_indices(g: &SignedDigraph, inside: &[bool]) -> SignedDigraph {
    let mut out = g.clone();
    for e in out.edges.iter_mut() {
        if inside[e.source] != inside[e.target] {
            e.sign = e.sign.flipped();
        }
    }
    for (u, list) in out.out_adj.iter_mut().enumerate() {
        for (v, s) in list.iter_mut() {
            if inside[u] != inside[*v] {
                *s = s.flipped();
            }
        }
    }
    for (v, list) in out.in_adj.iter_mut().enumerate() {
        for (u, s) in list.iter_mut() {
            if inside[*u] != inside[v] {
                *s = s.flipped();
            }
        }
    }
    out
}
