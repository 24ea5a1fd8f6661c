//! Multilevel structural balance for signed directed networks.
//!
//! Balance is evaluated at three levels:
//!
//! * micro: transitive triads and their semicycles ([`micro`]),
//! * meso: cohesiveness and divisiveness of an optimal bipartition ([`meso`]),
//! * macro: the frustration index `L(G)` and its normalized form `F(G)`
//!   ([`frustration`]).
//!
//! [`ingest`] turns CSV/GML edge lists into [`graph::SignedDigraph`] values and
//! [`report`] ties everything together into measurement rows and partition
//! exports.

pub mod frustration;
pub mod graph;
pub mod ingest;
pub mod meso;
pub mod micro;
pub mod report;

pub use frustration::{
    classify_edges, enumerate_optima, frustration_count, local_search, lower_bound, normalized_f,
    solve_exact, Bounds, EdgeClass, Optima, SolveOptions, SolveResult,
};
pub use graph::{
    flatten, switch, ConflictPolicy, GraphError, GraphSummary, MultilayerNetwork, NodeId,
    Partition, Sign, SignedDigraph, TemporalNetwork,
};
pub use micro::{micro_stats, CensusType, MicroReport, Semicycle, Triad};
