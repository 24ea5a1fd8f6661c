//! Subgroup-level balance: cohesiveness `C(P)` and divisiveness `D(P)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frustration::frustration_count;
use crate::graph::{Edge, GraphError, Partition, SignedDigraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MesoError {
    #[error("no optimal partitions given")]
    NoOptima,
    #[error("optimal partitions disagree on frustration count ({0} vs {1})")]
    InconsistentOptima(u64, u64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Edges with both endpoints on one side, and edges crossing sides.
pub fn internal_external_split(
    g: &SignedDigraph,
    p: &Partition,
) -> Result<(Vec<Edge>, Vec<Edge>), GraphError> {
    p.check(g)?;
    Ok(g.edges()
        .iter()
        .partition(|e| p.same_side(e.source, e.target)))
}

/// Positive share of internal edges; `None` with no internal edges.
pub fn cohesiveness(g: &SignedDigraph, p: &Partition) -> Result<Option<f64>, GraphError> {
    let (internal, _) = internal_external_split(g, p)?;
    Ok(share(&internal, true))
}

/// Negative share of external edges; `None` with no external edges.
pub fn divisiveness(g: &SignedDigraph, p: &Partition) -> Result<Option<f64>, GraphError> {
    let (_, external) = internal_external_split(g, p)?;
    Ok(share(&external, false))
}

fn share(edges: &[Edge], positive: bool) -> Option<f64> {
    if edges.is_empty() {
        return None;
    }
    let hits = edges
        .iter()
        .filter(|e| e.sign.is_positive() == positive)
        .count();
    Some(hits as f64 / edges.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumMeso {
    pub partition: Partition,
    pub c: Option<f64>,
    pub d: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MesoReport {
    /// One entry per optimum, in lexicographic partition order.
    pub per_optimum: Vec<OptimumMeso>,
    pub canonical_c: Option<f64>,
    pub canonical_d: Option<f64>,
    pub c_stddev: f64,
    pub d_stddev: f64,
}

/// `C` and `D` at every optimum. Canonical values come from the
/// lexicographically smallest canonical partition; spreads are sample
/// standard deviations over the defined values (0 for a single optimum).
pub fn meso_report(g: &SignedDigraph, optima: &[Partition]) -> Result<MesoReport, MesoError> {
    if optima.is_empty() {
        return Err(MesoError::NoOptima);
    }
    let mut parts: Vec<Partition> = optima.iter().map(Partition::canonical).collect();
    parts.sort();
    parts.dedup();
    let first = frustration_count(g, &parts[0])?;
    for p in &parts[1..] {
        let c = frustration_count(g, p)?;
        if c != first {
            return Err(MesoError::InconsistentOptima(first, c));
        }
    }
    let per_optimum = parts
        .into_iter()
        .map(|partition| {
            let c = cohesiveness(g, &partition)?;
            let d = divisiveness(g, &partition)?;
            Ok(OptimumMeso { partition, c, d })
        })
        .collect::<Result<Vec<_>, GraphError>>()?;
    let c_values: Vec<f64> = per_optimum.iter().filter_map(|o| o.c).collect();
    let d_values: Vec<f64> = per_optimum.iter().filter_map(|o| o.d).collect();
    Ok(MesoReport {
        canonical_c: per_optimum[0].c,
        canonical_d: per_optimum[0].d,
        c_stddev: sample_stddev(&c_values),
        d_stddev: sample_stddev(&d_values),
        per_optimum,
    })
}

fn sample_stddev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}
