//! Measurement pipeline: ingest, micro census, exact solve, meso measures,
//! and the exported tables.

mod config;
mod export;
mod stats;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frustration::{normalized_f, solve_exact, SolveOptions, SolveResult};
use crate::graph::{flatten, GraphError, MultilayerNetwork, SignedDigraph};
use crate::ingest::{
    apply_sign_rule, build_signed, group_records, parse_edge_csv, parse_gml, symmetrize,
    IngestError, RawRecord,
};
use crate::meso::{meso_report, MesoError, MesoReport};
use crate::micro::{micro_stats, CensusType, MicroReport};

pub use config::{
    DatasetConfig, InputFormat, InputPart, NetworkConfig, NetworkKind, SolverConfig,
};
pub use export::{
    assignment_from_cells, partition_cells, read_partitions_csv, write_measurements_csv,
    write_outputs, write_partitions_csv, PartitionColumn, CLUSTERING_VARIANT,
};
pub use stats::{clustering_coefficient, fmt3, pearson, round3, StatsError};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("{label}: {source}")]
    Ingest { label: String, source: IngestError },
    #[error("{label}: {source}")]
    Graph { label: String, source: GraphError },
    #[error("{label}: {source}")]
    Meso { label: String, source: MesoError },
    #[error("{label}: network has no edges")]
    EmptyNetwork { label: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl ReportError {
    /// True for errors caused by the configuration or its inputs rather than
    /// by the run itself.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            ReportError::Config(_)
                | ReportError::Ingest { .. }
                | ReportError::Graph { .. }
                | ReportError::EmptyNetwork { .. }
                | ReportError::Io { .. }
        )
    }
}

/// One row of `network-measurements.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRow {
    pub network_label: String,
    pub n: usize,
    pub m: usize,
    pub m_plus: usize,
    pub m_minus: usize,
    pub balanced_triads: u64,
    pub unbalanced_triads: u64,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub clustering_coefficient: Option<f64>,
    pub density: Option<f64>,
    /// Best frustration count found; the optimum when `proven`.
    #[serde(rename = "L")]
    pub l: u64,
    /// Proven lower bound; equals `l` when `proven`.
    pub l_lower: u64,
    #[serde(rename = "F")]
    pub f: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[serde(rename = "D")]
    pub d: Option<f64>,
    /// Balanced triads of each transitive type over all transitive triads.
    pub balanced_census_by_type: BTreeMap<CensusType, f64>,
    pub proven: bool,
    /// Number of optimal partitions, when they were enumerated to completion.
    pub optima: Option<usize>,
}

impl MeasurementRow {
    /// `L`, or `lower..upper` for an unproven solve.
    pub fn l_cell(&self) -> String {
        if self.proven {
            self.l.to_string()
        } else {
            format!("{}..{}", self.l_lower, self.l)
        }
    }

    /// `F`, or the range implied by the bounds for an unproven solve.
    pub fn f_cell(&self) -> String {
        match (self.proven, self.f) {
            (_, None) => String::new(),
            (true, Some(f)) => fmt3(f),
            (false, Some(f)) => {
                let hi = 1.0 - 2.0 * self.l_lower as f64 / self.m as f64;
                format!("{}..{}", fmt3(f), fmt3(hi))
            }
        }
    }
}

/// Everything computed for one network, snapshot, layer or flattened union.
#[derive(Debug, Clone)]
pub struct AnalyzedNetwork {
    pub row: MeasurementRow,
    pub graph: SignedDigraph,
    pub micro: MicroReport,
    pub solve: SolveResult,
    pub meso: MesoReport,
}

/// A graph ready for evaluation, with its row label and solver options.
#[derive(Debug, Clone)]
pub struct Unit {
    pub label: String,
    pub graph: SignedDigraph,
    pub options: SolveOptions,
}

fn ingest_err(label: &str) -> impl Fn(IngestError) -> ReportError + '_ {
    move |source| ReportError::Ingest {
        label: label.to_string(),
        source,
    }
}

fn graph_err(label: &str) -> impl Fn(GraphError) -> ReportError + '_ {
    move |source| ReportError::Graph {
        label: label.to_string(),
        source,
    }
}

fn open(cfg: &DatasetConfig, path: &std::path::Path) -> Result<BufReader<File>, ReportError> {
    let full = cfg.resolve(path);
    File::open(&full)
        .map(BufReader::new)
        .map_err(|source| ReportError::Io { path: full, source })
}

fn read_records(cfg: &DatasetConfig, net: &NetworkConfig, path: &std::path::Path) -> Result<Vec<RawRecord>, ReportError> {
    parse_edge_csv(open(cfg, path)?, &net.schema).map_err(ingest_err(&net.label))
}

fn signed_graph(
    net: &NetworkConfig,
    label: &str,
    records: &[RawRecord],
) -> Result<SignedDigraph, ReportError> {
    let triples = apply_sign_rule(records, &net.rule()?).map_err(ingest_err(label))?;
    let g = build_signed(&triples).map_err(graph_err(label))?;
    finish(net, label, g)
}

fn finish(net: &NetworkConfig, label: &str, g: SignedDigraph) -> Result<SignedDigraph, ReportError> {
    if net.symmetrize {
        symmetrize(&g).map_err(graph_err(label))
    } else {
        Ok(g)
    }
}

fn read_graph(
    cfg: &DatasetConfig,
    net: &NetworkConfig,
    label: &str,
    path: &std::path::Path,
) -> Result<SignedDigraph, ReportError> {
    match net.format {
        InputFormat::Csv => {
            let records = read_records(cfg, net, path)?;
            signed_graph(net, label, &records)
        }
        InputFormat::Gml => {
            let g = parse_gml(open(cfg, path)?).map_err(ingest_err(label))?;
            finish(net, label, g)
        }
    }
}

/// Labelled graphs of a temporal or multilayer network, restricted to and
/// ordered by `net.labels` when given.
fn parts(cfg: &DatasetConfig, net: &NetworkConfig) -> Result<Vec<(String, SignedDigraph)>, ReportError> {
    let mut out = Vec::new();
    if let Some(path) = &net.path {
        let records = read_records(cfg, net, path)?;
        let key: fn(&RawRecord) -> Option<&str> = match net.kind {
            NetworkKind::Multilayer => |r| r.layer.as_deref(),
            _ => |r| r.time.as_deref(),
        };
        for (part, recs) in group_records(&records, key) {
            let label = format!("{} {}", net.label, part);
            let g = signed_graph(net, &label, &recs)?;
            out.push((part, g));
        }
    } else {
        for part in &net.parts {
            let label = format!("{} {}", net.label, part.label);
            out.push((part.label.clone(), read_graph(cfg, net, &label, &part.path)?));
        }
    }
    if let Some(wanted) = &net.labels {
        let mut picked = Vec::with_capacity(wanted.len());
        for w in wanted {
            let pos = out.iter().position(|(l, _)| l == w).ok_or_else(|| {
                ReportError::Config(format!("network {:?}: no part labelled {w:?}", net.label))
            })?;
            picked.push(out.swap_remove(pos));
        }
        out = picked;
    }
    Ok(out)
}

/// Reads and preprocesses every configured network into evaluation units,
/// in configuration order.
pub fn load_units(cfg: &DatasetConfig) -> Result<Vec<Unit>, ReportError> {
    cfg.validate()?;
    let mut units = Vec::new();
    for net in &cfg.networks {
        let options = cfg.options_for(net);
        let unit = |label: String, graph: SignedDigraph| Unit {
            label,
            graph,
            options: options.clone(),
        };
        match net.kind {
            NetworkKind::Static => {
                let path = net.path.as_ref().expect("validated");
                units.push(unit(net.label.clone(), read_graph(cfg, net, &net.label, path)?));
            }
            NetworkKind::Temporal => {
                for (part, g) in parts(cfg, net)? {
                    units.push(unit(format!("{} {}", net.label, part), g));
                }
            }
            NetworkKind::Multilayer => {
                let layers = parts(cfg, net)?;
                let ml = MultilayerNetwork::new(layers.clone()).map_err(graph_err(&net.label))?;
                for (part, g) in layers {
                    units.push(unit(format!("{} {}", net.label, part), g));
                }
                if net.flatten {
                    let label = format!("{} flat", net.label);
                    let flat = flatten(&ml, net.conflict_policy).map_err(graph_err(&label))?;
                    units.push(unit(label, flat));
                }
            }
        }
    }
    Ok(units)
}

/// Micro, macro and meso measures of one graph.
pub fn evaluate(unit: &Unit) -> Result<AnalyzedNetwork, ReportError> {
    let g = &unit.graph;
    let label = unit.label.clone();
    let summary = g.summary();
    if summary.m == 0 {
        return Err(ReportError::EmptyNetwork { label });
    }
    let micro = micro_stats(g);
    let solve = solve_exact(g, &unit.options);
    let optima = match &solve.all_optima {
        Some(o) if !o.partitions.is_empty() => o.partitions.clone(),
        _ => vec![solve.partition.clone()],
    };
    let meso = meso_report(g, &optima).map_err(|source| ReportError::Meso {
        label: label.clone(),
        source,
    })?;
    let optima_count = solve
        .all_optima
        .as_ref()
        .filter(|o| !o.truncated && !o.interrupted)
        .map(|o| o.partitions.len());
    let row = MeasurementRow {
        network_label: label,
        n: summary.n,
        m: summary.m,
        m_plus: summary.m_plus,
        m_minus: summary.m_minus,
        balanced_triads: micro.balanced_count,
        unbalanced_triads: micro.unbalanced_count,
        t: micro.t,
        clustering_coefficient: clustering_coefficient(g).ok(),
        density: summary.density,
        l: solve.l,
        l_lower: if solve.proven { solve.l } else { solve.bounds.lower },
        f: normalized_f(solve.l, summary.m).ok(),
        c: meso.canonical_c,
        d: meso.canonical_d,
        balanced_census_by_type: micro.balanced_fraction_by_type(),
        proven: solve.proven,
        optima: optima_count,
    };
    Ok(AnalyzedNetwork {
        row,
        graph: g.clone(),
        micro,
        solve,
        meso,
    })
}

/// Worker count from `BALANCE_THREADS`, if set to a positive integer.
pub fn thread_limit() -> Option<usize> {
    std::env::var("BALANCE_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

/// Evaluates units in parallel; results keep the input order.
pub fn evaluate_all(units: &[Unit]) -> Result<Vec<AnalyzedNetwork>, ReportError> {
    let run = || units.par_iter().map(evaluate).collect::<Result<Vec<_>, _>>();
    match thread_limit() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| ReportError::Config(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

pub fn analyze(cfg: &DatasetConfig) -> Result<Vec<AnalyzedNetwork>, ReportError> {
    let units = load_units(cfg)?;
    evaluate_all(&units)
}
