//! `network-measurements.csv`, `optimal-partitions.csv` and their JSON
//! mirrors.
//!
//! Partition columns hold one `name : value` cell per variable: `x<i>` for
//! every node, then `f_<i>_<j>`, `s_<i>_<j>` and `t_<i>_<j>` for every edge,
//! where `i`, `j` are node ids.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{fmt3, AnalyzedNetwork, MeasurementRow, ReportError};
use crate::frustration::classify_edges;
use crate::graph::{GraphError, NodeId, Partition, SignedDigraph};
use crate::meso::MesoReport;
use crate::micro::CensusType;

pub const CLUSTERING_VARIANT: &str =
    "global transitivity of the sign-blind undirected projection (3 x triangles / connected triples)";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionColumn {
    pub network: String,
    pub cells: Vec<String>,
}

pub fn partition_cells(g: &SignedDigraph, p: &Partition) -> Result<Vec<String>, GraphError> {
    let classes = classify_edges(g, p)?;
    let mut cells: Vec<String> = (0..g.node_count())
        .map(|i| format!("x{} : {}", g.node(i), u8::from(p.side(i))))
        .collect();
    let pair = |c: &crate::frustration::EdgeClass| format!("{}_{}", g.node(c.source), g.node(c.target));
    cells.extend(
        classes
            .iter()
            .map(|c| format!("f_{} : {}", pair(c), u8::from(c.frustrated))),
    );
    cells.extend(
        classes
            .iter()
            .map(|c| format!("s_{} : {}", pair(c), c.sign.value())),
    );
    cells.extend(classes.iter().map(|c| format!("t_{} : {}", pair(c), c.t)));
    Ok(cells)
}

pub fn write_partitions_csv<W: Write>(columns: &[PartitionColumn], sink: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(columns.iter().map(|c| c.network.as_str()))?;
    let depth = columns.iter().map(|c| c.cells.len()).max().unwrap_or(0);
    for i in 0..depth {
        w.write_record(
            columns
                .iter()
                .map(|c| c.cells.get(i).map_or("", String::as_str)),
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_partitions_csv<R: Read>(source: R) -> csv::Result<Vec<PartitionColumn>> {
    let mut r = csv::ReaderBuilder::new().flexible(true).from_reader(source);
    let mut columns: Vec<PartitionColumn> = r
        .headers()?
        .iter()
        .map(|h| PartitionColumn {
            network: h.to_string(),
            cells: Vec::new(),
        })
        .collect();
    for row in r.records() {
        let row = row?;
        for (col, cell) in columns.iter_mut().zip(row.iter()) {
            if !cell.is_empty() {
                col.cells.push(cell.to_string());
            }
        }
    }
    Ok(columns)
}

/// Node sides from the `x` cells of a partition column.
pub fn assignment_from_cells(cells: &[String]) -> Result<HashMap<NodeId, u8>, String> {
    let mut out = HashMap::new();
    for cell in cells {
        let (name, value) = cell
            .rsplit_once(" : ")
            .ok_or_else(|| format!("cell {cell:?} is not `name : value`"))?;
        let Some(id) = name.strip_prefix('x') else {
            continue;
        };
        let side: u8 = match value.trim() {
            "0" => 0,
            "1" => 1,
            v => return Err(format!("x{id} has value {v:?}, expected 0 or 1")),
        };
        out.insert(NodeId::new(id), side);
    }
    Ok(out)
}

const TRANSITIVE_TYPES: [CensusType; 4] = [
    CensusType::T300,
    CensusType::T120D,
    CensusType::T120U,
    CensusType::T030T,
];

fn opt3(x: Option<f64>) -> String {
    x.map(fmt3).unwrap_or_default()
}

/// Densities below 0.01 are written in scientific notation, as in the
/// published tables.
fn density_cell(x: Option<f64>) -> String {
    match x {
        Some(d) if d > 0.0 && d < 0.01 => format!("{d:.2E}"),
        other => opt3(other),
    }
}

pub fn write_measurements_csv<W: Write>(rows: &[MeasurementRow], sink: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    let mut header: Vec<String> = [
        "network",
        "n",
        "m",
        "m_plus",
        "m_minus",
        "density",
        "clustering_coefficient",
        "balanced_triads",
        "unbalanced_triads",
        "T",
        "L",
        "F",
        "C",
        "D",
        "proven",
        "optima",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(TRANSITIVE_TYPES.iter().map(|t| format!("balanced_{}", t.label())));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.network_label.clone(),
            r.n.to_string(),
            r.m.to_string(),
            r.m_plus.to_string(),
            r.m_minus.to_string(),
            density_cell(r.density),
            opt3(r.clustering_coefficient),
            r.balanced_triads.to_string(),
            r.unbalanced_triads.to_string(),
            opt3(r.t),
            r.l_cell(),
            r.f_cell(),
            opt3(r.c),
            opt3(r.d),
            r.proven.to_string(),
            r.optima.map(|o| o.to_string()).unwrap_or_default(),
        ];
        rec.extend(
            TRANSITIVE_TYPES
                .iter()
                .map(|t| opt3(r.balanced_census_by_type.get(t).copied())),
        );
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct MeasurementJson<'a> {
    #[serde(flatten)]
    row: &'a MeasurementRow,
    l_bounds: [u64; 2],
    meso: &'a MesoReport,
}

#[derive(Serialize)]
struct Metadata<'a> {
    clustering_coefficient: &'a str,
    optimum_spread: &'a str,
    canonical_partition: &'a str,
    rounding: &'a str,
    unproven_rows: &'a str,
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, ReportError> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|source| ReportError::Io {
            path: path.to_path_buf(),
            source,
        })
}

/// Writes the measurement and partition tables (plus JSON mirrors when
/// `json` is set) and a metadata note into `dir`. Returns the written paths.
pub fn write_outputs(
    dir: &Path,
    analyzed: &[AnalyzedNetwork],
    json: bool,
) -> Result<Vec<PathBuf>, ReportError> {
    std::fs::create_dir_all(dir).map_err(|source| ReportError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let rows: Vec<MeasurementRow> = analyzed.iter().map(|a| a.row.clone()).collect();
    let columns = analyzed
        .iter()
        .map(|a| {
            Ok(PartitionColumn {
                network: a.row.network_label.clone(),
                cells: partition_cells(&a.graph, &a.solve.partition).map_err(|source| {
                    ReportError::Graph {
                        label: a.row.network_label.clone(),
                        source,
                    }
                })?,
            })
        })
        .collect::<Result<Vec<_>, ReportError>>()?;

    let mut written = Vec::new();
    let path = dir.join("network-measurements.csv");
    write_measurements_csv(&rows, create(&path)?)?;
    written.push(path);
    let path = dir.join("optimal-partitions.csv");
    write_partitions_csv(&columns, create(&path)?)?;
    written.push(path);

    let path = dir.join("metadata.json");
    let meta = Metadata {
        clustering_coefficient: CLUSTERING_VARIANT,
        optimum_spread: "sample standard deviation over all optimal partitions",
        canonical_partition: "smallest node on side 0, lexicographically smallest optimal side vector",
        rounding: "half away from zero, 3 decimals",
        unproven_rows: "L and F are written as lower..upper ranges",
    };
    serde_json::to_writer_pretty(create(&path)?, &meta)?;
    written.push(path);

    if json {
        let path = dir.join("network-measurements.json");
        let mirror: Vec<MeasurementJson> = analyzed
            .iter()
            .map(|a| MeasurementJson {
                row: &a.row,
                l_bounds: [a.row.l_lower, a.row.l],
                meso: &a.meso,
            })
            .collect();
        serde_json::to_writer_pretty(create(&path)?, &mirror)?;
        written.push(path);
        let path = dir.join("optimal-partitions.json");
        serde_json::to_writer_pretty(create(&path)?, &columns)?;
        written.push(path);
    }
    Ok(written)
}
