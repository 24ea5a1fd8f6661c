//! Edge-list ingestion and the preprocessing recipes that turn raw
//! weighted records into signed edges.

mod gml;

use std::collections::{BTreeMap, HashMap};
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphBuilder, GraphError, NodeId, Sign, SignedDigraph};

pub use gml::parse_gml;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error("line {line}: cannot parse weight {value:?}")]
    UnparsableWeight { line: u64, value: String },
    #[error("no data rows")]
    EmptyFile,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed GML: {0}")]
    MalformedGml(String),
    #[error("invalid sign {0}")]
    InvalidSign(String),
    #[error("ranking of {rater} is not a strict ranking 1..={max}")]
    IncompleteRanking { rater: String, max: u32 },
    #[error("zero weight on {tail} -> {head}")]
    ZeroWeight { tail: String, head: String },
    #[error("invalid sign rule: {0}")]
    InvalidRule(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One data row of an edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRecord {
    pub source: NodeId,
    pub target: NodeId,
    pub weight: f64,
    pub layer: Option<String>,
    pub time: Option<String>,
}

/// Column names (matched against the header row) and delimiter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CsvSchema {
    pub source: String,
    pub target: String,
    pub weight: String,
    pub layer: Option<String>,
    pub time: Option<String>,
    pub delimiter: char,
    /// Names for the columns of a file without a header row.
    pub columns: Option<Vec<String>>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            source: "source".into(),
            target: "target".into(),
            weight: "weight".into(),
            layer: None,
            time: None,
            delimiter: ',',
            columns: None,
        }
    }
}

pub fn parse_edge_csv<R: Read>(reader: R, schema: &CsvSchema) -> Result<Vec<RawRecord>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter as u8)
        .trim(csv::Trim::All)
        .has_headers(schema.columns.is_none())
        .from_reader(reader);
    let headers = match &schema.columns {
        Some(names) => csv::StringRecord::from(names.clone()),
        None => rdr.headers()?.clone(),
    };
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(IngestError::EmptyFile);
    }
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IngestError::MissingColumn(name.to_string()))
    };
    let src = col(&schema.source)?;
    let dst = col(&schema.target)?;
    let wt = col(&schema.weight)?;
    let layer = schema.layer.as_deref().map(col).transpose()?;
    let time = schema.time.as_deref().map(col).transpose()?;

    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |i: usize| row.get(i).unwrap_or("").to_string();
        let raw_weight = field(wt);
        let weight: f64 = raw_weight
            .parse()
            .ok()
            .filter(|w: &f64| w.is_finite())
            .ok_or(IngestError::UnparsableWeight {
                line,
                value: raw_weight.clone(),
            })?;
        out.push(RawRecord {
            source: NodeId::new(field(src)),
            target: NodeId::new(field(dst)),
            weight,
            layer: layer.map(field),
            time: time.map(field),
        });
    }
    if out.is_empty() {
        return Err(IngestError::EmptyFile);
    }
    Ok(out)
}

/// How raw weights become signs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignRule {
    /// Keep every record, signed by its weight; strengths are discarded.
    SignOnly,
    /// Keep records with `|weight| >= min_abs`.
    Threshold { min_abs: f64 },
    /// Per-source strict rankings `1..rank_max-1`: the best `top_k` ranks are
    /// positive, the worst `bottom_k` negative, the rest dropped.
    RankTopBottom {
        top_k: u32,
        bottom_k: u32,
        rank_max: u32,
    },
}

impl SignRule {
    pub fn threshold(min_abs: f64) -> Result<Self, IngestError> {
        let rule = SignRule::Threshold { min_abs };
        rule.validate()?;
        Ok(rule)
    }

    pub fn rank_top_bottom(top_k: u32, bottom_k: u32, rank_max: u32) -> Result<Self, IngestError> {
        let rule = SignRule::RankTopBottom {
            top_k,
            bottom_k,
            rank_max,
        };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        match *self {
            SignRule::SignOnly => Ok(()),
            SignRule::Threshold { min_abs } if min_abs > 0.0 && min_abs.is_finite() => Ok(()),
            SignRule::Threshold { min_abs } => Err(IngestError::InvalidRule(format!(
                "threshold must be positive, got {min_abs}"
            ))),
            SignRule::RankTopBottom {
                top_k,
                bottom_k,
                rank_max,
            } if top_k + bottom_k < rank_max => Ok(()),
            SignRule::RankTopBottom { .. } => Err(IngestError::InvalidRule(
                "top_k + bottom_k must not exceed rank_max - 1".into(),
            )),
        }
    }
}

impl std::str::FromStr for SignRule {
    type Err = IngestError;

    /// `sign`, `threshold:<min_abs>` or `rank:<top>:<bottom>:<rank_max>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || IngestError::InvalidRule(s.to_string());
        match parts.as_slice() {
            ["sign"] | ["sign_only"] => Ok(SignRule::SignOnly),
            ["threshold", v] => SignRule::threshold(v.parse().map_err(|_| bad())?),
            ["rank", t, b, m] => SignRule::rank_top_bottom(
                t.parse().map_err(|_| bad())?,
                b.parse().map_err(|_| bad())?,
                m.parse().map_err(|_| bad())?,
            ),
            _ => Err(bad()),
        }
    }
}

pub type SignedTriple = (NodeId, NodeId, Sign);

/// Applies `rule`, preserving record order and never adding pairs.
pub fn apply_sign_rule(
    records: &[RawRecord],
    rule: &SignRule,
) -> Result<Vec<SignedTriple>, IngestError> {
    rule.validate()?;
    let zero = |r: &RawRecord| IngestError::ZeroWeight {
        tail: r.source.to_string(),
        head: r.target.to_string(),
    };
    match *rule {
        SignRule::SignOnly => records
            .iter()
            .map(|r| {
                let sign = Sign::of(r.weight).ok_or_else(|| zero(r))?;
                Ok((r.source.clone(), r.target.clone(), sign))
            })
            .collect(),
        SignRule::Threshold { min_abs } => {
            let mut out = Vec::new();
            for r in records {
                let sign = Sign::of(r.weight).ok_or_else(|| zero(r))?;
                if r.weight.abs() >= min_abs {
                    out.push((r.source.clone(), r.target.clone(), sign));
                }
            }
            Ok(out)
        }
        SignRule::RankTopBottom {
            top_k,
            bottom_k,
            rank_max,
        } => {
            let positions = rank_max - 1;
            let mut by_source: HashMap<&NodeId, Vec<f64>> = HashMap::new();
            for r in records {
                by_source.entry(&r.source).or_default().push(r.weight);
            }
            let mut sources: Vec<_> = by_source.into_iter().collect();
            sources.sort_by(|a, b| a.0.cmp(b.0));
            for (source, mut ranks) in sources {
                ranks.sort_by(f64::total_cmp);
                let complete = ranks.len() == positions as usize
                    && ranks
                        .iter()
                        .enumerate()
                        .all(|(i, &r)| r == (i + 1) as f64);
                if !complete {
                    return Err(IngestError::IncompleteRanking {
                        rater: source.to_string(),
                        max: positions,
                    });
                }
            }
            Ok(records
                .iter()
                .filter_map(|r| {
                    let rank = r.weight as u32;
                    let sign = if rank <= top_k {
                        Sign::Positive
                    } else if rank > positions - bottom_k {
                        Sign::Negative
                    } else {
                        return None;
                    };
                    Some((r.source.clone(), r.target.clone(), sign))
                })
                .collect())
        }
    }
}

pub fn build_signed(triples: &[SignedTriple]) -> Result<SignedDigraph, GraphError> {
    SignedDigraph::from_edges(triples.iter().cloned())
}

/// Adds the reverse of every edge with the same sign.
pub fn symmetrize(g: &SignedDigraph) -> Result<SignedDigraph, GraphError> {
    let mut b: GraphBuilder = g.to_builder();
    for e in g.edges() {
        b.edge(g.node(e.target).clone(), g.node(e.source).clone(), e.sign)?;
    }
    Ok(b.build())
}

/// Splits records by their `time` (or `layer`) column, keeping first-seen
/// order of the labels.
pub fn group_records(
    records: &[RawRecord],
    key: impl Fn(&RawRecord) -> Option<&str>,
) -> Vec<(String, Vec<RawRecord>)> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, Vec<RawRecord>> = BTreeMap::new();
    for r in records {
        let k = key(r).unwrap_or("").to_string();
        if !groups.contains_key(&k) {
            order.push(k.clone());
        }
        groups.entry(k).or_default().push(r.clone());
    }
    order
        .into_iter()
        .map(|k| {
            let v = groups.remove(&k).unwrap_or_default();
            (k, v)
        })
        .collect()
}
