//! Descriptive statistics used in the measurement tables.

use thiserror::Error;

use crate::graph::SignedDigraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("need at least 3 nodes, got {0}")]
    TooSmall(usize),
    #[error("series lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("a series has zero variance")]
    ZeroVariance,
}

/// Global transitivity of the sign-blind undirected projection:
/// `3 * triangles / connected triples`, 0 when there are no triples.
pub fn clustering_coefficient(g: &SignedDigraph) -> Result<f64, StatsError> {
    let n = g.node_count();
    if n < 3 {
        return Err(StatsError::TooSmall(n));
    }
    let nbrs = g.undirected_neighbors();
    let mut triples = 0u64;
    let mut closed = 0u64;
    let mut mark = vec![false; n];
    for u in 0..n {
        let d = nbrs[u].len() as u64;
        triples += d * d.saturating_sub(1) / 2;
        for &v in &nbrs[u] {
            mark[v] = true;
        }
        // Each triangle u < v < w is counted once, from u.
        for &v in nbrs[u].iter().filter(|&&v| v > u) {
            closed += nbrs[v].iter().filter(|&&w| w > v && mark[w]).count() as u64;
        }
        for &v in &nbrs[u] {
            mark[v] = false;
        }
    }
    if triples == 0 {
        return Ok(0.0);
    }
    Ok(3.0 * closed as f64 / triples as f64)
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 3 {
        return Err(StatsError::TooFewPoints(xs.len()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Rounds half away from zero to 3 decimals. A tiny offset absorbs binary
/// representation error on exact decimal ties.
pub fn round3(x: f64) -> f64 {
    let scaled = x.abs() * 1000.0;
    let r = (scaled + 0.5 + 1e-9).floor() / 1000.0;
    r.copysign(x)
}

pub fn fmt3(x: f64) -> String {
    format!("{:.3}", round3(x))
}
