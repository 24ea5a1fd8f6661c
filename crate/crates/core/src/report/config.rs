//! TOML dataset configuration for `analyze`.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::ReportError;
use crate::frustration::SolveOptions;
use crate::graph::ConflictPolicy;
use crate::ingest::{CsvSchema, SignRule};

/// Solver overrides; unset fields fall through to the next level
/// (defaults < config-wide < per-network < command line).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub time_budget_secs: Option<f64>,
    pub node_budget: Option<u64>,
    pub restarts: Option<usize>,
    pub seed: Option<u64>,
    pub enumerate_optima: Option<bool>,
    pub enumeration_cap: Option<usize>,
    pub large_graph_edges: Option<usize>,
    pub force_exact: Option<bool>,
}

impl SolverConfig {
    pub fn apply(&self, opts: &mut SolveOptions) {
        if let Some(s) = self.time_budget_secs {
            opts.time_budget = Duration::from_secs_f64(s.max(0.0));
        }
        if let Some(v) = self.node_budget {
            opts.node_budget = v;
        }
        if let Some(v) = self.restarts {
            opts.restarts = v;
        }
        if let Some(v) = self.seed {
            opts.seed = v;
        }
        if let Some(v) = self.enumerate_optima {
            opts.enumerate_all = v;
        }
        if let Some(v) = self.enumeration_cap {
            opts.enumeration_cap = v;
        }
        if let Some(v) = self.large_graph_edges {
            opts.large_graph_edges = v;
        }
        if let Some(v) = self.force_exact {
            opts.force_exact = v;
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    #[default]
    Csv,
    Gml,
}

impl std::str::FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "gml" => Ok(InputFormat::Gml),
            other => Err(format!("unknown format {other:?} (expected csv or gml)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    #[default]
    Static,
    Temporal,
    Multilayer,
}

/// One file of a temporal or multilayer network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputPart {
    pub label: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub label: String,
    #[serde(default)]
    pub kind: NetworkKind,
    /// Single input file. Temporal and multilayer networks read from one
    /// file take their labels from the schema's `time` / `layer` column.
    #[serde(default)]
    pub path: Option<PathBuf>,
    /// One file per snapshot or layer, instead of `path`.
    #[serde(default)]
    pub parts: Vec<InputPart>,
    #[serde(default)]
    pub format: InputFormat,
    #[serde(default)]
    pub schema: CsvSchema,
    /// `sign`, `threshold:<min_abs>` or `rank:<top>:<bottom>:<rank_max>`.
    #[serde(default = "default_sign_rule")]
    pub sign_rule: String,
    #[serde(default)]
    pub symmetrize: bool,
    /// Snapshots or layers to keep, in output order. Defaults to all, in
    /// first-seen order.
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    /// Also analyze the union of all layers.
    #[serde(default)]
    pub flatten: bool,
    #[serde(default)]
    pub conflict_policy: ConflictPolicy,
    #[serde(default)]
    pub solver: SolverConfig,
}

fn default_sign_rule() -> String {
    "sign".into()
}

impl NetworkConfig {
    pub fn rule(&self) -> Result<SignRule, ReportError> {
        self.sign_rule
            .parse()
            .map_err(|e| self.config_error(format!("{e}")))
    }

    fn config_error(&self, msg: impl std::fmt::Display) -> ReportError {
        ReportError::Config(format!("network {:?}: {msg}", self.label))
    }

    fn validate(&self) -> Result<(), ReportError> {
        if self.label.trim().is_empty() {
            return Err(ReportError::Config("network with empty label".into()));
        }
        self.rule()?;
        match (self.kind, self.path.is_some(), self.parts.is_empty()) {
            (_, true, false) => return Err(self.config_error("set either path or parts, not both")),
            (_, false, true) => return Err(self.config_error("no input path")),
            (NetworkKind::Static, false, false) => {
                return Err(self.config_error("static networks take a single path"))
            }
            _ => {}
        }
        if self.path.is_some() {
            let column = match self.kind {
                NetworkKind::Static => None,
                NetworkKind::Temporal => Some(("time", &self.schema.time)),
                NetworkKind::Multilayer => Some(("layer", &self.schema.layer)),
            };
            if let Some((name, col)) = column {
                if self.format != InputFormat::Csv || col.is_none() {
                    return Err(self.config_error(format!(
                        "a single-file {:?} network needs CSV input with schema.{name} set",
                        self.kind
                    )));
                }
            }
        }
        let mut seen = HashSet::new();
        for p in &self.parts {
            if !seen.insert(p.label.as_str()) {
                return Err(self.config_error(format!("duplicate part label {:?}", p.label)));
            }
        }
        if self.flatten && self.kind != NetworkKind::Multilayer {
            return Err(self.config_error("flatten applies to multilayer networks only"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default, rename = "network")]
    pub networks: Vec<NetworkConfig>,
    /// Relative input paths resolve against this directory.
    #[serde(skip)]
    pub base_dir: PathBuf,
    /// Highest-priority solver overrides, typically from the command line.
    #[serde(skip)]
    pub overrides: SolverConfig,
}

impl DatasetConfig {
    pub fn from_toml_str(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self, ReportError> {
        let mut cfg: DatasetConfig =
            toml::from_str(text).map_err(|e| ReportError::Config(e.to_string()))?;
        cfg.base_dir = base_dir.into();
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ReportError> {
        let text = std::fs::read_to_string(path).map_err(|e| ReportError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml_str(&text, base)
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        if self.networks.is_empty() {
            return Err(ReportError::Config("configuration lists no networks".into()));
        }
        let mut seen = HashSet::new();
        for net in &self.networks {
            net.validate()?;
            if !seen.insert(net.label.as_str()) {
                return Err(ReportError::Config(format!(
                    "duplicate network label {:?}",
                    net.label
                )));
            }
        }
        Ok(())
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    pub fn network(&self, label: &str) -> Option<&NetworkConfig> {
        self.networks.iter().find(|n| n.label == label)
    }

    pub fn options_for(&self, net: &NetworkConfig) -> SolveOptions {
        let mut opts = SolveOptions::default();
        self.solver.apply(&mut opts);
        net.solver.apply(&mut opts);
        self.overrides.apply(&mut opts);
        opts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
        output_dir = "out"
        [solver]
        time_budget_secs = 10
        seed = 3

        [[network]]
        label = "tribes"
        path = "tribes.csv"
        symmetrize = true

        [[network]]
        label = "sampson"
        kind = "temporal"
        path = "sampson.csv"
        schema = { time = "time" }
        labels = ["T2", "T3", "T4"]
        solver = { seed = 9 }
    "#;

    #[test]
    fn parses_and_layers_solver_options() {
        let mut cfg = DatasetConfig::from_toml_str(SAMPLE, "/data").unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.resolve(Path::new("x.csv")), PathBuf::from("/data/x.csv"));
        let tribes = cfg.options_for(&cfg.networks[0]);
        assert_eq!(tribes.time_budget, Duration::from_secs(10));
        assert_eq!(tribes.seed, 3);
        assert_eq!(cfg.options_for(&cfg.networks[1]).seed, 9);
        cfg.overrides.seed = Some(1);
        assert_eq!(cfg.options_for(&cfg.networks[1]).seed, 1);
    }

    #[test]
    fn rejects_bad_configs() {
        let empty = DatasetConfig::from_toml_str("", ".").unwrap();
        assert!(matches!(empty.validate(), Err(ReportError::Config(_))));
        for text in [
            "[[network]]\nlabel = \"a\"",
            "[[network]]\nlabel = \"a\"\nkind = \"temporal\"\npath = \"x.csv\"",
            "[[network]]\nlabel = \"a\"\npath = \"x.csv\"\nsign_rule = \"rank:9:9:17\"",
            "[[network]]\nlabel = \"a\"\npath = \"x\"\n[[network]]\nlabel = \"a\"\npath = \"y\"",
            "[[network]]\nlabel = \"a\"\npath = \"x\"\nflatten = true",
        ] {
            let cfg = DatasetConfig::from_toml_str(text, ".").unwrap();
            assert!(matches!(cfg.validate(), Err(ReportError::Config(_))), "{text}");
        }
        assert!(DatasetConfig::from_toml_str("bogus = 1", ".").is_err());
    }
}
