use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use balance_core::frustration::{normalized_f, solve_exact};
use balance_core::ingest::{apply_sign_rule, build_signed, parse_edge_csv, parse_gml, symmetrize, CsvSchema, SignRule};
use balance_core::meso::meso_report;
use balance_core::micro::micro_stats;
use balance_core::report::{
    analyze, partition_cells, pearson, round3, write_outputs, write_partitions_csv, DatasetConfig,
    InputFormat, PartitionColumn, ReportError, SolverConfig,
};
use balance_core::SignedDigraph;

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_UNPROVEN: u8 = 3;

#[derive(Parser)]
#[command(name = "balance", version, about = "Structural balance of signed directed networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every network of a TOML dataset configuration and write the tables.
    Analyze {
        config: PathBuf,
        /// Output directory (overrides `output_dir` in the configuration).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write JSON mirrors of both tables.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        solver: SolverArgs,
        /// Exit with status 3 if any solve is not proven optimal.
        #[arg(long)]
        require_proven: bool,
    },
    /// Frustration index, optimal partition and meso measures of one network.
    Solve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the partition in the optimal-partitions CSV layout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        require_proven: bool,
    },
    /// Transitive triad census and T(G) of one network.
    Census {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Pearson correlation between two columns of a measurements CSV.
    Correlate {
        table: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
}

#[derive(Args)]
struct InputArgs {
    path: PathBuf,
    #[arg(long, default_value = "csv")]
    format: InputFormat,
    /// `sign`, `threshold:<min_abs>` or `rank:<top>:<bottom>:<rank_max>`.
    #[arg(long, default_value = "sign")]
    sign_rule: String,
    #[arg(long)]
    symmetrize: bool,
    /// Read tab-separated instead of comma-separated values.
    #[arg(long)]
    tab: bool,
}

#[derive(Args)]
struct SolverArgs {
    /// Wall-clock budget for the exact solve, in seconds.
    #[arg(long)]
    time_budget: Option<f64>,
    /// Branch-and-bound node budget.
    #[arg(long)]
    node_budget: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Enumerate every optimal partition.
    #[arg(long)]
    enumerate_optima: bool,
    /// Run the exact search even on graphs above the large-graph threshold.
    #[arg(long)]
    force_exact: bool,
}

impl SolverArgs {
    fn to_config(&self) -> SolverConfig {
        SolverConfig {
            time_budget_secs: self.time_budget,
            node_budget: self.node_budget,
            restarts: self.restarts,
            seed: self.seed,
            enumerate_optima: self.enumerate_optima.then_some(true),
            force_exact: self.force_exact.then_some(true),
            ..SolverConfig::default()
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl ToString) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: message.to_string(),
        }
    }

    fn other(message: impl ToString) -> Self {
        Failure {
            code: EXIT_FAILURE,
            message: message.to_string(),
        }
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        if e.is_config_error() {
            Failure::config(e)
        } else {
            Failure::other(e)
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}

fn load_graph(input: &InputArgs) -> Result<SignedDigraph, Failure> {
    let g = match input.format {
        InputFormat::Gml => parse_gml(open(&input.path)?).map_err(Failure::config)?,
        InputFormat::Csv => {
            let rule: SignRule = input.sign_rule.parse().map_err(Failure::config)?;
            let schema = CsvSchema {
                delimiter: if input.tab { '\t' } else { ',' },
                ..CsvSchema::default()
            };
            let records = parse_edge_csv(open(&input.path)?, &schema).map_err(Failure::config)?;
            let triples = apply_sign_rule(&records, &rule).map_err(Failure::config)?;
            build_signed(&triples).map_err(Failure::config)?
        }
    };
    if input.symmetrize {
        symmetrize(&g).map_err(Failure::config)
    } else {
        Ok(g)
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Failure::other)?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct SolveSummary {
    n: usize,
    m: usize,
    #[serde(rename = "L")]
    l: u64,
    #[serde(rename = "F")]
    f: Option<f64>,
    proven: bool,
    lower_bound: u64,
    upper_bound: u64,
    explored_nodes: u64,
    side_one: Vec<String>,
    optima: Option<usize>,
    optima_truncated: bool,
    #[serde(rename = "C")]
    c: Option<f64>,
    #[serde(rename = "D")]
    d: Option<f64>,
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze {
            config,
            out,
            json,
            solver,
            require_proven,
        } => {
            let mut cfg = DatasetConfig::from_path(&config)?;
            cfg.overrides = solver.to_config();
            let dir = out
                .or_else(|| cfg.output_dir.as_ref().map(|d| cfg.resolve(d)))
                .unwrap_or_else(|| PathBuf::from("."));
            let analyzed = analyze(&cfg)?;
            for path in write_outputs(&dir, &analyzed, json)? {
                eprintln!("wrote {}", path.display());
            }
            let unproven: Vec<&str> = analyzed
                .iter()
                .filter(|a| !a.row.proven)
                .map(|a| a.row.network_label.as_str())
                .collect();
            if !unproven.is_empty() {
                eprintln!("not proven optimal: {}", unproven.join(", "));
                if require_proven {
                    return Ok(EXIT_UNPROVEN);
                }
            }
            Ok(0)
        }
        Command::Solve {
            input,
            solver,
            out,
            require_proven,
        } => {
            let g = load_graph(&input)?;
            if g.edge_count() == 0 {
                return Err(Failure::config("network has no edges"));
            }
            let mut opts = balance_core::SolveOptions::default();
            solver.to_config().apply(&mut opts);
            let result = solve_exact(&g, &opts);
            let optima = match &result.all_optima {
                Some(o) if !o.partitions.is_empty() => o.partitions.clone(),
                _ => vec![result.partition.clone()],
            };
            let meso = meso_report(&g, &optima).map_err(Failure::other)?;
            let summary = SolveSummary {
                n: g.node_count(),
                m: g.edge_count(),
                l: result.l,
                f: normalized_f(result.l, g.edge_count()).ok().map(round3),
                proven: result.proven,
                lower_bound: result.bounds.lower,
                upper_bound: result.bounds.upper,
                explored_nodes: result.explored_nodes,
                side_one: result
                    .partition
                    .side_one_ids(&g)
                    .into_iter()
                    .map(|id| id.to_string())
                    .collect(),
                optima: result
                    .all_optima
                    .as_ref()
                    .filter(|o| !o.interrupted)
                    .map(|o| o.partitions.len()),
                optima_truncated: result.all_optima.as_ref().is_some_and(|o| o.truncated),
                c: meso.canonical_c.map(round3),
                d: meso.canonical_d.map(round3),
            };
            print_json(&summary)?;
            if let Some(path) = out {
                let column = PartitionColumn {
                    network: input.path.display().to_string(),
                    cells: partition_cells(&g, &result.partition).map_err(Failure::other)?,
                };
                let file = File::create(&path)
                    .map_err(|e| Failure::other(format!("{}: {e}", path.display())))?;
                write_partitions_csv(&[column], file).map_err(Failure::other)?;
            }
            if require_proven && !result.proven {
                return Ok(EXIT_UNPROVEN);
            }
            Ok(0)
        }
        Command::Census { input } => {
            let g = load_graph(&input)?;
            let report = micro_stats(&g);
            #[derive(Serialize)]
            struct Census<'a> {
                #[serde(flatten)]
                report: &'a balance_core::MicroReport,
                balanced_fraction_by_type: std::collections::BTreeMap<balance_core::CensusType, f64>,
            }
            print_json(&Census {
                balanced_fraction_by_type: report.balanced_fraction_by_type(),
                report: &report,
            })?;
            Ok(0)
        }
        Command::Correlate { table, x, y } => {
            let mut rdr = csv::Reader::from_reader(open(&table)?);
            let headers = rdr.headers().map_err(Failure::config)?.clone();
            let col = |name: &str| {
                headers
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Failure::config(format!("no column {name:?}")))
            };
            let (xi, yi) = (col(&x)?, col(&y)?);
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for row in rdr.records() {
                let row = row.map_err(Failure::config)?;
                let parse = |i: usize| -> Result<f64, Failure> {
                    let cell = row.get(i).unwrap_or("");
                    cell.parse()
                        .map_err(|_| Failure::config(format!("cannot use value {cell:?}")))
                };
                xs.push(parse(xi)?);
                ys.push(parse(yi)?);
            }
            let r = pearson(&xs, &ys).map_err(Failure::config)?;
            println!("{r:.6}");
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
