//! Acceptance criteria, one PASS/FAIL line each. Dataset criteria read
//! `datasets.toml` from `BALANCE_DATA_DIR`, or from `data/` at the workspace
//! root, and fail when the edge lists are not there.

mod common;

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use balance_core::graph::switch_indices;
use balance_core::meso::internal_external_split;
use balance_core::report::{evaluate, load_units, pearson, round3, AnalyzedNetwork, DatasetConfig};
use balance_core::{
    enumerate_optima, frustration_count, local_search, lower_bound, micro_stats, solve_exact,
    Partition, SolveOptions,
};
use common::{balanced_graph, brute_force, mixed_graph, rng};
use rand::Rng;

type Outcome = Result<(), String>;

struct Run {
    net: AnalyzedNetwork,
    elapsed: Duration,
}

/// Evaluates configured networks on demand, one unit at a time, and keeps
/// the results by row label.
struct Datasets {
    dir: PathBuf,
    config: Result<DatasetConfig, String>,
    runs: HashMap<String, Result<Run, String>>,
    loaded: BTreeSet<String>,
}

impl Datasets {
    fn open() -> Self {
        let dir = std::env::var_os("BALANCE_DATA_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"));
        let dir = dir.canonicalize().unwrap_or(dir);
        let config = DatasetConfig::from_path(&dir.join("datasets.toml"))
            .map_err(|e| format!("dataset not available at {}: {e}", dir.display()));
        Datasets {
            dir,
            config,
            runs: HashMap::new(),
            loaded: BTreeSet::new(),
        }
    }

    fn load(&mut self, network: &str) -> Result<(), String> {
        if self.loaded.contains(network) {
            return Ok(());
        }
        let cfg = self.config.as_ref().map_err(Clone::clone)?;
        let net = cfg
            .network(network)
            .ok_or_else(|| format!("network {network:?} missing from datasets.toml"))?
            .clone();
        let mut one = cfg.clone();
        one.networks = vec![net];
        let units = load_units(&one)
            .map_err(|e| format!("dataset not available at {}: {e}", self.dir.display()))?;
        for unit in &units {
            let start = Instant::now();
            let run = evaluate(unit)
                .map(|net| Run {
                    net,
                    elapsed: start.elapsed(),
                })
                .map_err(|e| e.to_string());
            self.runs.insert(unit.label.clone(), run);
        }
        self.loaded.insert(network.to_string());
        Ok(())
    }

    fn get(&mut self, network: &str, row: &str) -> Result<&Run, String> {
        self.load(network)?;
        match self.runs.get(row) {
            Some(Ok(run)) => Ok(run),
            Some(Err(e)) => Err(format!("{row}: {e}")),
            None => Err(format!("no row labelled {row:?}")),
        }
    }
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn same3(got: Option<f64>, want: f64) -> bool {
    got.is_some_and(|g| (round3(g) - want).abs() < 1e-9)
}

fn show(x: Option<f64>) -> String {
    x.map_or("none".into(), |v| format!("{:.3}", round3(v)))
}

const SMALL_STATIC: [(&str, u64, f64); 4] = [
    ("Tribes", 14, 0.759),
    ("House A", 17, 0.638),
    ("House B", 19, 0.542),
    ("House C", 5, 0.877),
];

fn criterion_1(data: &mut Datasets) -> Outcome {
    for (label, l, f) in SMALL_STATIC {
        let run = data.get(label, label)?;
        let row = &run.net.row;
        check(row.proven, || format!("{label}: not proven"))?;
        check(row.l == l && same3(row.f, f), || {
            format!("{label}: L={} F={}, expected L={l} F={f:.3}", row.l, show(row.f))
        })?;
        check(run.elapsed < Duration::from_secs(10), || {
            format!("{label}: took {:?}", run.elapsed)
        })?;
    }
    Ok(())
}

fn criterion_2(data: &mut Datasets) -> Outcome {
    let expected = [
        ("Tribes", 59, 9, 0.87),
        ("House A", 46, 11, 0.807),
        ("House B", 24, 22, 0.522),
        ("House C", 26, 3, 0.896),
    ];
    for (label, bt, ut, t) in expected {
        let row = &data.get(label, label)?.net.row;
        check(row.balanced_triads == bt && row.unbalanced_triads == ut, || {
            format!(
                "{label}: triads {}/{}, expected {bt}/{ut}",
                row.balanced_triads, row.unbalanced_triads
            )
        })?;
        check(same3(row.t, t), || format!("{label}: T={}, expected {t:.3}", show(row.t)))?;
    }
    let tribes = &data.get("Tribes", "Tribes")?.net.micro;
    let share = tribes
        .balanced_fraction_by_type()
        .into_iter()
        .find(|(k, _)| k.label() == "300")
        .map(|(_, v)| v);
    check(share.is_some_and(|s| (s * 100.0).round() == 87.0), || {
        format!("Tribes '300' balanced share {share:?}, expected 87%")
    })
}

/// X* and (C, D) for the three published optima of House A.
const HOUSE_A_OPTIMA: [(&[&str], f64, f64); 3] = [
    (&["4", "8", "10", "15", "16", "18", "3", "9", "11"], 0.804, 0.842),
    (&["4", "8", "10", "15", "16", "18", "9", "11", "19"], 0.793, 0.861),
    (&["4", "8", "10", "15", "16", "18", "19"], 0.793, 0.861),
];

/// Both sides of an optimum as node sets, with its (C, D).
type Sides = (BTreeSet<String>, BTreeSet<String>, Option<f64>, Option<f64>);

fn optimum_sides(run: &Run) -> Vec<Sides> {
    let g = &run.net.graph;
    run.net
        .meso
        .per_optimum
        .iter()
        .map(|o| {
            let one: BTreeSet<String> = o.partition.side_one_ids(g).iter().map(|id| id.to_string()).collect();
            let zero = g
                .nodes()
                .iter()
                .map(|id| id.to_string())
                .filter(|id| !one.contains(id))
                .collect();
            (one, zero, o.c, o.d)
        })
        .collect()
}

fn house_a_matches_table(run: &Run) -> Outcome {
    let found = optimum_sides(run);
    check(found.len() == 3, || format!("House A: {} optima, expected 3", found.len()))?;
    for (members, c, d) in HOUSE_A_OPTIMA {
        let want: BTreeSet<String> = members.iter().map(|s| s.to_string()).collect();
        let hit = found
            .iter()
            .find(|(one, zero, _, _)| *one == want || *zero == want);
        match hit {
            None => return Err(format!("House A: no optimum with X* = {want:?}")),
            Some((_, _, gc, gd)) => check(same3(*gc, c) && same3(*gd, d), || {
                format!("House A X* = {want:?}: C={} D={}, expected {c:.3} {d:.3}", show(*gc), show(*gd))
            })?,
        }
    }
    Ok(())
}

fn criterion_3(data: &mut Datasets) -> Outcome {
    for (label, c, d) in [("Tribes", 0.806, 1.0), ("House C", 0.909, 0.973)] {
        let row = &data.get(label, label)?.net.row;
        check(same3(row.c, c) && same3(row.d, d), || {
            format!("{label}: C={} D={}, expected {c:.3} {d:.3}", show(row.c), show(row.d))
        })?;
    }
    let run = data.get("House A", "House A")?;
    let pairs: Vec<(Option<f64>, Option<f64>)> =
        run.net.meso.per_optimum.iter().map(|o| (o.c, o.d)).collect();
    check(pairs.iter().any(|&(c, d)| same3(c, 0.793) && same3(d, 0.861)), || {
        format!("House A: (0.793, 0.861) not among {pairs:?}")
    })?;
    house_a_matches_table(run)
}

fn criterion_4(data: &mut Datasets) -> Outcome {
    let unique = [
        ("Tribes", "Tribes"),
        ("House B", "House B"),
        ("House C", "House C"),
        ("Sampson", "Sampson T2"),
        ("Sampson", "Sampson T3"),
        ("Sampson", "Sampson T4"),
    ];
    let run = data.get("House A", "House A")?;
    check(run.net.row.optima == Some(3), || format!("House A: optima {:?}, expected 3", run.net.row.optima))?;
    check(run.elapsed < Duration::from_secs(60), || format!("House A: took {:?}", run.elapsed))?;
    house_a_matches_table(run)?;
    for (network, label) in unique {
        let run = data.get(network, label)?;
        check(run.net.row.optima == Some(1), || {
            format!("{label}: optima {:?}, expected 1", run.net.row.optima)
        })?;
        check(run.elapsed < Duration::from_secs(60), || format!("{label}: took {:?}", run.elapsed))?;
    }
    Ok(())
}

/// Published temporal rows: label, m+, m-, B.T., U.T., L, F, C, D.
type TemporalRow = (&'static str, usize, usize, u64, u64, u64, f64, f64, f64);

const SAMPSON: [TemporalRow; 3] = [
    ("Sampson T2", 55, 49, 41, 19, 21, 0.596, 0.827, 0.769),
    ("Sampson T3", 57, 48, 52, 24, 20, 0.619, 0.825, 0.792),
    ("Sampson T4", 56, 47, 49, 16, 14, 0.728, 0.85, 0.884),
];

const NEWCOMB: [TemporalRow; 15] = [
    ("Fraternity 00", 51, 51, 38, 37, 26, 0.49, 0.745, 0.745),
    ("Fraternity 01", 51, 51, 35, 23, 22, 0.569, 0.746, 0.837),
    ("Fraternity 02", 51, 51, 26, 28, 25, 0.51, 0.741, 0.771),
    ("Fraternity 03", 51, 51, 32, 18, 25, 0.51, 0.741, 0.771),
    ("Fraternity 04", 51, 51, 47, 36, 27, 0.471, 0.731, 0.74),
    ("Fraternity 05", 51, 51, 44, 41, 24, 0.529, 0.745, 0.787),
    ("Fraternity 06", 51, 51, 50, 53, 25, 0.51, 0.76, 0.75),
    ("Fraternity 07", 51, 51, 50, 49, 25, 0.51, 0.724, 0.795),
    ("Fraternity 08", 51, 51, 40, 53, 26, 0.49, 0.727, 0.766),
    ("Fraternity 10", 51, 51, 40, 37, 26, 0.49, 0.736, 0.755),
    ("Fraternity 11", 51, 51, 37, 36, 22, 0.569, 0.796, 0.774),
    ("Fraternity 12", 51, 51, 38, 34, 22, 0.569, 0.784, 0.784),
    ("Fraternity 13", 51, 51, 44, 46, 21, 0.588, 0.788, 0.8),
    ("Fraternity 14", 51, 51, 44, 38, 21, 0.588, 0.8, 0.788),
    ("Fraternity 15", 51, 51, 50, 37, 23, 0.549, 0.769, 0.78),
];

fn temporal_row(data: &mut Datasets, network: &str, want: &TemporalRow) -> Outcome {
    let (label, mp, mm, bt, ut, l, f, c, d) = *want;
    let row = &data.get(network, label)?.net.row;
    let got = (row.m_plus, row.m_minus, row.balanced_triads, row.unbalanced_triads, row.l);
    check(got == (mp, mm, bt, ut, l), || {
        format!("{label}: (m+, m-, BT, UT, L) = {got:?}, expected {:?}", (mp, mm, bt, ut, l))
    })?;
    check(same3(row.f, f) && same3(row.c, c) && same3(row.d, d), || {
        format!(
            "{label}: F={} C={} D={}, expected {f:.3} {c:.3} {d:.3}",
            show(row.f),
            show(row.c),
            show(row.d)
        )
    })
}

fn criterion_5(data: &mut Datasets) -> Outcome {
    for want in &SAMPSON {
        temporal_row(data, "Sampson", want)?;
    }
    let mut fs = Vec::new();
    for want in &NEWCOMB {
        temporal_row(data, "Fraternity", want)?;
        fs.push(data.get("Fraternity", want.0)?.net.row.f.unwrap_or(f64::NAN));
    }
    let mean = fs.iter().sum::<f64>() / fs.len() as f64;
    check((mean - 0.53).abs() <= 0.005, || format!("Newcomb mean F = {mean:.4}, expected about 0.53"))
}

fn criterion_6(data: &mut Datasets) -> Outcome {
    for (label, l, f) in [
        ("Philosophers master-pupil", 4, 0.994),
        ("Philosophers acquaintance", 6, 0.982),
    ] {
        let row = &data.get("Philosophers", label)?.net.row;
        check(row.proven && row.l == l && same3(row.f, f), || {
            format!("{label}: L={} F={} proven={}, expected L={l} F={f:.3}", row.l, show(row.f), row.proven)
        })?;
    }
    let run = data.get("Philosophers", "Philosophers flat")?;
    let row = &run.net.row;
    check(run.elapsed <= Duration::from_secs(600), || format!("flat: took {:?}", run.elapsed))?;
    check(row.proven && row.l == 60, || format!("flat: L={} proven={}, expected 60", row.l, row.proven))?;
    check(
        same3(row.f, 0.94) && same3(row.t, 0.804) && same3(row.c, 0.976) && same3(row.d, 0.931),
        || {
            format!(
                "flat: F={} T={} C={} D={}, expected 0.940 0.804 0.976 0.931",
                show(row.f),
                show(row.t),
                show(row.c),
                show(row.d)
            )
        },
    )
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let opts = SolveOptions::default();
    let densities = [0.15, 0.4, 0.7, 1.0];
    for case in 0..240 {
        let n = r.gen_range(2..=12);
        let g = mixed_graph(&mut r, n, densities[case % densities.len()]);
        let (best, optima) = brute_force(&g);
        let res = solve_exact(&g, &opts);
        check(res.proven && res.l == best, || format!("case {case}: L={} expected {best}", res.l))?;
        let mut found = enumerate_optima(&g, 1 << 12, &opts).partitions;
        found.sort();
        check(found == optima, || format!("case {case}: optimal set differs"))?;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let opts = SolveOptions {
        restarts: 5,
        ..SolveOptions::default()
    };
    for case in 0..200 {
        let n = r.gen_range(2..=11);
        let density = r.gen_range(0.1..1.0);
        let g = mixed_graph(&mut r, n, density);
        let mask: Vec<bool> = (0..n).map(|_| r.gen_bool(0.5)).collect();
        let res = solve_exact(&g, &opts);
        let (best, _) = brute_force(&g);

        let switched = switch_indices(&g, &mask);
        let after = solve_exact(&switched, &opts);
        check(after.l == res.l && res.l == best, || format!("case {case}: switching changed L"))?;
        check(micro_stats(&switched).t == micro_stats(&g).t, || format!("case {case}: switching changed T"))?;

        let p = Partition::new(mask);
        check(
            frustration_count(&g, &p).unwrap() == frustration_count(&g, &p.complement()).unwrap(),
            || format!("case {case}: complement changed the count"),
        )?;

        let (_, upper) = local_search(&g, &opts);
        check(
            lower_bound(&g) <= res.l && res.l <= upper && 2 * upper <= g.edge_count() as u64,
            || format!("case {case}: bound sandwich broken"),
        )?;

        let (internal, external) = internal_external_split(&g, &p).unwrap();
        check(internal.len() + external.len() == g.edge_count(), || {
            format!("case {case}: internal + external != m")
        })?;

        let balanced = balanced_graph(&mut r, n, density);
        check(solve_exact(&balanced, &opts).l == 0, || format!("case {case}: balanced graph has L > 0"))?;
        let is_balanced = brute_force(&g).0 == 0;
        check((res.l == 0) == is_balanced, || format!("case {case}: L = 0 disagrees with balance"))?;
    }
    Ok(())
}

fn series(data: &mut Datasets, rows: &[(&str, &str)], pick: fn(&AnalyzedNetwork) -> Option<f64>) -> Result<Vec<f64>, String> {
    rows.iter()
        .map(|&(network, label)| {
            let run = data.get(network, label)?;
            pick(&run.net).ok_or_else(|| format!("{label}: value undefined"))
        })
        .collect()
}

fn criterion_9(data: &mut Datasets, prerequisites: bool) -> Outcome {
    let statics: Vec<(&str, &str)> = [
        "Tribes",
        "Reddit",
        "Wikipedia",
        "Bitcoin Alpha",
        "Bitcoin OTC",
        "House A",
        "House B",
        "House C",
    ]
    .iter()
    .map(|&l| (l, l))
    .collect();
    let t = series(data, &statics, |a| a.row.t)?;
    let f = series(data, &statics, |a| a.row.f)?;
    check(prerequisites, || "criteria 1 and 2 not satisfied".into())?;
    let r = pearson(&t, &f).map_err(|e| e.to_string())?;
    check((r - 0.697).abs() <= 0.005, || format!("r(T, F) = {r:.4}, expected 0.697"))?;

    let weeks: Vec<(&str, &str)> = NEWCOMB.iter().map(|w| ("Fraternity", w.0)).collect();
    let f = series(data, &weeks, |a| a.row.f)?;
    for (name, pick, want) in [
        ("C", (|a: &AnalyzedNetwork| a.row.c) as fn(&AnalyzedNetwork) -> Option<f64>, 0.849),
        ("D", |a: &AnalyzedNetwork| a.row.d, 0.717),
    ] {
        let ys = series(data, &weeks, pick)?;
        let r = pearson(&f, &ys).map_err(|e| e.to_string())?;
        check((r - want).abs() <= 0.005, || format!("Newcomb r(F, {name}) = {r:.4}, expected {want:.3}"))?;
    }
    Ok(())
}

fn criterion_10(data: &mut Datasets) -> Outcome {
    let run = data.get("Bitcoin Alpha", "Bitcoin Alpha")?;
    let budget = SolveOptions::default().time_budget;
    check(run.net.graph.edge_count() == 24_186, || {
        format!("Bitcoin Alpha: m = {}, expected 24186", run.net.graph.edge_count())
    })?;
    check(run.net.micro.transitive_triad_count > 0, || "census found no transitive triads".into())?;
    let b = &run.net.solve.bounds;
    check(b.lower <= 1098 && 1098 <= b.upper, || {
        format!("bounds [{}, {}] do not bracket 1098", b.lower, b.upper)
    })?;
    check(run.elapsed < budget, || format!("took {:?}, budget {budget:?}", run.elapsed))
}

fn main() -> ExitCode {
    let mut data = Datasets::open();
    let mut failed = 0;
    let mut report = |n: u32, name: &str, outcome: Outcome| match outcome {
        Ok(()) => {
            println!("PASS criterion {n}: {name}");
            true
        }
        Err(why) => {
            println!("FAIL criterion {n}: {name}: {why}");
            failed += 1;
            false
        }
    };
    let c1 = report(1, "exact macro reproduction, small static networks", criterion_1(&mut data));
    let c2 = report(2, "micro reproduction", criterion_2(&mut data));
    report(3, "meso reproduction", criterion_3(&mut data));
    report(4, "optima multiplicity", criterion_4(&mut data));
    report(5, "temporal reproduction", criterion_5(&mut data));
    report(6, "multilayer reproduction", criterion_6(&mut data));
    report(7, "oracle equivalence", criterion_7());
    report(8, "property suite", criterion_8());
    report(9, "correlation check", criterion_9(&mut data, c1 && c2));
    report(10, "large-network bounds", criterion_10(&mut data));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of 10 criteria failed");
        ExitCode::FAILURE
    }
}
