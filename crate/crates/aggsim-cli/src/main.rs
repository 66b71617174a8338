//! Experiment driver: simulate aggression propagation, sweep model/ordering
//! grids, and post-process runs into similarity and prediction reports.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use aggsim::io::{
    sig6, write_features_csv, write_metric_csv, write_prediction_csv, write_run_csv,
    write_similarity_csv, write_validation_csv,
};
use aggsim::{
    binarize, compare_run, find_model, fnv1a64, load_labels, metric_vector, model_catalog,
    node_features, prediction_report, run_simulation, seed_states, select_edges,
    validation_vector, DirectedGraph, Label, MetricVector, ModelSpec, NodeId, NodeStates,
    OrderingKind, RunResult, ValidationVector,
};

const DEFAULT_FRACTION: f64 = 0.1;
const DEFAULT_SNAPSHOTS: usize = 10;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_TA: [f64; 10] = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

// --- error handling ---------------------------------------------------------

/// Exit code 1 for anything wrong with the configuration or input content,
/// 2 for environment failures (missing or unreadable/unwritable files).
enum CliError {
    Validation(String),
    Runtime(String),
}

type CliResult<T> = Result<T, CliError>;

impl From<aggsim::Error> for CliError {
    fn from(e: aggsim::Error) -> Self {
        match e {
            aggsim::Error::Io(inner) => CliError::Runtime(inner.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn validation(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn runtime(msg: impl Into<String>) -> CliError {
    CliError::Runtime(msg.into())
}

fn open_reader(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| runtime(format!("cannot open {}: {e}", path.display())))
}

fn create_writer(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| runtime(format!("cannot create {}: {e}", path.display())))
}

// --- command line -----------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "aggsim",
    about = "Aggression propagation simulator and experiment driver",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one model/ordering combination and write its snapshots and metrics
    Simulate(CommonOpts),
    /// Run the full model x ordering (x repeats) grid concurrently
    Sweep(CommonOpts),
    /// Build the ground-truth validation vector from two labelings
    GroundTruth {
        #[command(flatten)]
        common: CommonOpts,
        /// Later labeling to compare the initial one against
        #[arg(long)]
        labels_t1: PathBuf,
    },
    /// Score every run in a sweep directory against a truth vector
    Compare {
        #[command(flatten)]
        common: CommonOpts,
        /// Directory holding run subdirectories (a sweep's --out)
        #[arg(long)]
        runs: PathBuf,
        /// Ground-truth validation vector CSV
        #[arg(long)]
        truth: PathBuf,
    },
    /// Precision/recall/AUC of a run's final snapshot against true labels
    Evaluate {
        #[command(flatten)]
        common: CommonOpts,
        /// A single run directory (must contain scores.csv)
        #[arg(long)]
        run: PathBuf,
    },
    /// Extract per-node structural features
    Features(CommonOpts),
}

#[derive(Args, Clone, Default)]
struct CommonOpts {
    /// TOML file providing any of the flags below; flags win on conflict
    #[arg(long)]
    config: Option<PathBuf>,
    /// Edge list: one `influenced influencer` pair per line
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Label CSV: `node,label` with label normal|aggressive
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Model names (comma separated), or `all`
    #[arg(long, value_delimiter = ',')]
    model: Vec<String>,
    /// Orderings: random, most-popular, least-popular, neighborhood, network-id
    #[arg(long, value_delimiter = ',')]
    order: Vec<String>,
    /// Fraction of edges to include in the schedule, in (0,1]
    #[arg(long)]
    fraction: Option<f64>,
    /// Snapshots to record after T_0
    #[arg(long)]
    snapshots: Option<usize>,
    /// Aggression thresholds, comma separated, strictly increasing in (0,1)
    #[arg(long, value_delimiter = ',')]
    ta: Vec<f64>,
    /// Master RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Restrict the graph to its largest strongly connected component
    #[arg(long)]
    scc_only: bool,
    /// Repetitions per model/ordering pair in a sweep
    #[arg(long)]
    repeats: Option<usize>,
}

// --- configuration ----------------------------------------------------------

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<String> {
        match self {
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    edges: Option<PathBuf>,
    labels: Option<PathBuf>,
    model: Option<OneOrMany>,
    order: Option<OneOrMany>,
    fraction: Option<f64>,
    snapshots: Option<usize>,
    ta: Option<Vec<f64>>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    scc_only: Option<bool>,
    repeats: Option<usize>,
}

#[derive(Clone)]
struct Config {
    edges: Option<PathBuf>,
    labels: Option<PathBuf>,
    models: Vec<&'static ModelSpec>,
    orderings: Vec<OrderingKind>,
    fraction: f64,
    snapshots: usize,
    ta: Vec<f64>,
    seed: u64,
    out: PathBuf,
    scc_only: bool,
    repeats: usize,
}

impl Config {
    fn resolve(opts: &CommonOpts) -> CliResult<Config> {
        let file = match &opts.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| runtime(format!("cannot read {}: {e}", path.display())))?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| validation(format!("{}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };

        let model_names = if !opts.model.is_empty() {
            opts.model.clone()
        } else {
            file.model.map(OneOrMany::into_vec).unwrap_or_default()
        };
        let models = if model_names.iter().any(|m| m == "all") {
            model_catalog().iter().collect()
        } else {
            model_names
                .iter()
                .map(|name| find_model(name).map_err(CliError::from))
                .collect::<CliResult<Vec<_>>>()?
        };

        let order_names = if !opts.order.is_empty() {
            opts.order.clone()
        } else {
            file.order.map(OneOrMany::into_vec).unwrap_or_default()
        };
        let orderings = order_names
            .iter()
            .map(|name| OrderingKind::parse(name).map_err(CliError::from))
            .collect::<CliResult<Vec<_>>>()?;

        let fraction = opts.fraction.or(file.fraction).unwrap_or(DEFAULT_FRACTION);
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(validation(format!(
                "edge fraction must be in (0, 1], got {fraction}"
            )));
        }
        let snapshots = opts.snapshots.or(file.snapshots).unwrap_or(DEFAULT_SNAPSHOTS);
        if snapshots == 0 {
            return Err(validation("need at least one snapshot"));
        }
        let ta = if !opts.ta.is_empty() {
            opts.ta.clone()
        } else {
            file.ta.unwrap_or_else(|| DEFAULT_TA.to_vec())
        };
        if ta.is_empty() {
            return Err(validation("need at least one aggression threshold"));
        }
        for pair in ta.windows(2) {
            if !(pair[0] < pair[1]) {
                return Err(validation("thresholds must be strictly increasing"));
            }
        }
        if ta.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
            return Err(validation("thresholds must lie in (0, 1)"));
        }
        let repeats = opts.repeats.or(file.repeats).unwrap_or(1);
        if repeats == 0 {
            return Err(validation("repeats must be at least 1"));
        }

        Ok(Config {
            edges: opts.edges.clone().or(file.edges),
            labels: opts.labels.clone().or(file.labels),
            models,
            orderings,
            fraction,
            snapshots,
            ta,
            seed: opts.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out: opts
                .out
                .clone()
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from("out")),
            scc_only: opts.scc_only || file.scc_only.unwrap_or(false),
            repeats,
        })
    }

    fn edges_path(&self) -> CliResult<&Path> {
        self.edges
            .as_deref()
            .ok_or_else(|| validation("--edges is required"))
    }

    fn labels_path(&self) -> CliResult<&Path> {
        self.labels
            .as_deref()
            .ok_or_else(|| validation("--labels is required"))
    }

    /// Stable fingerprint of everything that determines run content.
    fn hash(&self) -> u64 {
        let mut text = String::new();
        text.push_str(&format!(
            "edges={:?};labels={:?};fraction={};snapshots={};seed={};scc={};repeats={};",
            self.edges, self.labels, self.fraction, self.snapshots, self.seed, self.scc_only,
            self.repeats
        ));
        for m in &self.models {
            text.push_str(m.name);
            text.push(',');
        }
        text.push(';');
        for o in &self.orderings {
            text.push_str(o.as_str());
            text.push(',');
        }
        text.push(';');
        for t in &self.ta {
            text.push_str(&format!("{t},"));
        }
        fnv1a64(text.as_bytes())
    }

    fn load_graph(&self) -> CliResult<DirectedGraph> {
        let path = self.edges_path()?;
        let (g, stats) = DirectedGraph::from_edge_list(open_reader(path)?)
            .map_err(|e| match e {
                aggsim::Error::Io(inner) => runtime(format!("{}: {inner}", path.display())),
                other => validation(format!("{}: {other}", path.display())),
            })?;
        if stats.self_loops_dropped + stats.duplicate_edges_dropped > 0 {
            eprintln!(
                "note: dropped {} self-loops and {} duplicate edges",
                stats.self_loops_dropped, stats.duplicate_edges_dropped
            );
        }
        if self.scc_only {
            Ok(g.largest_scc()?)
        } else {
            Ok(g)
        }
    }

    fn load_label_map(&self, path: &Path) -> CliResult<BTreeMap<NodeId, Label>> {
        load_labels(open_reader(path)?).map_err(|e| match e {
            aggsim::Error::Io(inner) => runtime(format!("{}: {inner}", path.display())),
            other => validation(format!("{}: {other}", path.display())),
        })
    }
}

// --- run execution ----------------------------------------------------------

#[derive(Clone, Copy)]
struct RunPlan {
    model: &'static ModelSpec,
    ordering: OrderingKind,
    seed: u64,
    repeat: usize,
}

impl RunPlan {
    fn id(&self) -> String {
        format!("{}_{}_seed{}", self.model.name, self.ordering.as_str(), self.seed)
    }
}

/// seed for one sweep cell: stable hash of the master seed and the cell
fn run_seed(master: u64, model: &str, ordering: &str, repeat: usize) -> u64 {
    let mut bytes = master.to_le_bytes().to_vec();
    bytes.extend_from_slice(model.as_bytes());
    bytes.push(0);
    bytes.extend_from_slice(ordering.as_bytes());
    bytes.push(0);
    bytes.extend_from_slice(&(repeat as u64).to_le_bytes());
    fnv1a64(&bytes)
}

#[derive(Serialize)]
struct RunManifest {
    run_id: String,
    model: String,
    ordering: String,
    seed: u64,
    repeat: usize,
    fraction: f64,
    snapshot_count: usize,
    t_a: Vec<f64>,
    scc_only: bool,
    edges: String,
    labels: String,
    node_count: usize,
    edge_count: usize,
    scheduled_interactions: usize,
    effective_interactions: usize,
    files: Vec<String>,
}

fn metric_rows(
    g: &DirectedGraph,
    run: &RunResult,
    t_a: f64,
) -> CliResult<Vec<MetricVector>> {
    let before = binarize(g, &run.snapshots[0].scores, t_a)?;
    run.snapshots
        .iter()
        .map(|snap| {
            let after = binarize(g, &snap.scores, t_a)?;
            Ok(metric_vector(g, &before, &after)?)
        })
        .collect()
}

fn execute_run(
    cfg: &Config,
    g: &DirectedGraph,
    states: &NodeStates,
    plan: RunPlan,
) -> CliResult<(String, Vec<String>)> {
    let schedule = select_edges(g, cfg.fraction, plan.seed)?;
    let run = run_simulation(g, states, plan.model, &schedule, plan.ordering, cfg.snapshots)?;

    let run_id = plan.id();
    let dir = cfg.out.join(&run_id);
    fs::create_dir_all(&dir)
        .map_err(|e| runtime(format!("cannot create {}: {e}", dir.display())))?;
    let mut files = Vec::new();

    let scores_path = dir.join("scores.csv");
    write_run_csv(create_writer(&scores_path)?, g, &run.snapshots)?;
    files.push("scores.csv".to_string());

    for &t in &cfg.ta {
        let rows = metric_rows(g, &run, t)?;
        let name = format!("metrics_ta_{t}.csv");
        write_metric_csv(create_writer(&dir.join(&name))?, &rows)?;
        files.push(name);
    }

    let manifest = RunManifest {
        run_id: run_id.clone(),
        model: plan.model.name.to_string(),
        ordering: plan.ordering.as_str().to_string(),
        seed: plan.seed,
        repeat: plan.repeat,
        fraction: cfg.fraction,
        snapshot_count: cfg.snapshots,
        t_a: cfg.ta.clone(),
        scc_only: cfg.scc_only,
        edges: cfg.edges_path()?.display().to_string(),
        labels: cfg.labels_path()?.display().to_string(),
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        scheduled_interactions: schedule.edges.len(),
        effective_interactions: run.effective_interactions,
        files: files.clone(),
    };
    let manifest_path = dir.join("manifest.json");
    serde_json::to_writer_pretty(create_writer(&manifest_path)?, &manifest)
        .map_err(|e| runtime(format!("cannot write {}: {e}", manifest_path.display())))?;
    files.push("manifest.json".to_string());

    Ok((run_id, files))
}

// --- commands ---------------------------------------------------------------

fn cmd_simulate(opts: &CommonOpts) -> CliResult<()> {
    let cfg = Config::resolve(opts)?;
    if cfg.models.len() != 1 {
        return Err(validation("simulate needs exactly one --model"));
    }
    if cfg.orderings.len() != 1 {
        return Err(validation("simulate needs exactly one --order"));
    }
    let g = cfg.load_graph()?;
    let labels = cfg.load_label_map(cfg.labels_path()?)?;
    let states = seed_states(&g, &labels);
    let plan = RunPlan {
        model: cfg.models[0],
        ordering: cfg.orderings[0],
        seed: cfg.seed,
        repeat: 0,
    };
    let (run_id, files) = execute_run(&cfg, &g, &states, plan)?;
    println!(
        "run {run_id}: {} nodes, {} files -> {}",
        g.node_count(),
        files.len(),
        cfg.out.join(&run_id).display()
    );
    Ok(())
}

#[derive(Serialize)]
struct SweepEntry {
    run_id: String,
    config_hash: String,
    model: String,
    ordering: String,
    repeat: usize,
    seed: u64,
    files: Vec<String>,
    duration_ms: u128,
    error: Option<String>,
}

#[derive(Serialize)]
struct SweepManifest {
    master_seed: u64,
    config_hash: String,
    runs: Vec<SweepEntry>,
}

fn write_sweep_manifest(cfg: &Config, manifest: &SweepManifest) -> CliResult<()> {
    fs::create_dir_all(&cfg.out)
        .map_err(|e| runtime(format!("cannot create {}: {e}", cfg.out.display())))?;
    let path = cfg.out.join("sweep_manifest.json");
    serde_json::to_writer_pretty(create_writer(&path)?, manifest)
        .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))
}

fn cmd_sweep(opts: &CommonOpts) -> CliResult<()> {
    let mut cfg = Config::resolve(opts)?;
    if cfg.models.is_empty() {
        cfg.models = model_catalog().iter().collect();
    }
    if cfg.orderings.is_empty() {
        cfg.orderings = OrderingKind::ALL.to_vec();
    }
    let config_hash = format!("{:016x}", cfg.hash());

    // resolve inputs before launching anything so a bad config produces an
    // empty manifest rather than a half-finished sweep
    let loaded = (|| -> CliResult<(DirectedGraph, NodeStates)> {
        let g = cfg.load_graph()?;
        let labels = cfg.load_label_map(cfg.labels_path()?)?;
        let states = seed_states(&g, &labels);
        Ok((g, states))
    })();
    let (g, states) = match loaded {
        Ok(pair) => pair,
        Err(e) => {
            write_sweep_manifest(
                &cfg,
                &SweepManifest {
                    master_seed: cfg.seed,
                    config_hash,
                    runs: Vec::new(),
                },
            )?;
            return Err(e);
        }
    };

    let mut plans = Vec::new();
    for model in &cfg.models {
        for &ordering in &cfg.orderings {
            for repeat in 0..cfg.repeats {
                plans.push(RunPlan {
                    model,
                    ordering,
                    seed: run_seed(cfg.seed, model.name, ordering.as_str(), repeat),
                    repeat,
                });
            }
        }
    }

    let entries: Vec<SweepEntry> = plans
        .par_iter()
        .map(|&plan| {
            let started = Instant::now();
            let outcome = execute_run(&cfg, &g, &states, plan);
            let duration_ms = started.elapsed().as_millis();
            let (files, error) = match outcome {
                Ok((_, files)) => (files, None),
                Err(CliError::Validation(m)) => (Vec::new(), Some(format!("validation: {m}"))),
                Err(CliError::Runtime(m)) => (Vec::new(), Some(format!("runtime: {m}"))),
            };
            SweepEntry {
                run_id: plan.id(),
                config_hash: format!(
                    "{:016x}",
                    fnv1a64(format!("{config_hash}/{}", plan.id()).as_bytes())
                ),
                model: plan.model.name.to_string(),
                ordering: plan.ordering.as_str().to_string(),
                repeat: plan.repeat,
                seed: plan.seed,
                files,
                duration_ms,
                error,
            }
        })
        .collect();

    let failed = entries.iter().filter(|e| e.error.is_some()).count();
    let runtime_failure = entries
        .iter()
        .any(|e| e.error.as_deref().is_some_and(|m| m.starts_with("runtime")));
    let summary = format!(
        "sweep: {} runs, {} failed -> {}",
        entries.len(),
        failed,
        cfg.out.display()
    );
    write_sweep_manifest(
        &cfg,
        &SweepManifest {
            master_seed: cfg.seed,
            config_hash,
            runs: entries,
        },
    )?;
    println!("{summary}");
    if failed == 0 {
        Ok(())
    } else if runtime_failure {
        Err(runtime(format!("{failed} runs failed")))
    } else {
        Err(validation(format!("{failed} runs failed")))
    }
}

fn cmd_ground_truth(common: &CommonOpts, labels_t1: &Path) -> CliResult<()> {
    let cfg = Config::resolve(common)?;
    let g = cfg.load_graph()?;
    let t0 = cfg.load_label_map(cfg.labels_path()?)?;
    let t1 = cfg.load_label_map(labels_t1)?;
    let vector = validation_vector(&metric_vector(&g, &t0, &t1)?);
    fs::create_dir_all(&cfg.out)
        .map_err(|e| runtime(format!("cannot create {}: {e}", cfg.out.display())))?;
    let path = cfg.out.join("truth.csv");
    write_validation_csv(create_writer(&path)?, &vector)?;
    println!("truth vector ({} nodes, {} edges) -> {}", g.node_count(), g.edge_count(), path.display());
    Ok(())
}

struct RankedRow {
    run: String,
    t_a: String,
    best_cosine: f64,
    best_snapshot: usize,
}

fn cmd_compare(common: &CommonOpts, runs_dir: &Path, truth_path: &Path) -> CliResult<()> {
    let _ = Config::resolve(common)?;
    let truth: ValidationVector = aggsim::io::read_validation_csv(open_reader(truth_path)?)
        .map_err(|e| match e {
            aggsim::Error::Io(inner) => runtime(format!("{}: {inner}", truth_path.display())),
            other => validation(format!("{}: {other}", truth_path.display())),
        })?;

    let mut run_dirs: Vec<PathBuf> = fs::read_dir(runs_dir)
        .map_err(|e| runtime(format!("cannot read {}: {e}", runs_dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.join("manifest.json").exists())
        .collect();
    run_dirs.sort();
    if run_dirs.is_empty() {
        return Err(validation(format!(
            "no run directories under {}",
            runs_dir.display()
        )));
    }

    let mut ranking: Vec<RankedRow> = Vec::new();
    for dir in &run_dirs {
        let run_name = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut metric_files: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(|e| runtime(format!("cannot read {}: {e}", dir.display())))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| {
                p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| n.starts_with("metrics_ta_") && n.ends_with(".csv"))
            })
            .collect();
        metric_files.sort();
        for metrics_path in metric_files {
            let stem = metrics_path
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap()
                .trim_start_matches("metrics_ta_")
                .trim_end_matches(".csv")
                .to_string();
            let rows = aggsim::io::read_metric_csv(open_reader(&metrics_path)?)
                .map_err(|e| match e {
                    aggsim::Error::Io(inner) => {
                        runtime(format!("{}: {inner}", metrics_path.display()))
                    }
                    other => validation(format!("{}: {other}", metrics_path.display())),
                })?;
            let vectors: Vec<ValidationVector> =
                rows.iter().map(validation_vector).collect();
            let report = compare_run(&vectors, &truth)?;
            let out_path = dir.join(format!("similarity_ta_{stem}.csv"));
            write_similarity_csv(create_writer(&out_path)?, &report)?;
            let (best_snapshot, best_cosine) = report
                .rows
                .iter()
                .map(|(idx, s)| (*idx, s.cosine))
                .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
                .unwrap_or((0, f64::NEG_INFINITY));
            ranking.push(RankedRow {
                run: run_name.clone(),
                t_a: stem,
                best_cosine,
                best_snapshot,
            });
        }
    }
    if ranking.is_empty() {
        return Err(validation("run directories contain no metric files"));
    }

    ranking.sort_by(|a, b| {
        b.best_cosine
            .total_cmp(&a.best_cosine)
            .then_with(|| a.run.cmp(&b.run))
            .then_with(|| a.t_a.cmp(&b.t_a))
    });
    let ranking_path = runs_dir.join("ranking.csv");
    let mut w = create_writer(&ranking_path)?;
    writeln!(w, "rank,run,t_a,best_cosine,best_snapshot")
        .map_err(|e| runtime(e.to_string()))?;
    for (i, row) in ranking.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{},{}",
            i + 1,
            row.run,
            row.t_a,
            sig6(row.best_cosine),
            row.best_snapshot
        )
        .map_err(|e| runtime(e.to_string()))?;
    }
    println!(
        "compared {} run/threshold pairs -> {}",
        ranking.len(),
        ranking_path.display()
    );
    Ok(())
}

fn cmd_evaluate(common: &CommonOpts, run_dir: &Path) -> CliResult<()> {
    let cfg = Config::resolve(common)?;
    let scores_path = run_dir.join("scores.csv");
    let snapshots = aggsim::io::read_run_csv(open_reader(&scores_path)?)
        .map_err(|e| match e {
            aggsim::Error::Io(inner) => runtime(format!("{}: {inner}", scores_path.display())),
            other => validation(format!("{}: {other}", scores_path.display())),
        })?;
    let (_, last) = snapshots
        .iter()
        .next_back()
        .ok_or_else(|| validation(format!("{} holds no snapshots", scores_path.display())))?;

    let truth_map = cfg.load_label_map(cfg.labels_path()?)?;
    let mut scores = Vec::with_capacity(last.len());
    let mut truth = Vec::with_capacity(last.len());
    for (&id, &score) in last {
        scores.push(score);
        truth.push(truth_map.get(&id).copied().unwrap_or(Label::Normal));
    }

    let report = prediction_report(&scores, &truth, &cfg.ta)?;
    let out_path = run_dir.join("prediction.csv");
    write_prediction_csv(create_writer(&out_path)?, &report)?;
    println!("auc {} -> {}", sig6(report.auc), out_path.display());
    Ok(())
}

fn cmd_features(opts: &CommonOpts) -> CliResult<()> {
    let cfg = Config::resolve(opts)?;
    let g = cfg.load_graph()?;
    let table = node_features(&g);
    if !table.hits_converged {
        eprintln!("note: HITS did not converge within the iteration cap");
    }
    if !table.eigenvector_converged {
        eprintln!("note: eigenvector centrality did not converge within the iteration cap");
    }
    fs::create_dir_all(&cfg.out)
        .map_err(|e| runtime(format!("cannot create {}: {e}", cfg.out.display())))?;
    let path = cfg.out.join("features.csv");
    write_features_csv(create_writer(&path)?, &table)?;
    println!("{} nodes -> {}", g.node_count(), path.display());
    Ok(())
}

// --- entry ------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Simulate(opts) => cmd_simulate(opts),
        Command::Sweep(opts) => cmd_sweep(opts),
        Command::GroundTruth { common, labels_t1 } => cmd_ground_truth(common, labels_t1),
        Command::Compare {
            common,
            runs,
            truth,
        } => cmd_compare(common, runs, truth),
        Command::Evaluate { common, run } => cmd_evaluate(common, run),
        Command::Features(opts) => cmd_features(opts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
