//! Command-line front end for `localcut`.
//!
//! Every command prints one JSON document on stdout and a short summary on
//! stderr. Reports carry no wall-clock fields unless `--timing` is given, so
//! the same arguments and seed produce byte-identical output.

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use localcut::generators::GeneratorSpec;
use localcut::global_vc::{exact_vertex_connectivity, vertex_connectivity_check, Sampling, VcConfig, VcVerdict};
use localcut::graph::{load_graph, write_graph};
use localcut::kecs::{max_kecs_directed, max_kecs_undirected, KecsConfig};
use localcut::local_ec::{gap_local_ec, local_ec, local_ec_alt, Detection};
use localcut::local_vc::{gap_local_vc, local_vc};
use localcut::testing::{Model, Outcome, Property, Tester, TesterConfig};
use localcut::trials::{derive_seed, map_indexed, Execution, Proportion};
use localcut::{oracle, CutOutcome, DirectedGraph, LocalCutParams, Mode};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Version tag written into every report.
pub const SCHEMA: &str = "localcut/1";

#[derive(Debug, Parser)]
#[command(name = "localcut", version, about = "Local cut detection, vertex connectivity, connectivity testing and k-edge-connected subgraphs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Master seed. Trial `i` runs with a seed derived from it and `i`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Refuse parameters outside the proven regime (exit code 2).
    #[arg(long, global = true)]
    pub strict: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub json_out: Option<PathBuf>,
    /// Run independent trials and probes on the thread pool.
    #[arg(long, global = true)]
    pub parallel: bool,
    /// Add wall-clock times to the JSON report.
    #[arg(long, global = true)]
    pub timing: bool,
}

impl Global {
    fn mode(&self) -> Mode {
        if self.strict {
            Mode::Strict
        } else {
            Mode::Relaxed
        }
    }

    fn execution(&self) -> Execution {
        if self.parallel {
            Execution::Parallel
        } else {
            Execution::Serial
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph (and a certificate for planted kinds).
    Gen(GenArgs),
    /// Local edge-cut search around one vertex.
    LocalEc(LocalEcArgs),
    /// Local vertex-cut search around one vertex.
    LocalVc(LocalVcArgs),
    /// Decide k-vertex connectivity, or compute κ with `--exact`.
    Vc(VcArgs),
    /// Property tester for k-edge or k-vertex connectivity.
    TestConn(TestConnArgs),
    /// Maximal k-edge-connected subgraphs.
    Kecs(KecsArgs),
    /// Exact reference computations for small graphs.
    Oracle(OracleArgs),
    /// Repeat a randomized command and report every trial.
    Trials(TrialsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenKind {
    Clique,
    Cycle,
    Pendant,
    TwoClique,
    PlantedFarEdge,
    PlantedFarVertex,
    Fig5,
    Random,
    Circulant,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    pub kind: GenKind,
    /// Output graph file.
    #[arg(long, value_name = "PATH")]
    pub out: PathBuf,
    /// Certificate file for planted kinds.
    #[arg(long, value_name = "PATH")]
    pub certificate: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub undirected: bool,
    /// Size of the large clique of `two-clique`.
    #[arg(long, default_value_t = 700)]
    pub large: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 40)]
    pub gadgets: usize,
    #[arg(long, default_value_t = 40)]
    pub core: usize,
    /// Degree cap; selects the bounded planted variants.
    #[arg(long)]
    pub d: Option<usize>,
    /// Circulant offsets, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub offsets: Vec<usize>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LocalEcArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Start vertex.
    #[arg(long, alias = "source")]
    pub x: usize,
    #[arg(long)]
    pub nu: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub gamma: usize,
    /// Gap version: cuts below `k − γ` are the targets.
    #[arg(long, conflicts_with = "alt")]
    pub gap: bool,
    /// Fixed-budget variant with approximation parameter `--epsilon`.
    #[arg(long, requires = "epsilon")]
    pub alt: bool,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 1)]
    #[serde(skip)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LocalVcArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, alias = "source")]
    pub x: usize,
    #[arg(long)]
    pub nu: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub gamma: usize,
    #[arg(long)]
    pub gap: bool,
    #[arg(long, default_value_t = 1)]
    #[serde(skip)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingArg {
    Edge,
    Node,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VcArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, required_unless_present = "exact")]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    /// Compute κ instead of checking a threshold.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, value_enum, default_value_t = SamplingArg::Edge)]
    pub mode: SamplingArg,
    #[arg(long, default_value_t = 4.0)]
    pub c_pair: f64,
    #[arg(long, default_value_t = 4.0)]
    pub c_seed: f64,
    #[arg(long)]
    pub nu_bar: Option<usize>,
    #[arg(long)]
    pub sigma_bar: Option<usize>,
    /// Local repetitions per seed and direction.
    #[arg(long)]
    pub boost: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyArg {
    Edge,
    Vertex,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Unbounded,
    Bounded,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TestConnArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub property: PropertyArg,
    #[arg(long, value_enum, default_value_t = ModelArg::Unbounded)]
    pub model: ModelArg,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub epsilon: f64,
    /// Degree bound of the bounded model. Defaults to the maximum degree.
    #[arg(long)]
    pub d: Option<usize>,
    /// Let the unbounded tester use the average degree.
    #[arg(long)]
    pub davg_known: bool,
    /// Allow the degree-only path for simple graphs.
    #[arg(long)]
    pub simple: bool,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub c3: Option<f64>,
    #[arg(long, default_value_t = 1)]
    #[serde(skip)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KecsArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub sigma: Option<usize>,
    #[arg(long)]
    pub baseline_arcs: Option<usize>,
    /// Use the directed algorithm even on an undirected graph.
    #[arg(long)]
    pub directed: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleOp {
    LocalEc,
    LocalVc,
    Lambda,
    Kappa,
    Kecs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OracleArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub op: OracleOp,
    #[arg(long, alias = "source")]
    pub x: Option<usize>,
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TrialsArgs {
    #[arg(long)]
    pub trials: usize,
    #[command(subcommand)]
    pub command: TrialCommand,
}

#[derive(Debug, Subcommand)]
pub enum TrialCommand {
    LocalEc(LocalEcArgs),
    LocalVc(LocalVcArgs),
    Vc(VcArgs),
    TestConn(TestConnArgs),
}

/// Failure modes with distinct exit codes.
#[derive(Debug)]
pub struct Rejected(pub String);

impl fmt::Display for Rejected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rejected: {}", self.0)
    }
}

impl std::error::Error for Rejected {}

fn reject(e: impl fmt::Display) -> anyhow::Error {
    anyhow::Error::new(Rejected(e.to_string()))
}

/// Exit code for an error returned by [`run`]: 2 for rejected parameters,
/// 1 for everything else.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<Rejected>().is_some() {
        2
    } else {
        1
    }
}

/// A finished command: the JSON document and a one-line summary.
pub struct Report {
    pub json: Value,
    pub summary: String,
    pub warnings: Vec<String>,
}

impl Report {
    /// Pretty-printed JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("reports are plain JSON");
        s.push('\n');
        s
    }
}

pub fn run(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    let (name, body, summary) = match &cli.command {
        Command::Gen(a) => gen(a, g)?,
        Command::LocalEc(a) => {
            let graph = read_graph(&a.graph)?;
            let p = prepare_local_ec(a, &graph, g);
            single("local-ec", a.trials, p, g)?
        }
        Command::LocalVc(a) => {
            let graph = read_graph(&a.graph)?;
            let p = prepare_local_vc(a, &graph, g);
            single("local-vc", a.trials, p, g)?
        }
        Command::Vc(a) if a.exact => exact_vc(a, g)?,
        Command::Vc(a) => {
            let graph = read_graph(&a.graph)?;
            let p = prepare_vc(a, &graph, g);
            single("vc", 1, p, g)?
        }
        Command::TestConn(a) => {
            let graph = read_graph(&a.graph)?;
            let p = prepare_test_conn(a, &graph, g)?;
            single("test-conn", a.trials, p, g)?
        }
        Command::Kecs(a) => kecs(a, g)?,
        Command::Oracle(a) => run_oracle(a)?,
        Command::Trials(a) => trials(a, g)?,
    };
    let mut json = Map::new();
    json.insert("schema".into(), SCHEMA.into());
    json.insert("command".into(), name.into());
    json.insert("seed".into(), g.seed.into());
    json.insert("parallel".into(), g.parallel.into());
    json.extend(body);
    let warnings = match json.get("guarantee_void") {
        Some(Value::Bool(true)) => vec!["parameters are outside the proven regime; results carry no guarantee".into()],
        _ => Vec::new(),
    };
    Ok(Report { json: Value::Object(json), summary, warnings })
}

type Body = (&'static str, Map<String, Value>, String);

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

fn read_graph(path: &Path) -> Result<DirectedGraph> {
    load_graph(path).map_err(|e| anyhow!(e)).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn gen(a: &GenArgs, g: &Global) -> Result<Body> {
    let need_n = || a.n.ok_or_else(|| reject("--n is required for this kind"));
    let spec = match a.kind {
        GenKind::Clique => GeneratorSpec::Clique { n: need_n()?, undirected: a.undirected },
        GenKind::Cycle => GeneratorSpec::Cycle { n: need_n()?, undirected: a.undirected },
        GenKind::Pendant => GeneratorSpec::Pendant,
        GenKind::TwoClique => GeneratorSpec::TwoClique { large: a.large },
        GenKind::PlantedFarEdge => {
            GeneratorSpec::PlantedFarEdge { k: a.k, epsilon: a.epsilon, gadgets: a.gadgets, core: a.core, d: a.d }
        }
        GenKind::PlantedFarVertex => {
            GeneratorSpec::PlantedFarVertex { k: a.k, epsilon: a.epsilon, gadgets: a.gadgets, core: a.core, d: a.d }
        }
        GenKind::Fig5 => GeneratorSpec::Fig5,
        GenKind::Random => GeneratorSpec::Random {
            n: need_n()?,
            p: a.p.ok_or_else(|| reject("--p is required for random graphs"))?,
            undirected: a.undirected,
            seed: g.seed,
        },
        GenKind::Circulant => {
            if a.offsets.is_empty() {
                return Err(reject("--offsets is required for circulants"));
            }
            GeneratorSpec::Circulant { n: need_n()?, offsets: a.offsets.clone() }
        }
    };
    let (graph, planted) = spec.build().map_err(reject)?;
    write_file(&a.out, &write_graph(&graph))?;
    let mut body = obj(json!({
        "spec": spec,
        "out": a.out,
        "n": graph.n(),
        "m": graph.m(),
        "undirected": graph.is_undirected(),
    }));
    if let Some(p) = &planted {
        body.insert("certified".into(), p.certified.into());
        if let Some(path) = &a.certificate {
            let cert = json!({ "schema": SCHEMA, "spec": spec, "certified": p.certified, "family": p.family });
            write_file(path, &(serde_json::to_string_pretty(&cert)? + "\n"))?;
            body.insert("certificate".into(), json!(path));
        }
    }
    let summary = format!("wrote {} (n={}, m={})", a.out.display(), graph.n(), graph.m());
    Ok(("gen", body, summary))
}

/// Result of one randomized run.
struct Trial {
    success: bool,
    outcome: &'static str,
    queries: Option<u64>,
    marked: Option<u64>,
    guarantee_void: bool,
    detail: Map<String, Value>,
}

#[derive(Serialize)]
struct TrialRecord {
    trial: usize,
    seed: u64,
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    queries: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    marked: Option<u64>,
    guarantee_void: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_ms: Option<f64>,
    #[serde(skip)]
    success: bool,
    #[serde(skip)]
    detail: Map<String, Value>,
    #[serde(skip)]
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct Aggregate {
    trials: usize,
    successes: usize,
    success_rate: f64,
    std_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_queries: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_queries: Option<u64>,
    guarantee_void_trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_runtime_ms: Option<f64>,
}

type TrialFn<'a> = Box<dyn Fn(&mut ChaCha8Rng) -> Result<Trial> + Sync + Send + 'a>;

/// A randomized command bound to its graph.
struct Prepared<'a> {
    params: Value,
    /// Label of a successful trial in the aggregate (`nonbot`, `rejected`, ...).
    success_label: &'static str,
    /// Key of the success rate in direct-invocation reports.
    rate_key: &'static str,
    extra: Map<String, Value>,
    run: TrialFn<'a>,
}

fn run_trials(p: &Prepared<'_>, n: usize, g: &Global) -> Result<Vec<TrialRecord>> {
    if n == 0 {
        return Err(reject("at least one trial is needed"));
    }
    let records = map_indexed(g.execution(), n, |i| {
        let seed = derive_seed(g.seed, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = Instant::now();
        let t = (p.run)(&mut rng)?;
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        Ok(TrialRecord {
            trial: i,
            seed,
            outcome: t.outcome,
            queries: t.queries,
            marked: t.marked,
            guarantee_void: t.guarantee_void,
            runtime_ms: g.timing.then_some(elapsed_ms),
            success: t.success,
            detail: t.detail,
            elapsed_ms,
        })
    });
    records.into_iter().collect()
}

fn aggregate(records: &[TrialRecord], timing: bool) -> Aggregate {
    let prop = Proportion { successes: records.iter().filter(|r| r.success).count(), trials: records.len() };
    let queries: Vec<u64> = records.iter().filter_map(|r| r.queries).collect();
    Aggregate {
        trials: prop.trials,
        successes: prop.successes,
        success_rate: prop.rate(),
        std_error: prop.std_error(),
        mean_queries: (!queries.is_empty()).then(|| queries.iter().sum::<u64>() as f64 / queries.len() as f64),
        max_queries: queries.iter().copied().max(),
        guarantee_void_trials: records.iter().filter(|r| r.guarantee_void).count(),
        total_runtime_ms: timing.then(|| records.iter().map(|r| r.elapsed_ms).sum()),
    }
}

/// Direct invocation: trial 0 in full, plus aggregates when `trials > 1`.
fn single(name: &'static str, trials: usize, p: Prepared<'_>, g: &Global) -> Result<Body> {
    let records = run_trials(&p, trials, g)?;
    let first = &records[0];
    let mut body = Map::new();
    body.insert("params".into(), p.params.clone());
    body.insert("mode".into(), json!(g.mode()));
    body.extend(p.extra.clone());
    body.insert("outcome".into(), first.outcome.into());
    body.extend(first.detail.clone());
    if let Some(q) = first.queries {
        body.insert("queries".into(), q.into());
    }
    if let Some(m) = first.marked {
        body.insert("marked".into(), m.into());
    }
    body.insert("guarantee_void".into(), first.guarantee_void.into());
    if g.timing {
        body.insert("runtime_ms".into(), json!(first.elapsed_ms));
    }
    let mut summary = format!("{name}: {}", first.outcome);
    if trials > 1 {
        let agg = aggregate(&records, g.timing);
        body.insert("trials".into(), trials.into());
        body.insert(format!("trials_{}", p.success_label), agg.successes.into());
        body.insert(p.rate_key.into(), agg.success_rate.into());
        body.insert("std_error".into(), agg.std_error.into());
        if let Some(m) = agg.mean_queries {
            body.insert("mean_queries".into(), m.into());
        }
        if let Some(m) = agg.max_queries {
            body.insert("max_queries".into(), m.into());
        }
        body.insert("guarantee_void_trials".into(), agg.guarantee_void_trials.into());
        if let Some(t) = agg.total_runtime_ms {
            body.insert("total_runtime_ms".into(), t.into());
        }
        summary = format!(
            "{name}: {}/{} {} ({:.4} ± {:.4})",
            agg.successes, trials, p.success_label, agg.success_rate, agg.std_error
        );
    }
    summary += &format!(" [{:.1} ms]", records.iter().map(|r| r.elapsed_ms).sum::<f64>());
    Ok((name, body, summary))
}

fn trials(a: &TrialsArgs, g: &Global) -> Result<Body> {
    let path = match &a.command {
        TrialCommand::LocalEc(x) => &x.graph,
        TrialCommand::LocalVc(x) => &x.graph,
        TrialCommand::Vc(x) => &x.graph,
        TrialCommand::TestConn(x) => &x.graph,
    };
    let graph = read_graph(path)?;
    let (inner, p) = match &a.command {
        TrialCommand::LocalEc(x) => ("local-ec", prepare_local_ec(x, &graph, g)),
        TrialCommand::LocalVc(x) => ("local-vc", prepare_local_vc(x, &graph, g)),
        TrialCommand::Vc(x) if x.exact => return Err(reject("--exact is deterministic; run `vc --exact` directly")),
        TrialCommand::Vc(x) => ("vc", prepare_vc(x, &graph, g)),
        TrialCommand::TestConn(x) => ("test-conn", prepare_test_conn(x, &graph, g)?),
    };
    let records = run_trials(&p, a.trials, g)?;
    let agg = aggregate(&records, g.timing);
    let summary = format!(
        "trials {inner}: {}/{} {} ({:.4} ± {:.4})",
        agg.successes, agg.trials, p.success_label, agg.success_rate, agg.std_error
    );
    let mut body = obj(json!({
        "inner": inner,
        "params": p.params,
        "mode": g.mode(),
        "success": p.success_label,
        "aggregate": agg,
        "records": records,
    }));
    body.extend(p.extra);
    Ok(("trials", body, summary))
}

fn prepare_local_ec<'a>(a: &'a LocalEcArgs, graph: &'a DirectedGraph, g: &Global) -> Prepared<'a> {
    let mode = g.mode();
    let params = LocalCutParams { x: a.x, nu: a.nu, k: a.k, gamma: a.gamma };
    let run = move |rng: &mut ChaCha8Rng| -> Result<Trial> {
        let out = if a.alt {
            local_ec_alt(graph, a.x, a.nu, a.k, a.epsilon.expect("clap requires it"), mode, rng)
        } else if a.gap {
            gap_local_ec(graph, params, mode, rng)
        } else {
            local_ec(graph, params, mode, rng)
        };
        Ok(cut_trial(out.map_err(reject)?))
    };
    Prepared { params: json!(a), success_label: "nonbot", rate_key: "nonbot_rate", extra: Map::new(), run: Box::new(run) }
}

fn prepare_local_vc<'a>(a: &'a LocalVcArgs, graph: &'a DirectedGraph, g: &Global) -> Prepared<'a> {
    let mode = g.mode();
    let params = LocalCutParams { x: a.x, nu: a.nu, k: a.k, gamma: a.gamma };
    let gap = a.gap;
    let run = move |rng: &mut ChaCha8Rng| -> Result<Trial> {
        let out = if gap { gap_local_vc(graph, params, mode, rng) } else { local_vc(graph, params, mode, rng) };
        Ok(cut_trial(out.map_err(reject)?))
    };
    Prepared { params: json!(a), success_label: "nonbot", rate_key: "nonbot_rate", extra: Map::new(), run: Box::new(run) }
}

fn cut_trial(out: CutOutcome) -> Trial {
    let detail = match &out.detection {
        Detection::Bot => Map::new(),
        Detection::EdgeCut(c) => obj(json!({
            "cut_vertices": c.vertices,
            "cut_size": c.cut_size,
            "volume": c.volume,
        })),
        Detection::VertexCut(r) => {
            let mut m = obj(json!({
                "cut": r.cut,
                "split_cut": r.split_cut,
                "split_volume": r.split_volume,
                "fallback": r.fallback,
            }));
            if let Some(t) = &r.witness {
                m.insert("L".into(), json!(t.left));
                m.insert("R".into(), json!(t.right));
            }
            m
        }
    };
    Trial {
        success: !out.is_bot(),
        outcome: if out.is_bot() { "bot" } else { "cut" },
        queries: Some(out.stats.queries),
        marked: Some(out.stats.marked),
        guarantee_void: out.guarantee_void,
        detail,
    }
}

fn vc_config(a: &VcArgs, k: usize, g: &Global) -> VcConfig {
    VcConfig {
        nu_bar: a.nu_bar,
        sigma_bar: a.sigma_bar,
        c_pair: a.c_pair,
        c_seed: a.c_seed,
        boost: a.boost,
        sampling: match a.mode {
            SamplingArg::Edge => Sampling::Edge,
            SamplingArg::Node => Sampling::Node,
        },
        execution: g.execution(),
        ..VcConfig::new(k, a.epsilon)
    }
}

fn prepare_vc<'a>(a: &'a VcArgs, graph: &'a DirectedGraph, g: &Global) -> Prepared<'a> {
    let cfg = vc_config(a, a.k.expect("clap requires k without --exact"), g);
    let run = move |rng: &mut ChaCha8Rng| -> Result<Trial> {
        let r = vertex_connectivity_check(graph, &cfg, rng).map_err(reject)?;
        let mut detail = obj(json!({
            "probes": r.probes,
            "degree_shortcut": r.degree_shortcut,
            "exhaustive": r.exhaustive,
        }));
        let (success, outcome) = match &r.verdict {
            VcVerdict::KConnected => (false, "k_connected"),
            VcVerdict::Cut { cut, triple } => {
                detail.insert("cut".into(), json!(cut));
                detail.insert("L".into(), json!(triple.left));
                detail.insert("R".into(), json!(triple.right));
                (true, "cut")
            }
        };
        Ok(Trial { success, outcome, queries: None, marked: None, guarantee_void: false, detail })
    };
    Prepared { params: json!(a), success_label: "cut", rate_key: "cut_rate", extra: Map::new(), run: Box::new(run) }
}

fn exact_vc(a: &VcArgs, g: &Global) -> Result<Body> {
    let graph = read_graph(&a.graph)?;
    let start = Instant::now();
    let cfg = vc_config(a, 1, g);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(g.seed, 0));
    let c = exact_vertex_connectivity(&graph, &cfg, &mut rng);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let mut body = obj(json!({ "params": a, "verdict": "exact", "kappa": c.kappa }));
    if let Some(t) = &c.triple {
        body.insert("cut".into(), json!(t.separator));
        body.insert("L".into(), json!(t.left));
        body.insert("R".into(), json!(t.right));
    }
    if g.timing {
        body.insert("runtime_ms".into(), elapsed.into());
    }
    Ok(("vc", body, format!("vc: κ = {} [{elapsed:.1} ms]", c.kappa)))
}

fn prepare_test_conn<'a>(a: &'a TestConnArgs, graph: &'a DirectedGraph, g: &Global) -> Result<Prepared<'a>> {
    let model = match a.model {
        ModelArg::Unbounded => Model::Unbounded { avg_degree_known: a.davg_known },
        ModelArg::Bounded => Model::Bounded { d: a.d.unwrap_or_else(|| graph.stats().max_degree) },
    };
    let property = match a.property {
        PropertyArg::Edge => Property::Edge,
        PropertyArg::Vertex => Property::Vertex,
    };
    let mut cfg = TesterConfig::new(a.k, a.epsilon, model, property);
    cfg.simple_graph = a.simple;
    cfg.mode = g.mode();
    if let Some(c) = a.c2 {
        cfg.c2 = c;
    }
    if let Some(c) = a.c3 {
        cfg.c3 = c;
    }
    let tester = Tester::new(graph, cfg.clone()).map_err(reject)?;
    let budget = tester.budget();
    let run = move |rng: &mut ChaCha8Rng| -> Result<Trial> {
        let v = tester.run(rng);
        let mut detail = match &v.outcome {
            Outcome::DeclaredConnected => Map::new(),
            Outcome::WitnessCut(w) => obj(json!({ "witness": w })),
        };
        detail.insert("local_calls".into(), v.local_calls.into());
        Ok(Trial {
            success: v.rejected(),
            outcome: if v.rejected() { "witness_cut" } else { "declared_connected" },
            queries: Some(v.queries),
            marked: None,
            guarantee_void: v.guarantee_void,
            detail,
        })
    };
    Ok(Prepared {
        params: json!(a),
        success_label: "rejected",
        rate_key: "reject_rate",
        extra: obj(json!({ "budget": budget, "tester": cfg })),
        run: Box::new(run),
    })
}

fn kecs(a: &KecsArgs, g: &Global) -> Result<Body> {
    let graph = read_graph(&a.graph)?;
    let cfg = KecsConfig { nu: a.nu, sigma: a.sigma, baseline_arcs: a.baseline_arcs, execution: g.execution(), ..KecsConfig::new(a.k) };
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(g.seed, 0));
    let start = Instant::now();
    let undirected = graph.is_undirected() && !a.directed;
    let (part, stats) = if undirected {
        max_kecs_undirected(&graph, &cfg, &mut rng)
    } else {
        max_kecs_directed(&graph, &cfg, &mut rng)
    }
    .map_err(reject)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let mut body = obj(json!({
        "params": a,
        "algorithm": if undirected { "undirected" } else { "directed" },
        "num_parts": part.parts.len(),
        "parts": part.parts,
        "stats": stats,
    }));
    if g.timing {
        body.insert("runtime_ms".into(), elapsed.into());
    }
    Ok(("kecs", body, format!("kecs: {} parts [{elapsed:.1} ms]", part.parts.len())))
}

fn run_oracle(a: &OracleArgs) -> Result<Body> {
    let graph = read_graph(&a.graph)?;
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| reject(format!("--{flag} is required for this op")));
    let (result, summary) = match a.op {
        OracleOp::LocalEc => {
            let sets = oracle::brute_local_ec(&graph, need(a.x, "x")?, need(a.nu, "nu")?, need(a.k, "k")?).map_err(reject)?;
            let s = format!("oracle local-ec: {} sets", sets.len());
            (json!({ "count": sets.len(), "sets": sets }), s)
        }
        OracleOp::LocalVc => {
            let triples = oracle::brute_local_vc(&graph, need(a.x, "x")?, need(a.nu, "nu")?, need(a.k, "k")?).map_err(reject)?;
            let s = format!("oracle local-vc: {} triples", triples.len());
            (json!({ "count": triples.len(), "triples": triples }), s)
        }
        OracleOp::Lambda => {
            let c = oracle::exact_edge_connectivity(&graph).ok_or_else(|| reject("need at least two vertices"))?;
            let s = format!("oracle: λ = {}", c.lambda);
            (json!(c), s)
        }
        OracleOp::Kappa => {
            let c = oracle::exact_vertex_connectivity(&graph).map_err(reject)?;
            let s = format!("oracle: κ = {}", c.kappa);
            (json!(c), s)
        }
        OracleOp::Kecs => {
            let parts = oracle::brute_max_kecs(&graph, need(a.k, "k")?).map_err(reject)?;
            let s = format!("oracle kecs: {} parts", parts.len());
            (json!({ "num_parts": parts.len(), "parts": parts }), s)
        }
    };
    Ok(("oracle", obj(json!({ "params": a, "result": result })), summary))
}
