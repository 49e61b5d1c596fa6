use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use pseudosched::baselines::{exact_min_pseudo, greedy_strict, greedy_strict_by_id};
use pseudosched::bench::{run_bench, standard_suite, Algorithm, BenchOptions};
use pseudosched::dband::sim::{read_trace, write_trace, EventKind};
use pseudosched::dband::{run_dband, Interleaving, MessageKind, SimConfig, TraceRecord};
use pseudosched::generate::{self, CycleType, GraphSpec};
use pseudosched::tree::min_valid_d;
use pseudosched::twice_degree::{twice_degree, twice_degree_traced, TraceStep};
use pseudosched::verify::{is_strict_schedule, is_t_pseudo_schedule, verdict};
use pseudosched::{io, Coloring, Error, Graph, RootedTree, Vertex};

#[derive(Parser)]
#[command(name = "pseudosched", version, about = "Pseudo-schedules for broadcast scheduling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file.
    Gen(GenArgs),
    /// Compute a schedule for a graph file.
    Solve(SolveArgs),
    /// Check a schedule and print the verdict as JSON.
    Verify(VerifyArgs),
    /// Run the algorithms over a generator family and report color counts.
    Bench(BenchArgs),
    /// Summarize a trace file.
    TraceInspect(TraceInspectArgs),
    /// Exhaustive minimum pseudo-schedule for tiny graphs.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct Seed {
    #[arg(long, env = "PSEUDOSCHED_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Path,
    Star,
    Grid,
    Gnp,
    Geometric,
    Gadget,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    kind: Kind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    leaves: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    /// I, II or mixed.
    #[arg(long)]
    cycle_type: Option<CycleType>,
    #[command(flatten)]
    seed: Seed,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a DOT rendering.
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    TwiceDegree,
    Dband,
    GreedyStrict,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    algo: Algo,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    root: Vertex,
    /// Band count, or `auto` for the least valid one.
    #[arg(long, default_value = "auto")]
    d: String,
    /// bfs, dfs, random, or a graph file carrying the tree. Defaults to the
    /// tree in the input file, else bfs.
    #[arg(long)]
    tree: Option<String>,
    #[arg(long, default_value = "random")]
    interleaving: Interleaving,
    #[arg(long)]
    budget: Option<u64>,
    #[command(flatten)]
    seed: Seed,
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the graph with the tree used.
    #[arg(long)]
    tree_out: Option<PathBuf>,
    /// JSON array of vertices for greedy-strict.
    #[arg(long)]
    order: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    schedule: PathBuf,
    /// Graph file carrying the tree; defaults to the tree in the input.
    #[arg(long)]
    tree: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    All,
    Path,
    Star,
    Grid,
    Gnp,
    Geometric,
    Gadget,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "all")]
    family: Family,
    /// Repeatable; all algorithms when absent.
    #[arg(long)]
    algo: Vec<Algo>,
    #[arg(long)]
    d: Option<usize>,
    #[command(flatten)]
    seed: Seed,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Record wall time per row (makes the report run-dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct TraceInspectArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Print the summary as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    min_pseudo: bool,
    #[arg(long, default_value_t = 4)]
    max_colors: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Verification(String),
    Error(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::VerificationFailed(msg) => Failure::Verification(msg),
            e => Failure::Error(e),
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::TraceInspect(a) => cmd_trace_inspect(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Error(e @ Error::NonTermination { .. })) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Error> {
    Ok(fs::read(path)?)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, Error> {
    value.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required for this kind")))
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let seed = a.seed.seed;
    let spec = match a.kind {
        Kind::Path => GraphSpec::Path { n: required(a.n, "n")? },
        Kind::Star => GraphSpec::Star {
            leaves: required(a.leaves.or(a.n), "leaves")?,
        },
        Kind::Grid => GraphSpec::Grid {
            rows: required(a.rows, "rows")?,
            cols: required(a.cols, "cols")?,
        },
        Kind::Gnp => GraphSpec::RandomGnp {
            n: required(a.n, "n")?,
            p: required(a.p, "p")?,
            seed,
        },
        Kind::Geometric => GraphSpec::RandomGeometric {
            n: required(a.n, "n")?,
            radius: required(a.radius, "radius")?,
            seed,
        },
        Kind::Gadget => GraphSpec::CycleGadget {
            k: required(a.k, "k")?,
            cycle_type: required(a.cycle_type, "cycle-type")?,
        },
    };
    let generated = generate::generate(&spec)?;
    let tree = generated.tree.as_ref();
    emit(a.out.as_deref(), &(io::serialize_graph(&generated.graph, tree) + "\n"))?;
    if let Some(dot) = a.dot {
        fs::write(dot, io::export_dot(&generated.graph, tree, None)).map_err(Error::from)?;
    }
    Ok(())
}

fn choose_tree(g: &Graph, given: Option<RootedTree>, choice: Option<&str>, root: Vertex, seed: u64) -> Result<RootedTree, Error> {
    match choice {
        None => match given {
            Some(t) => Ok(t),
            None => RootedTree::bfs(g, root),
        },
        Some("bfs") => RootedTree::bfs(g, root),
        Some("dfs") => RootedTree::dfs(g, root),
        Some("random") => {
            // Separate stream from the simulation's.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(1);
            RootedTree::random(g, root, &mut rng)
        }
        Some(file) => {
            let (tg, t) = io::parse_graph(&read(Path::new(file))?)?;
            let t = t.ok_or_else(|| Error::Malformed(format!("{file} carries no tree")))?;
            if tg != *g {
                return Err(Error::InvalidTree(format!("{file} describes a different graph")));
            }
            Ok(t)
        }
    }
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let (g, given) = io::parse_graph(&read(&a.input)?)?;
    let seed = a.seed.seed;
    let (tree, coloring): (Option<RootedTree>, Coloring) = match a.algo {
        Algo::TwiceDegree => {
            let r = if a.trace.is_some() {
                twice_degree_traced(&g, a.root)?
            } else {
                twice_degree(&g, a.root)?
            };
            if !is_t_pseudo_schedule(&g, &r.tree, &r.coloring)? {
                return Err(Failure::Verification("twice-degree output is not a T-pseudo-schedule".into()));
            }
            if let (Some(path), Some(steps)) = (&a.trace, &r.trace) {
                let text = serde_json::to_string_pretty(steps).map_err(Error::from)? + "\n";
                fs::write(path, text).map_err(Error::from)?;
            }
            (Some(r.tree), r.coloring)
        }
        Algo::Dband => {
            let t = choose_tree(&g, given, a.tree.as_deref(), a.root, seed)?;
            let d = match a.d.as_str() {
                "auto" => min_valid_d(&g, &t)?,
                s => s
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("--d must be an integer or auto, got {s:?}")))?,
            };
            let mut config = SimConfig::seeded(seed);
            config.interleaving = a.interleaving;
            config.budget = a.budget;
            config.trace = a.trace.is_some();
            let run = run_dband(&g, &t, d, &config)?;
            if !is_t_pseudo_schedule(&g, &t, &run.coloring)? {
                return Err(Failure::Verification("d-band output is not a T-pseudo-schedule".into()));
            }
            if let Some(path) = &a.trace {
                let mut buf = Vec::new();
                write_trace(&run.trace, &mut buf)?;
                fs::write(path, buf).map_err(Error::from)?;
            }
            eprintln!("d = {d}, {} messages", run.stats.delivered);
            (Some(t), run.coloring)
        }
        Algo::GreedyStrict => {
            let r = match &a.order {
                Some(path) => {
                    let order: Vec<Vertex> = serde_json::from_slice(&read(path)?).map_err(Error::from)?;
                    greedy_strict(&g, &order)?
                }
                None => greedy_strict_by_id(&g)?,
            };
            if !is_strict_schedule(&g, &r.coloring)? {
                return Err(Failure::Verification("greedy output is not a strict schedule".into()));
            }
            (None, r.coloring)
        }
    };
    if let (Some(path), Some(t)) = (&a.tree_out, &tree) {
        fs::write(path, io::serialize_graph(&g, Some(t)) + "\n").map_err(Error::from)?;
    }
    emit(a.out.as_deref(), &(io::serialize_coloring(&coloring) + "\n"))?;
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let (g, given) = io::parse_graph(&read(&a.input)?)?;
    let c = io::parse_coloring(&read(&a.schedule)?)?;
    c.ensure_len(g.n())?;
    let tree = match &a.tree {
        Some(path) => Some(choose_tree(&g, None, path.to_str(), 0, 0)?),
        None => given,
    };
    let v = verdict(&g, tree.as_ref(), &c)?;
    println!("{}", serde_json::to_string(&v).map_err(Error::from)?);
    if !v.pseudo || v.t_pseudo == Some(false) {
        return Err(Failure::Verification("schedule is not a pseudo-schedule".into()));
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let seed = a.seed.seed;
    let specs: Vec<GraphSpec> = standard_suite(seed)
        .into_iter()
        .filter(|s| {
            matches!(
                (a.family, s),
                (Family::All, _)
                    | (Family::Path, GraphSpec::Path { .. })
                    | (Family::Star, GraphSpec::Star { .. })
                    | (Family::Grid, GraphSpec::Grid { .. })
                    | (Family::Gnp, GraphSpec::RandomGnp { .. })
                    | (Family::Geometric, GraphSpec::RandomGeometric { .. })
                    | (Family::Gadget, GraphSpec::CycleGadget { .. })
            )
        })
        .collect();
    let algorithms = if a.algo.is_empty() {
        Algorithm::ALL.to_vec()
    } else {
        a.algo
            .iter()
            .map(|algo| match algo {
                Algo::TwiceDegree => Algorithm::TwiceDegree,
                Algo::Dband => Algorithm::Dband,
                Algo::GreedyStrict => Algorithm::GreedyStrict,
            })
            .collect()
    };
    let opts = BenchOptions {
        algorithms,
        seed,
        d: a.d,
        timing: a.timing,
    };
    let report = run_bench(&specs, &opts)?;
    if let Some(path) = &a.json {
        fs::write(path, report.to_json()?).map_err(Error::from)?;
    }
    print!("{}", report.to_table());
    Ok(())
}

#[derive(Serialize)]
struct TraceSummary {
    deliveries: u64,
    histogram: BTreeMap<String, u64>,
    cycle_breaks: Vec<BreakEntry>,
    /// Vertex, color and the step at which it was colored.
    colored: Vec<ColoredEntry>,
}

#[derive(Serialize)]
struct BreakEntry {
    step: u64,
    vertex: Vertex,
    #[serde(rename = "type")]
    break_type: String,
}

#[derive(Serialize)]
struct ColoredEntry {
    step: u64,
    vertex: Vertex,
    color: u32,
}

fn summarize(text: &str) -> Result<TraceSummary, Error> {
    let mut summary = TraceSummary {
        deliveries: 0,
        histogram: MessageKind::ALL.iter().map(|k| (k.name().to_string(), 0)).collect(),
        cycle_breaks: Vec::new(),
        colored: Vec::new(),
    };
    // A twice-degree trace is a JSON array of coloring steps.
    if text.trim_start().starts_with('[') {
        summary.histogram.clear();
        let steps: Vec<TraceStep> = serde_json::from_str(text)?;
        for (i, s) in steps.iter().enumerate() {
            summary.colored.push(ColoredEntry {
                step: i as u64,
                vertex: s.vertex,
                color: s.color,
            });
        }
        return Ok(summary);
    }
    for record in read_trace(text)? {
        match record {
            TraceRecord::Delivery { kind, .. } => {
                summary.deliveries += 1;
                *summary.histogram.entry(kind.name().to_string()).or_default() += 1;
            }
            TraceRecord::Event {
                step,
                event: EventKind::CycleBreak,
                vertex,
                break_type,
                ..
            } => summary.cycle_breaks.push(BreakEntry {
                step,
                vertex,
                break_type: break_type.map_or_else(|| "?".into(), |t| t.to_string()),
            }),
            TraceRecord::Event {
                step,
                event: EventKind::Colored,
                vertex,
                color,
                ..
            } => summary.colored.push(ColoredEntry {
                step,
                vertex,
                color: color.ok_or_else(|| Error::Malformed(format!("colored event for {vertex} has no color")))?,
            }),
        }
    }
    Ok(summary)
}

fn cmd_trace_inspect(a: TraceInspectArgs) -> CmdResult {
    let bytes = read(&a.trace)?;
    let text = String::from_utf8(bytes).map_err(|e| Error::Malformed(e.to_string()))?;
    let s = summarize(&text)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&s).map_err(Error::from)?);
        return Ok(());
    }
    println!("deliveries: {}", s.deliveries);
    for (kind, count) in &s.histogram {
        println!("  {kind:<8} {count}");
    }
    println!("cycle breaks: {}", s.cycle_breaks.len());
    for b in &s.cycle_breaks {
        println!("  step {:>6}  vertex {:>4}  type {}", b.step, b.vertex, b.break_type);
    }
    println!("colored: {}", s.colored.len());
    for c in &s.colored {
        println!("  step {:>6}  vertex {:>4}  color {}", c.step, c.vertex, c.color);
    }
    Ok(())
}

fn cmd_oracle(a: OracleArgs) -> CmdResult {
    if !a.min_pseudo {
        return Err(Error::InvalidParameter("--min-pseudo is required".into()).into());
    }
    let (g, _) = io::parse_graph(&read(&a.input)?)?;
    match exact_min_pseudo(&g, a.max_colors)? {
        Some(r) => {
            emit(a.out.as_deref(), &(io::serialize_coloring(&r.coloring) + "\n"))?;
            eprintln!("minimum: {} colors", r.colors_used_max);
            Ok(())
        }
        None => Err(Failure::Verification(format!(
            "no pseudo-schedule with at most {} colors",
            a.max_colors
        ))),
    }
}
