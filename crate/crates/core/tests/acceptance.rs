//! Acceptance criteria, run at zero tolerance. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pseudosched::baselines::{greedy_strict, greedy_strict_by_id};
use pseudosched::bench::{run_bench, standard_suite, Algorithm, BenchOptions};
use pseudosched::dband::sim::write_trace;
use pseudosched::dband::{check_color_bounds, run_dband, SimConfig};
use pseudosched::generate::{self, CycleType, GraphSpec};
use pseudosched::tree::min_valid_d;
use pseudosched::twice_degree::{twice_degree, verify_twice_degree_bound};
use pseudosched::verify::{is_pseudo_schedule, is_strict_schedule, is_t_pseudo_schedule, oracle_pseudo_check};
use pseudosched::{Coloring, Graph, RootedTree};

const SIM_SEEDS: u64 = 100;
const RANDOM_TREES: usize = 5;
const SAMPLES: usize = 10_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Paths, stars, grids up to 12x12, 20 connected gnp graphs for each size up
/// to 64, and geometric graphs up to 64 vertices.
fn base_suite() -> Vec<(String, Graph)> {
    let mut suite = Vec::new();
    for n in [2, 3, 4, 5, 8, 16, 32, 64] {
        suite.push((format!("path-{n}"), generate::path(n).unwrap()));
    }
    for leaves in [1, 2, 3, 5, 8, 12, 20] {
        suite.push((format!("star-{leaves}"), generate::star(leaves).unwrap()));
    }
    for rows in 2..=12 {
        for cols in rows..=12 {
            suite.push((format!("grid-{rows}x{cols}"), generate::grid(rows, cols).unwrap()));
        }
    }
    for n in [8usize, 16, 32, 64] {
        let p = (3.0 * (n as f64).ln() / n as f64).min(0.9);
        for seed in 0..20 {
            suite.push((format!("gnp-{n}-s{seed}"), generate::gnp(n, p, seed).unwrap()));
        }
        let radius = (2.0 * (n as f64).ln() / n as f64).sqrt().min(1.0);
        for seed in 0..5 {
            suite.push((format!("geo-{n}-s{seed}"), generate::geometric(n, radius, seed).unwrap()));
        }
    }
    suite
}

fn gadgets() -> Vec<(String, Graph, RootedTree)> {
    let mut out = Vec::new();
    for k in 2..=6 {
        for ty in [CycleType::Request, CycleType::Put, CycleType::Mixed] {
            let g = generate::cycle_gadget(k, ty).unwrap();
            out.push((format!("gadget-{ty}-{k}"), g.graph, g.tree.unwrap()));
        }
    }
    out
}

fn criterion_1(suite: &[(String, Graph)]) -> Outcome {
    let failures: Vec<String> = suite
        .par_iter()
        .flat_map_iter(|(name, g)| {
            (0..g.n()).filter_map(move |root| {
                let ok = twice_degree(g, root)
                    .and_then(|r| verify_twice_degree_bound(g, &r))
                    .unwrap_or(false);
                (!ok).then(|| format!("{name} root {root}"))
            })
        })
        .collect();
    let roots: usize = suite.iter().map(|(_, g)| g.n()).sum();
    outcome(
        failures.is_empty(),
        format!("{roots} roots, {} failures{}", failures.len(), first(&failures)),
    )
}

/// Per-run findings of the d-band sweep.
#[derive(Default)]
struct Sweep {
    runs: usize,
    not_terminated: Vec<String>,
    not_t_pseudo: Vec<String>,
    bfs_d_above_3: Vec<String>,
    applicable: usize,
    lower_fail: Vec<String>,
    upper_fail: Vec<String>,
    palette_fail: Vec<String>,
}

impl Sweep {
    fn merge(mut self, other: Sweep) -> Sweep {
        self.runs += other.runs;
        self.applicable += other.applicable;
        self.not_terminated.extend(other.not_terminated);
        self.not_t_pseudo.extend(other.not_t_pseudo);
        self.bfs_d_above_3.extend(other.bfs_d_above_3);
        self.lower_fail.extend(other.lower_fail);
        self.upper_fail.extend(other.upper_fail);
        self.palette_fail.extend(other.palette_fail);
        self
    }
}

fn sweep_instance(name: &str, g: &Graph, t: &RootedTree, d: usize) -> Sweep {
    let mut s = Sweep::default();
    for seed in 0..SIM_SEEDS {
        s.runs += 1;
        let tag = || format!("{name} root {} d={d} seed={seed}", t.root());
        let run = match run_dband(g, t, d, &SimConfig::seeded(seed)) {
            Ok(run) => run,
            Err(e) => {
                s.not_terminated.push(format!("{} ({e})", tag()));
                continue;
            }
        };
        if !is_t_pseudo_schedule(g, t, &run.coloring).unwrap() {
            s.not_t_pseudo.push(tag());
        }
        let bad_palette = (0..g.n()).any(|v| run.coloring.get(v).is_none_or(|c| c as usize % d != t.level(v) % d));
        if bad_palette {
            s.palette_fail.push(tag());
        }
        let b = check_color_bounds(g, t, d, &run.coloring).unwrap();
        if b.applicable {
            s.applicable += 1;
            if !b.lower_ok {
                s.lower_fail.push(format!("{} h={} lower={}", tag(), b.h, b.lower));
            }
            if !b.upper_ok {
                s.upper_fail.push(format!("{} h={} upper={}", tag(), b.h, b.upper));
            }
        }
    }
    s
}

/// Criteria 2 to 5 share one sweep: every suite graph and gadget, BFS, DFS
/// and random trees, the least valid d, 100 interleaving seeds each; plus
/// d = 3 on every BFS tree.
fn dband_sweep(suite: &[(String, Graph)]) -> Sweep {
    let mut instances: Vec<(String, Graph, RootedTree, Option<usize>)> = Vec::new();
    let mut add_trees = |name: &str, g: &Graph, extra: Option<RootedTree>| {
        let mut rng = ChaCha8Rng::seed_from_u64(g.n() as u64 ^ (g.edge_count() as u64) << 16);
        let bfs = RootedTree::bfs(g, 0).unwrap();
        instances.push((name.to_string(), g.clone(), bfs.clone(), None));
        instances.push((format!("{name} bfs"), g.clone(), bfs, Some(3)));
        instances.push((name.to_string(), g.clone(), RootedTree::dfs(g, 0).unwrap(), None));
        for _ in 0..RANDOM_TREES {
            let root = rng.gen_range(0..g.n());
            instances.push((name.to_string(), g.clone(), RootedTree::random(g, root, &mut rng).unwrap(), None));
        }
        if let Some(t) = extra {
            instances.push((name.to_string(), g.clone(), t, None));
        }
    };
    for (name, g) in suite {
        add_trees(name, g, None);
    }
    for (name, g, t) in gadgets() {
        add_trees(&name, &g, Some(t));
    }
    instances
        .par_iter()
        .map(|(name, g, t, fixed)| {
            let least = min_valid_d(g, t).unwrap();
            match fixed {
                Some(d) => {
                    let mut s = sweep_instance(name, g, t, *d);
                    if least > *d {
                        s.bfs_d_above_3.push(format!("{name} needs d={least}"));
                    }
                    s
                }
                None => sweep_instance(name, g, t, least),
            }
        })
        .reduce(Sweep::default, Sweep::merge)
}

fn first(items: &[String]) -> String {
    items.first().map_or_else(String::new, |s| format!("; first: {s}"))
}

fn random_connected(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    loop {
        let n = rng.gen_range(1..=max_n);
        let p = rng.gen_range(0.2..0.9);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

fn random_coloring(rng: &mut ChaCha8Rng, n: usize, colors: u32) -> Coloring {
    Coloring::from_total((0..n).map(|_| rng.gen_range(0..colors)).collect())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut disagreements = Vec::new();
    let mut positives = 0;
    for i in 0..SAMPLES {
        let g = random_connected(&mut rng, 6);
        let colors = rng.gen_range(1..=4);
        let c = random_coloring(&mut rng, g.n(), colors);
        let fast = is_pseudo_schedule(&g, &c).unwrap();
        let oracle = oracle_pseudo_check(&g, &c).unwrap();
        positives += usize::from(oracle);
        if fast != oracle {
            disagreements.push(format!("sample {i}: {:?} {:?}", g.edges().collect::<Vec<_>>(), c.as_slice()));
        }
    }
    outcome(
        disagreements.is_empty(),
        format!(
            "{SAMPLES} samples ({positives} pseudo), {} disagreements{}",
            disagreements.len(),
            first(&disagreements)
        ),
    )
}

fn criterion_7(suite: &[(String, Graph)]) -> Outcome {
    let mut failures = Vec::new();
    for (name, g) in suite {
        let r = greedy_strict_by_id(g).unwrap();
        let delta = g.max_degree() as u64;
        if !is_strict_schedule(g, &r.coloring).unwrap() || u64::from(r.colors_used_max) > delta * delta + 1 {
            failures.push(name.clone());
        }
    }
    // Half uniform colorings, half greedy colorings from random orders, so
    // that strict samples are plentiful.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut strict = 0;
    for i in 0..SAMPLES {
        let g = random_connected(&mut rng, 8);
        let c = if i % 2 == 0 {
            let colors = rng.gen_range(1..=4);
            random_coloring(&mut rng, g.n(), colors)
        } else {
            let mut order: Vec<_> = (0..g.n()).collect();
            for j in (1..order.len()).rev() {
                order.swap(j, rng.gen_range(0..=j));
            }
            greedy_strict(&g, &order).unwrap().coloring
        };
        if is_strict_schedule(&g, &c).unwrap() {
            strict += 1;
            if !is_pseudo_schedule(&g, &c).unwrap() {
                failures.push(format!("sample {i}: strict but not pseudo"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} suite graphs, {SAMPLES} samples ({strict} strict), {} failures{}",
            suite.len(),
            failures.len(),
            first(&failures)
        ),
    )
}

fn criterion_8() -> Outcome {
    let specs: Vec<_> = standard_suite(0)
        .into_iter()
        .filter(|s| matches!(s, GraphSpec::Grid { .. } | GraphSpec::RandomGnp { .. }))
        .collect();
    let opts = BenchOptions {
        algorithms: vec![Algorithm::TwiceDegree, Algorithm::Dband],
        ..BenchOptions::default()
    };
    let report = match run_bench(&specs, &opts) {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("bench failed: {e}")),
    };
    let mut failures = Vec::new();
    let mut max_ratio: f64 = 0.0;
    for row in &report.rows {
        let delta = row.delta_g as u64;
        let columns_ok = row.envelope_twice_degree == 2 * delta
            && row.envelope_strict == delta * delta + 1
            && (row.algorithm != Algorithm::Dband
                || row.envelope_dband == row.d.map(|d| 2 * d as u64 * delta.saturating_sub(1)));
        let within = match row.algorithm {
            Algorithm::TwiceDegree => u64::from(row.max_color) <= row.envelope_twice_degree,
            _ => u64::from(row.h_max) <= row.envelope_dband.unwrap_or(0),
        };
        if !columns_ok || !within || !row.within_envelope {
            failures.push(format!("{} {}", row.instance, row.algorithm));
        }
        max_ratio = max_ratio.max(f64::from(row.h_max) / row.envelope_strict as f64);
    }
    let deltas: Vec<u64> = report.rows.iter().map(|r| r.delta_g as u64).collect();
    let (lo, hi) = (deltas.iter().min().copied().unwrap_or(0), deltas.iter().max().copied().unwrap_or(0));
    outcome(
        failures.is_empty() && hi > lo,
        format!(
            "{} rows, Δ_G {lo}..{hi}, strict envelope {}..{}, {} over the linear envelope{}",
            report.rows.len(),
            lo * lo + 1,
            hi * hi + 1,
            failures.len(),
            first(&failures)
        ),
    )
}

fn run_cli(dir: &Path, args: &[&str]) -> bool {
    Command::new(env!("CARGO_BIN_EXE_pseudosched"))
        .current_dir(dir)
        .env_remove("PSEUDOSCHED_SEED")
        .args(args)
        .output()
        .is_ok_and(|o| o.status.success())
}

fn criterion_9() -> Outcome {
    let pipeline: &[&[&str]] = &[
        &["gen", "--kind", "gnp", "--n", "40", "--p", "0.15", "--seed", "9", "--out", "g.json"],
        &["solve", "--algo", "dband", "--tree", "random", "--seed", "5", "--in", "g.json", "--out", "dband.json", "--trace", "dband.jsonl"],
        &["solve", "--algo", "twice-degree", "--root", "3", "--in", "g.json", "--out", "td.json", "--trace", "td.json.trace"],
        &["bench", "--family", "gadget", "--seed", "4", "--json", "bench.json"],
    ];
    let files = ["g.json", "dband.json", "dband.jsonl", "td.json", "td.json.trace", "bench.json"];
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for dir in &dirs {
        for args in pipeline {
            if !run_cli(dir.path(), args) {
                return outcome(false, format!("`{}` failed", args.join(" ")));
            }
        }
    }
    let mut differing: Vec<String> = files
        .iter()
        .filter(|f| std::fs::read(dirs[0].path().join(f)).ok() != std::fs::read(dirs[1].path().join(f)).ok())
        .map(|f| f.to_string())
        .collect();
    // Library level: same seed, same trace bytes, on every gadget.
    for (name, g, t) in gadgets() {
        let d = min_valid_d(&g, &t).unwrap();
        let traces: Vec<Vec<u8>> = (0..2)
            .map(|_| {
                let run = run_dband(&g, &t, d, &SimConfig::seeded(11).with_trace()).unwrap();
                let mut buf = Vec::new();
                write_trace(&run.trace, &mut buf).unwrap();
                buf
            })
            .collect();
        if traces[0] != traces[1] {
            differing.push(name);
        }
    }
    outcome(
        differing.is_empty(),
        format!("{} files and 15 gadget traces compared, {} differ{}", files.len(), differing.len(), first(&differing)),
    )
}

fn main() {
    let started = Instant::now();
    let suite = base_suite();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();

    results.push((1, "twice-degree is T-pseudo within 2Δ_G, every root", criterion_1(&suite)));
    let t = Instant::now();
    let sweep = dband_sweep(&suite);
    let sweep_secs = t.elapsed().as_secs_f64();
    results.push((
        2,
        "d-band terminates within budget",
        outcome(
            sweep.not_terminated.is_empty() && sweep_secs < 300.0,
            format!(
                "{} runs in {sweep_secs:.1}s, {} did not terminate{}",
                sweep.runs,
                sweep.not_terminated.len(),
                first(&sweep.not_terminated)
            ),
        ),
    ));
    results.push((
        3,
        "d-band runs are T-pseudo; d = 3 suffices on BFS trees",
        outcome(
            sweep.not_t_pseudo.is_empty() && sweep.bfs_d_above_3.is_empty(),
            format!(
                "{} not T-pseudo{}, {} BFS trees needing d > 3{}",
                sweep.not_t_pseudo.len(),
                first(&sweep.not_t_pseudo),
                sweep.bfs_d_above_3.len(),
                first(&sweep.bfs_d_above_3)
            ),
        ),
    ));
    results.push((
        4,
        "d-band color count within [d(Δ_T-1)+1, 2d(Δ_G-1)]",
        outcome(
            sweep.lower_fail.is_empty() && sweep.upper_fail.is_empty(),
            format!(
                "{} applicable runs, {} below the lower bound{}, {} above the upper bound{}",
                sweep.applicable,
                sweep.lower_fail.len(),
                first(&sweep.lower_fail),
                sweep.upper_fail.len(),
                first(&sweep.upper_fail)
            ),
        ),
    ));
    results.push((
        5,
        "palette discipline: color mod d = level mod d",
        outcome(
            sweep.palette_fail.is_empty(),
            format!("{} runs, {} violations{}", sweep.runs, sweep.palette_fail.len(), first(&sweep.palette_fail)),
        ),
    ));
    results.push((6, "pseudo-schedule verifier agrees with the oracle", criterion_6()));
    results.push((7, "greedy strict within Δ_G²+1; strict implies pseudo", criterion_7(&suite)));
    results.push((8, "linear envelopes hold on grid and gnp families", criterion_8()));
    results.push((9, "identical seeds give byte-identical files", criterion_9()));

    let mut failed = 0;
    for (i, what, o) in &results {
        failed += usize::from(!o.pass);
        println!("criterion {i}: {} - {what} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} passed in {:.1}s", results.len() - failed, results.len(), started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
