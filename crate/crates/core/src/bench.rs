//! Bound-checking benchmark: runs the algorithms over generator families and
//! tabulates color counts next to the linear and quadratic envelopes.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::greedy_strict_by_id;
use crate::coloring::{Color, Coloring};
use crate::dband::{check_color_bounds, run_dband, BoundsVerdict, SimConfig};
use crate::error::{Error, Result};
use crate::generate::{self, CycleType, GraphSpec};
use crate::tree::{min_valid_d, RootedTree};
use crate::twice_degree::twice_degree;
use crate::verify::{is_strict_schedule, is_t_pseudo_schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    TwiceDegree,
    Dband,
    GreedyStrict,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::TwiceDegree, Algorithm::Dband, Algorithm::GreedyStrict];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::TwiceDegree => "twice-degree",
            Algorithm::Dband => "dband",
            Algorithm::GreedyStrict => "greedy-strict",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchOptions {
    pub algorithms: Vec<Algorithm>,
    /// Simulation seed for d-band rows.
    pub seed: u64,
    /// Band count for d-band rows; `None` picks the least valid one.
    pub d: Option<usize>,
    /// Record wall time per row. Off by default so reports are reproducible.
    pub timing: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            algorithms: Algorithm::ALL.to_vec(),
            seed: 0,
            d: None,
            timing: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub generator: GraphSpec,
    pub algorithm: Algorithm,
    pub n: usize,
    pub root: usize,
    pub d: Option<usize>,
    pub delta_g: usize,
    pub delta_t: usize,
    pub height: usize,
    /// Largest color as assigned (twice-degree colors from 1, the others
    /// from 0).
    pub max_color: Color,
    /// Largest color plus one.
    pub h_max: u32,
    pub h_distinct: usize,
    /// `2Δ_G`.
    pub envelope_twice_degree: u64,
    /// `2d(Δ_G - 1)`, d-band rows only.
    pub envelope_dband: Option<u64>,
    /// `Δ_G² + 1`.
    pub envelope_strict: u64,
    /// The algorithm stays within its own envelope: twice-degree max color
    /// against `2Δ_G`, d-band `h_max` against `2d(Δ_G - 1)` where the bound
    /// applies, greedy `h_max` against `Δ_G² + 1`.
    pub within_envelope: bool,
    pub bounds: Option<BoundsVerdict>,
    pub messages: Option<u64>,
    pub breaks_request: Option<u64>,
    pub breaks_put: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_us: Option<u64>,
}

impl BenchRow {
    fn key(&self) -> (&str, Algorithm) {
        (&self.instance, self.algorithm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Plain-text table, one line per row.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<24} {:<13} {:>4} {:>3} {:>4} {:>4} {:>4} {:>5} {:>5} {:>6} {:>6} {:>6} {:>5} {:>8} {:>6}",
            "instance", "algorithm", "n", "d", "dG", "dT", "ht", "maxc", "hmax", "2dG", "2d(dG-1)", "dG^2+1", "ok", "msgs", "breaks"
        );
        for r in &self.rows {
            let opt = |v: Option<u64>| v.map_or_else(|| "-".to_string(), |v| v.to_string());
            let ok = match &r.bounds {
                Some(b) if b.applicable && !b.lower_ok => "yes*",
                _ if r.within_envelope => "yes",
                _ => "no",
            };
            let breaks = r.breaks_request.zip(r.breaks_put).map(|(a, b)| a + b);
            let _ = writeln!(
                out,
                "{:<24} {:<13} {:>4} {:>3} {:>4} {:>4} {:>4} {:>5} {:>5} {:>6} {:>6} {:>6} {:>5} {:>8} {:>6}",
                r.instance,
                r.algorithm.name(),
                r.n,
                opt(r.d.map(|d| d as u64)),
                r.delta_g,
                r.delta_t,
                r.height,
                r.max_color,
                r.h_max,
                r.envelope_twice_degree,
                opt(r.envelope_dband),
                r.envelope_strict,
                ok,
                opt(r.messages),
                opt(breaks),
            );
        }
        out.push_str("* below the d-band lower bound\n");
        out
    }
}

/// Paths, stars, square grids 2x2 to 12x12, connected gnp and geometric
/// graphs with 8 to 64 vertices, and the cycle gadgets.
pub fn standard_suite(seed: u64) -> Vec<GraphSpec> {
    let mut specs = Vec::new();
    for n in [2, 4, 8, 16, 32] {
        specs.push(GraphSpec::Path { n });
    }
    for leaves in [2, 4, 6, 8, 10, 12] {
        specs.push(GraphSpec::Star { leaves });
    }
    for side in 2..=12 {
        specs.push(GraphSpec::Grid { rows: side, cols: side });
    }
    for (i, n) in [8usize, 16, 32, 64].into_iter().enumerate() {
        let p = (3.0 * (n as f64).ln() / n as f64).min(0.9);
        for s in 0..3 {
            specs.push(GraphSpec::RandomGnp {
                n,
                p,
                seed: seed.wrapping_add((i * 3 + s) as u64),
            });
            specs.push(GraphSpec::RandomGeometric {
                n,
                radius: (2.0 * (n as f64).ln() / n as f64).sqrt().min(1.0),
                seed: seed.wrapping_add((i * 3 + s) as u64),
            });
        }
    }
    for k in 2..=6 {
        for cycle_type in [CycleType::Request, CycleType::Put, CycleType::Mixed] {
            specs.push(GraphSpec::CycleGadget { k, cycle_type });
        }
    }
    specs
}

/// Runs every algorithm in `opts` on every spec, in parallel. Rows are
/// sorted by instance label and algorithm. Every schedule is re-verified
/// first; a failure aborts the whole run.
pub fn run_bench(specs: &[GraphSpec], opts: &BenchOptions) -> Result<BenchReport> {
    let jobs: Vec<_> = specs
        .iter()
        .flat_map(|s| opts.algorithms.iter().map(move |&a| (s, a)))
        .collect();
    let mut rows = jobs
        .into_par_iter()
        .map(|(spec, algorithm)| bench_one(spec, algorithm, opts))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(BenchReport { seed: opts.seed, rows })
}

pub fn bench_one(spec: &GraphSpec, algorithm: Algorithm, opts: &BenchOptions) -> Result<BenchRow> {
    let generated = generate::generate(spec)?;
    let g = &generated.graph;
    let root = generated.tree.as_ref().map_or(0, RootedTree::root);
    let started = Instant::now();
    let instance = spec.label();
    let fail = |what: &str| Error::VerificationFailed(format!("{instance} {algorithm}: {what}"));

    let mut d = None;
    let mut bounds = None;
    let (mut messages, mut breaks_request, mut breaks_put) = (None, None, None);
    let (tree, coloring): (Option<RootedTree>, Coloring) = match algorithm {
        Algorithm::TwiceDegree => {
            let r = twice_degree(g, root)?;
            if !is_t_pseudo_schedule(g, &r.tree, &r.coloring)? {
                return Err(fail("not a T-pseudo-schedule"));
            }
            (Some(r.tree), r.coloring)
        }
        Algorithm::Dband => {
            let t = match &generated.tree {
                Some(t) => t.clone(),
                None => RootedTree::bfs(g, root)?,
            };
            let bands = match opts.d {
                Some(d) => d,
                None => min_valid_d(g, &t)?,
            };
            let run = run_dband(g, &t, bands, &SimConfig::seeded(opts.seed))?;
            if !is_t_pseudo_schedule(g, &t, &run.coloring)? {
                return Err(fail("not a T-pseudo-schedule"));
            }
            d = Some(bands);
            bounds = Some(check_color_bounds(g, &t, bands, &run.coloring)?);
            messages = Some(run.stats.delivered);
            breaks_request = Some(run.stats.breaks_request);
            breaks_put = Some(run.stats.breaks_put);
            (Some(t), run.coloring)
        }
        Algorithm::GreedyStrict => {
            let r = greedy_strict_by_id(g)?;
            if !is_strict_schedule(g, &r.coloring)? {
                return Err(fail("not a strict schedule"));
            }
            (None, r.coloring)
        }
    };
    let wall_us = opts.timing.then(|| started.elapsed().as_micros() as u64);

    let delta_g = g.max_degree() as u64;
    let max_color = coloring.max_color().unwrap_or(0);
    let h_max = coloring.colors_used_max();
    let envelope_twice_degree = 2 * delta_g;
    let envelope_dband = d.map(|d| 2 * d as u64 * delta_g.saturating_sub(1));
    let envelope_strict = delta_g * delta_g + 1;
    let within_envelope = match algorithm {
        Algorithm::TwiceDegree => u64::from(max_color) <= envelope_twice_degree.max(1),
        Algorithm::Dband => bounds.as_ref().is_none_or(|b| !b.applicable || b.upper_ok),
        Algorithm::GreedyStrict => u64::from(h_max) <= envelope_strict,
    };
    Ok(BenchRow {
        instance,
        generator: spec.clone(),
        algorithm,
        n: g.n(),
        root,
        d,
        delta_g: g.max_degree(),
        delta_t: tree.as_ref().map_or(0, RootedTree::max_degree),
        height: tree.as_ref().map_or(0, RootedTree::height),
        max_color,
        h_max,
        h_distinct: coloring.colors_used_distinct(),
        envelope_twice_degree,
        envelope_dband,
        envelope_strict,
        within_envelope,
        bounds,
        messages,
        breaks_request,
        breaks_put,
        wall_us,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_row_matches_the_bounds() {
        let opts = BenchOptions {
            algorithms: vec![Algorithm::Dband],
            d: Some(2),
            ..BenchOptions::default()
        };
        let row = bench_one(&GraphSpec::Star { leaves: 10 }, Algorithm::Dband, &opts).unwrap();
        assert_eq!(row.h_max, 20);
        let b = row.bounds.unwrap();
        assert_eq!((b.lower, b.upper), (19, 36));
        assert!(b.passed() && row.within_envelope);
    }

    #[test]
    fn report_is_sorted_and_reproducible() {
        let specs = [GraphSpec::Grid { rows: 3, cols: 3 }, GraphSpec::Path { n: 5 }];
        let a = run_bench(&specs, &BenchOptions::default()).unwrap();
        let b = run_bench(&specs, &BenchOptions::default()).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert_eq!(a.rows.len(), 6);
        assert!(a.rows.windows(2).all(|w| w[0].key() <= w[1].key()));
        assert!(a.to_table().lines().count() == 8);
    }
}
