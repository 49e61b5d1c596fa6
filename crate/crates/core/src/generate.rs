//! Deterministic graph generators for tests and benchmarks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::tree::RootedTree;

/// Connectivity retry budget for the random generators.
pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CycleType {
    #[serde(rename = "I")]
    Request,
    #[serde(rename = "II")]
    Put,
    #[serde(rename = "mixed")]
    Mixed,
}

impl std::fmt::Display for CycleType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CycleType::Request => "I",
            CycleType::Put => "II",
            CycleType::Mixed => "mixed",
        })
    }
}

impl std::str::FromStr for CycleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" | "1" | "request" => Ok(CycleType::Request),
            "II" | "ii" | "2" | "put" => Ok(CycleType::Put),
            "mixed" | "m" => Ok(CycleType::Mixed),
            other => Err(Error::InvalidParameter(format!("unknown cycle type {other:?}"))),
        }
    }
}

/// Generator families and their parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphSpec {
    Path { n: usize },
    Star { leaves: usize },
    Grid { rows: usize, cols: usize },
    RandomGnp { n: usize, p: f64, seed: u64 },
    RandomGeometric { n: usize, radius: f64, seed: u64 },
    CycleGadget { k: usize, cycle_type: CycleType },
}

impl GraphSpec {
    /// Short stable label, used as a report key.
    pub fn label(&self) -> String {
        match self {
            GraphSpec::Path { n } => format!("path-{n}"),
            GraphSpec::Star { leaves } => format!("star-{leaves}"),
            GraphSpec::Grid { rows, cols } => format!("grid-{rows}x{cols}"),
            GraphSpec::RandomGnp { n, p, seed } => format!("gnp-{n}-{p:.3}-s{seed}"),
            GraphSpec::RandomGeometric { n, radius, seed } => format!("geo-{n}-{radius:.3}-s{seed}"),
            GraphSpec::CycleGadget { k, cycle_type } => format!("gadget-{cycle_type}-{k}"),
        }
    }
}

/// A generated graph, with a designated rooted tree for families that come
/// with one.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    pub tree: Option<RootedTree>,
}

pub fn generate(spec: &GraphSpec) -> Result<Generated> {
    let graph_only = |graph| Generated { graph, tree: None };
    match *spec {
        GraphSpec::Path { n } => path(n).map(graph_only),
        GraphSpec::Star { leaves } => star(leaves).map(graph_only),
        GraphSpec::Grid { rows, cols } => grid(rows, cols).map(graph_only),
        GraphSpec::RandomGnp { n, p, seed } => gnp(n, p, seed).map(graph_only),
        GraphSpec::RandomGeometric { n, radius, seed } => geometric(n, radius, seed).map(graph_only),
        GraphSpec::CycleGadget { k, cycle_type } => cycle_gadget(k, cycle_type),
    }
}

pub fn path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("path needs at least one vertex".into()));
    }
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n, &edges)
}

/// Center 0 with leaves `1..=leaves`.
pub fn star(leaves: usize) -> Result<Graph> {
    if leaves == 0 {
        return Err(Error::InvalidParameter("star needs at least one leaf".into()));
    }
    let edges: Vec<_> = (1..=leaves).map(|l| (0, l)).collect();
    Graph::from_edges(leaves + 1, &edges)
}

/// Row-major `rows x cols` grid.
pub fn grid(rows: usize, cols: usize) -> Result<Graph> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter("grid dimensions must be positive".into()));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                edges.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_edges(rows * cols, &edges)
}

/// Erdős–Rényi `G(n, p)`, resampled until connected.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("gnp needs n > 0 and p in [0, 1], got n={n}, p={p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Unachievable { attempts: MAX_ATTEMPTS })
}

/// Random geometric graph on the unit square, resampled until connected.
pub fn geometric(n: usize, radius: f64, seed: u64) -> Result<Graph> {
    if n == 0 || radius <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "geometric needs n > 0 and radius > 0, got n={n}, radius={radius}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r2 = radius * radius;
    for _ in 0..MAX_ATTEMPTS {
        let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                let (dx, dy) = (pts[u].0 - pts[v].0, pts[u].1 - pts[v].1);
                if dx * dx + dy * dy <= r2 {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Unachievable { attempts: MAX_ATTEMPTS })
}

/// A graph and rooted tree containing a dependency cycle of length `k` of
/// the requested type. Vertex 0 is the root.
///
/// * Request (type I): level-1 vertices `u_i = 1 + i`, each with a child
///   `c_i = 1 + k + i`, and a non-tree edge `c_i - u_{i+1}`, so that every
///   `u_{i+1}` waits for the color of `u_i`.
/// * Put (type II): the same scaffold with non-tree edges `u_i - c_{i+1}`, so
///   that every `c_i` waits, at its parent, for `c_{i+1}` to be colored.
/// * Mixed: level-2 vertices `a_i` (each under its own level-1 parent `p_i`)
///   linked alternately by request edges (via a level-3 child of `a_{i+1}`
///   adjacent to `a_i`) and put edges (`p_i - a_{i+1}`).
///
/// Every step-edge induces both a request and a put dependence one level
/// apart, so the request and put gadgets each also contain a cycle of the
/// other type on the adjacent level.
pub fn cycle_gadget(k: usize, cycle_type: CycleType) -> Result<Generated> {
    if k < 2 {
        return Err(Error::InvalidParameter("cycle gadget needs k >= 2".into()));
    }
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut parent: Vec<Vertex> = vec![0];
    let mut add_child = |p: Vertex, edges: &mut Vec<(Vertex, Vertex)>| {
        let v = parent.len();
        parent.push(p);
        edges.push((p, v));
        v
    };
    match cycle_type {
        CycleType::Request | CycleType::Put => {
            let u: Vec<_> = (0..k).map(|_| add_child(0, &mut edges)).collect();
            let c: Vec<_> = (0..k).map(|i| add_child(u[i], &mut edges)).collect();
            for i in 0..k {
                let j = (i + 1) % k;
                edges.push(match cycle_type {
                    CycleType::Request => (u[j], c[i]),
                    _ => (u[i], c[j]),
                });
            }
        }
        CycleType::Mixed => {
            let p: Vec<_> = (0..k).map(|_| add_child(0, &mut edges)).collect();
            let a: Vec<_> = (0..k).map(|i| add_child(p[i], &mut edges)).collect();
            for i in 0..k {
                let j = (i + 1) % k;
                if i % 2 == 0 {
                    let x = add_child(a[j], &mut edges);
                    edges.push((a[i], x));
                } else {
                    edges.push((p[i], a[j]));
                }
            }
        }
    }
    let n = parent.len();
    let graph = Graph::from_edges(n, &edges)?;
    let tree = RootedTree::from_parents(&graph, 0, parent)?;
    Ok(Generated {
        graph,
        tree: Some(tree),
    })
}
