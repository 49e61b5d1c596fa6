//! Verifiers for the schedule classes, and a brute-force oracle.
//!
//! An ordered pair `(u, v)` is nonconflicting when `u` and `v` are adjacent,
//! differently colored, and no other neighbor of `v` shares `u`'s color:
//! `v` hears `u`'s broadcast without interference. All checks require a
//! total coloring.

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::tree::RootedTree;

/// Largest graph the path-enumerating oracle accepts.
pub const ORACLE_MAX_N: usize = 10;

fn total_colors(g: &Graph, c: &Coloring) -> Result<Vec<Color>> {
    c.ensure_len(g.n())?;
    c.ensure_total()?;
    Ok(c.as_slice().iter().map(|x| x.unwrap_or_default()).collect())
}

fn pair_ok(g: &Graph, col: &[Color], u: Vertex, v: Vertex) -> bool {
    u != v
        && g.has_edge(u, v)
        && col[u] != col[v]
        && g.neighbors(v).iter().all(|&x| x == u || col[x] != col[u])
}

/// Whether `v` receives `u`'s broadcast without conflict. Direction matters.
pub fn is_nonconflicting_pair(g: &Graph, c: &Coloring, u: Vertex, v: Vertex) -> Result<bool> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let col = total_colors(g, c)?;
    Ok(pair_ok(g, &col, u, v))
}

/// Whether every consecutive ordered pair of `path` is nonconflicting.
pub fn is_nonconflicting_path(g: &Graph, c: &Coloring, path: &[Vertex]) -> Result<bool> {
    if path.is_empty() {
        return Err(Error::NotAPath("empty sequence".into()));
    }
    for &v in path {
        g.check_vertex(v)?;
    }
    if let Some(w) = path.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
        return Err(Error::NotAPath(format!("{} and {} are not adjacent", w[0], w[1])));
    }
    let col = total_colors(g, c)?;
    Ok(path.windows(2).all(|w| pair_ok(g, &col, w[0], w[1])))
}

/// Both `(u, v)` and `(v, u)` are nonconflicting.
pub fn is_bidirectional_edge(g: &Graph, c: &Coloring, u: Vertex, v: Vertex) -> Result<bool> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    let col = total_colors(g, c)?;
    Ok(pair_ok(g, &col, u, v) && pair_ok(g, &col, v, u))
}

/// Every ordered pair of adjacent vertices is nonconflicting; equivalently a
/// distance-2 coloring.
pub fn is_strict_schedule(g: &Graph, c: &Coloring) -> Result<bool> {
    let col = total_colors(g, c)?;
    Ok(g.edges().all(|(u, v)| pair_ok(g, &col, u, v) && pair_ok(g, &col, v, u)))
}

/// Every ordered pair of vertices is joined by a nonconflicting directed
/// path. Decided as strong connectivity of the nonconflict digraph.
pub fn is_pseudo_schedule(g: &Graph, c: &Coloring) -> Result<bool> {
    let col = total_colors(g, c)?;
    let n = g.n();
    if n <= 1 {
        return Ok(true);
    }
    let mut out = vec![Vec::new(); n];
    let mut inc = vec![Vec::new(); n];
    for (u, v) in g.edges() {
        for (a, b) in [(u, v), (v, u)] {
            if pair_ok(g, &col, a, b) {
                out[a].push(b);
                inc[b].push(a);
            }
        }
    }
    Ok(reaches_all(&out, 0) && reaches_all(&inc, 0))
}

fn reaches_all(arcs: &[Vec<Vertex>], from: Vertex) -> bool {
    let mut seen = vec![false; arcs.len()];
    seen[from] = true;
    let mut stack = vec![from];
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &x in &arcs[v] {
            if !seen[x] {
                seen[x] = true;
                count += 1;
                stack.push(x);
            }
        }
    }
    count == arcs.len()
}

/// Every edge of the spanning tree `t` is bidirectional.
pub fn is_t_pseudo_schedule(g: &Graph, t: &RootedTree, c: &Coloring) -> Result<bool> {
    t.check_spans(g)?;
    let col = total_colors(g, c)?;
    Ok(t.edges().all(|(p, v)| pair_ok(g, &col, p, v) && pair_ok(g, &col, v, p)))
}

/// Decides pseudo-schedule-hood by enumerating simple directed paths for
/// every ordered pair. Independent of the digraph construction used by
/// [`is_pseudo_schedule`]; only for `n <= ORACLE_MAX_N`.
pub fn oracle_pseudo_check(g: &Graph, c: &Coloring) -> Result<bool> {
    if g.n() > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: ORACLE_MAX_N,
        });
    }
    total_colors(g, c)?;
    let n = g.n();
    for u in 0..n {
        for v in 0..n {
            if u != v && !nonconflicting_path_exists(g, c, u, v)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn nonconflicting_path_exists(g: &Graph, c: &Coloring, from: Vertex, to: Vertex) -> Result<bool> {
    fn extend(g: &Graph, c: &Coloring, path: &mut Vec<Vertex>, to: Vertex) -> Result<bool> {
        let last = *path.last().expect("path is never empty");
        for &x in g.neighbors(last) {
            if path.contains(&x) {
                continue;
            }
            path.push(x);
            let found = is_nonconflicting_path(g, c, path)?
                && (x == to || extend(g, c, path, to)?);
            path.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
    extend(g, c, &mut vec![from], to)
}

/// Machine-readable verdict printed by the `verify` subcommand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub strict: bool,
    pub pseudo: bool,
    pub t_pseudo: Option<bool>,
    pub h_max: u32,
    pub h_distinct: usize,
}

pub fn verdict(g: &Graph, t: Option<&RootedTree>, c: &Coloring) -> Result<Verdict> {
    Ok(Verdict {
        strict: is_strict_schedule(g, c)?,
        pseudo: is_pseudo_schedule(g, c)?,
        t_pseudo: t.map(|t| is_t_pseudo_schedule(g, t, c)).transpose()?,
        h_max: c.colors_used_max(),
        h_distinct: c.colors_used_distinct(),
    })
}
