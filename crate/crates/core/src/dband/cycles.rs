//! Static dependency analysis.
//!
//! `v` has a request dependence on `u` when `u` is the parent of a stepchild
//! of `v`: `v` cannot request a color before `u` has one. A child `c` of `p`
//! has a put dependence on every stepchild `s` of `p`: `p` cannot assign `c`
//! before `s` is colored. Directed cycles of these relations are what the
//! protocol has to break at run time.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::generate::CycleType;
use crate::graph::{Graph, Vertex};
use crate::tree::{Kinship, RootedTree};

/// Enumeration stops after this many cycles.
pub const DEFAULT_CYCLE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyCycle {
    /// Starts at the least vertex; each vertex depends on the next.
    pub vertices: Vec<Vertex>,
    pub cycle_type: CycleType,
    pub level: usize,
}

impl DependencyCycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn min_vertex(&self) -> Vertex {
        self.vertices[0]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Labels {
    request: bool,
    put: bool,
}

fn dependence(g: &Graph, t: &RootedTree) -> Result<BTreeMap<(Vertex, Vertex), Labels>> {
    let kin = Kinship::new(g, t)?;
    let mut edges: BTreeMap<(Vertex, Vertex), Labels> = BTreeMap::new();
    for v in 0..g.n() {
        for &x in kin.stepchildren(v) {
            edges.entry((v, t.parent(x))).or_default().request = true;
            for &c in kin.children(v) {
                edges.entry((c, x)).or_default().put = true;
            }
        }
    }
    Ok(edges)
}

/// All dependency cycles, up to [`DEFAULT_CYCLE_CAP`].
pub fn find_dependency_cycles(g: &Graph, t: &RootedTree) -> Result<Vec<DependencyCycle>> {
    Ok(find_dependency_cycles_capped(g, t, DEFAULT_CYCLE_CAP)?.0)
}

/// Dependency cycles, at most `cap` of them; the flag reports truncation.
/// A cycle whose every edge is both a request and a put dependence is
/// reported as a request cycle.
pub fn find_dependency_cycles_capped(
    g: &Graph,
    t: &RootedTree,
    cap: usize,
) -> Result<(Vec<DependencyCycle>, bool)> {
    let labels = dependence(g, t)?;
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in labels.keys() {
        adj[u].push(v);
    }
    let (raw, truncated) = simple_cycles(&adj, cap);
    let cycles = raw
        .into_iter()
        .map(|vertices| {
            let k = vertices.len();
            let steps = (0..k).map(|i| labels[&(vertices[i], vertices[(i + 1) % k])]);
            let (all_request, all_put) = steps.fold((true, true), |(r, p), l| (r && l.request, p && l.put));
            let cycle_type = match (all_request, all_put) {
                (true, _) => CycleType::Request,
                (false, true) => CycleType::Put,
                (false, false) => CycleType::Mixed,
            };
            let level = t.level(vertices[0]);
            debug_assert!(vertices.iter().all(|&v| t.level(v) == level));
            DependencyCycle {
                vertices,
                cycle_type,
                level,
            }
        })
        .collect();
    Ok((cycles, truncated))
}

/// Johnson's elementary circuit enumeration. Each cycle is reported once,
/// rotated to start at its least vertex.
fn simple_cycles(adj: &[Vec<Vertex>], cap: usize) -> (Vec<Vec<Vertex>>, bool) {
    let n = adj.len();
    let mut radj = vec![Vec::new(); n];
    for (u, outs) in adj.iter().enumerate() {
        for &v in outs {
            radj[v].push(u);
        }
    }
    let mut state = Johnson {
        adj,
        in_component: vec![false; n],
        blocked: vec![false; n],
        blockers: vec![Vec::new(); n],
        stack: Vec::new(),
        found: Vec::new(),
        cap,
        truncated: false,
    };
    for s in 0..n {
        let forward = reach(adj, s);
        let backward = reach(&radj, s);
        let mut nontrivial = false;
        for v in 0..n {
            state.in_component[v] = forward[v] && backward[v] && v >= s;
            nontrivial |= state.in_component[v] && v != s;
        }
        if !nontrivial {
            continue;
        }
        for v in 0..n {
            state.blocked[v] = false;
            state.blockers[v].clear();
        }
        state.circuit(s, s);
        if state.truncated {
            break;
        }
    }
    (state.found, state.truncated)
}

fn reach(adj: &[Vec<Vertex>], s: Vertex) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if v >= s && !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

struct Johnson<'a> {
    adj: &'a [Vec<Vertex>],
    in_component: Vec<bool>,
    blocked: Vec<bool>,
    blockers: Vec<Vec<Vertex>>,
    stack: Vec<Vertex>,
    found: Vec<Vec<Vertex>>,
    cap: usize,
    truncated: bool,
}

impl Johnson<'_> {
    fn circuit(&mut self, v: Vertex, s: Vertex) -> bool {
        let mut closed = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in &self.adj[v] {
            if !self.in_component[w] || self.truncated {
                continue;
            }
            if w == s {
                if self.found.len() >= self.cap {
                    self.truncated = true;
                    break;
                }
                self.found.push(self.stack.clone());
                closed = true;
            } else if !self.blocked[w] && self.circuit(w, s) {
                closed = true;
            }
        }
        if closed {
            self.unblock(v);
        } else {
            for &w in &self.adj[v] {
                if self.in_component[w] && !self.blockers[w].contains(&v) {
                    self.blockers[w].push(v);
                }
            }
        }
        self.stack.pop();
        closed
    }

    fn unblock(&mut self, u: Vertex) {
        let mut pending = vec![u];
        while let Some(u) = pending.pop() {
            self.blocked[u] = false;
            for w in std::mem::take(&mut self.blockers[u]) {
                if self.blocked[w] {
                    pending.push(w);
                }
            }
        }
    }
}
