//! Centralized twice-degree pseudo-scheduling.
//!
//! Builds a breadth-first spanning tree and colors vertices level by level
//! with 1-based colors. The result is a T-pseudo-schedule for the internal
//! tree and uses at most `2Δ` colors.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, Coloring};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::tree::RootedTree;
use crate::verify;

/// One coloring step: the vertex, its forbidden set at coloring time and the
/// color chosen.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub vertex: Vertex,
    pub level: usize,
    pub forbidden: Vec<Color>,
    pub color: Color,
}

#[derive(Debug, Clone)]
pub struct TwiceDegreeResult {
    pub tree: RootedTree,
    pub coloring: Coloring,
    /// Present only when requested; steps in coloring order.
    pub trace: Option<Vec<TraceStep>>,
}

pub fn twice_degree(g: &Graph, root: Vertex) -> Result<TwiceDegreeResult> {
    run(g, root, false)
}

pub fn twice_degree_traced(g: &Graph, root: Vertex) -> Result<TwiceDegreeResult> {
    run(g, root, true)
}

fn run(g: &Graph, root: Vertex, keep_trace: bool) -> Result<TwiceDegreeResult> {
    g.check_vertex(root)?;
    g.ensure_connected()?;
    let n = g.n();
    let mut in_tree = vec![false; n];
    let mut parent = vec![root; n];
    let mut color: Vec<Option<Color>> = vec![None; n];
    let mut level = vec![0usize; n];
    let mut trace = keep_trace.then(Vec::new);

    in_tree[root] = true;
    let mut queue = vec![root];
    while !queue.is_empty() {
        let mut next = Vec::new();
        for &v in &queue {
            // Adoption: uncolored, unvisited neighbors become children of v.
            for &x in g.neighbors(v) {
                if !in_tree[x] {
                    in_tree[x] = true;
                    parent[x] = v;
                    level[x] = level[v] + 1;
                    next.push(x);
                }
            }
            let is_tree_edge = |a: Vertex, b: Vertex| {
                (a != root && parent[a] == b) || (b != root && parent[b] == a)
            };
            let mut forbidden: BTreeSet<Color> = g
                .closed_neighborhood(parent[v])
                .into_iter()
                .filter_map(|u| color[u])
                .collect();
            for &x in g.neighbors(v) {
                if !is_tree_edge(v, x) {
                    if let Some(c) = color[parent[x]] {
                        forbidden.insert(c);
                    }
                }
            }
            let k = (1..).find(|c| !forbidden.contains(c)).expect("finite forbidden set");
            color[v] = Some(k);
            if let Some(trace) = trace.as_mut() {
                trace.push(TraceStep {
                    vertex: v,
                    level: level[v],
                    forbidden: forbidden.into_iter().collect(),
                    color: k,
                });
            }
        }
        queue = next;
    }

    let tree = RootedTree::from_parents(g, root, parent)?;
    Ok(TwiceDegreeResult {
        tree,
        coloring: Coloring::from_partial(color),
        trace,
    })
}

/// Max color within `2Δ` and the coloring is a T-pseudo-schedule for the
/// internal tree.
pub fn verify_twice_degree_bound(g: &Graph, result: &TwiceDegreeResult) -> Result<bool> {
    let bound = 2 * g.max_degree() as u64;
    let max = result
        .coloring
        .max_color()
        .ok_or_else(|| Error::InvalidParameter("empty coloring".into()))?;
    // A single vertex has Δ = 0 but still needs color 1.
    let within = u64::from(max) <= bound.max(1);
    Ok(within && verify::is_t_pseudo_schedule(g, &result.tree, &result.coloring)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let r = twice_degree(&g, 0).unwrap();
        assert_eq!(r.coloring, Coloring::from_total(vec![1, 2, 3]));
        assert!(verify::is_bidirectional_edge(&g, &r.coloring, 0, 1).unwrap());
        assert!(verify::is_bidirectional_edge(&g, &r.coloring, 0, 2).unwrap());
        assert!(verify_twice_degree_bound(&g, &r).unwrap());
    }

    #[test]
    fn star_uses_delta_plus_one() {
        let n = 6;
        let edges: Vec<_> = (1..=n).map(|l| (0, l)).collect();
        let g = Graph::from_edges(n + 1, &edges).unwrap();
        let r = twice_degree(&g, 0).unwrap();
        let expected: Vec<Color> = (1..=(n as Color + 1)).collect();
        assert_eq!(r.coloring, Coloring::from_total(expected));
        assert!(verify_twice_degree_bound(&g, &r).unwrap());
    }

    #[test]
    fn path_from_end() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let r = twice_degree(&g, 0).unwrap();
        assert_eq!(r.coloring, Coloring::from_total(vec![1, 2, 3]));
        assert!(r.coloring.max_color().unwrap() <= 4);
    }

    #[test]
    fn tree_matches_bfs() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = twice_degree(&g, 0).unwrap();
        assert_eq!(r.tree, RootedTree::bfs(&g, 0).unwrap());
    }

    #[test]
    fn trace_is_level_ordered() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let r = twice_degree_traced(&g, 2).unwrap();
        let levels: Vec<_> = r.trace.unwrap().iter().map(|s| s.level).collect();
        assert!(levels.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_disconnected() {
        let g = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(twice_degree(&g, 0), Err(Error::Disconnected)));
        assert!(matches!(twice_degree(&g, 5), Err(Error::InvalidVertex { .. })));
    }
}
