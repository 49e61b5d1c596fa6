//! JSON graph and coloring files, and DOT export.
//!
//! Graph file: `{"n": 3, "edges": [[0,1],[1,2]], "root": 0, "tree_parent": [0,0,1]}`
//! with each edge listed once as `[u, v]`, `u < v`. `root` and `tree_parent`
//! may be `null`. Coloring file: `{"colors": [0, 1, null]}`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::tree::RootedTree;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
    #[serde(default)]
    pub root: Option<Vertex>,
    #[serde(default)]
    pub tree_parent: Option<Vec<Vertex>>,
}

/// Parses a graph file. The graph must be simple and connected; a supplied
/// tree must be a spanning tree of it.
pub fn parse_graph(bytes: &[u8]) -> Result<(Graph, Option<RootedTree>)> {
    let doc: GraphDoc = serde_json::from_slice(bytes)?;
    let mut edges = Vec::with_capacity(doc.edges.len());
    for &[u, v] in &doc.edges {
        if u >= v {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            return Err(Error::Malformed(format!("edge [{u},{v}] must be listed as [u,v] with u < v")));
        }
        edges.push((u, v));
    }
    let g = Graph::connected_from_edges(doc.n, &edges)?;
    let tree = match (doc.root, doc.tree_parent) {
        (Some(root), Some(parent)) => Some(RootedTree::from_parents(&g, root, parent)?),
        (None, None) | (Some(_), None) => None,
        (None, Some(_)) => return Err(Error::Malformed("tree_parent given without root".into())),
    };
    Ok((g, tree))
}

pub fn graph_doc(g: &Graph, tree: Option<&RootedTree>) -> GraphDoc {
    GraphDoc {
        n: g.n(),
        edges: g.edges().map(|(u, v)| [u, v]).collect(),
        root: tree.map(RootedTree::root),
        tree_parent: tree.map(|t| t.parents().to_vec()),
    }
}

pub fn serialize_graph(g: &Graph, tree: Option<&RootedTree>) -> String {
    serde_json::to_string(&graph_doc(g, tree)).expect("graph documents always serialize")
}

pub fn parse_coloring(bytes: &[u8]) -> Result<Coloring> {
    Ok(serde_json::from_slice(bytes)?)
}

pub fn serialize_coloring(c: &Coloring) -> String {
    serde_json::to_string(c).expect("colorings always serialize")
}

/// DOT export: tree edges solid, other edges dashed, labels `id:color` when
/// a coloring is supplied (`?` for unknown).
pub fn export_dot(g: &Graph, tree: Option<&RootedTree>, coloring: Option<&Coloring>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        let label = match coloring {
            Some(c) => match c.get(v) {
                Some(k) => format!("{v}:{k}"),
                None => format!("{v}:?"),
            },
            None => v.to_string(),
        };
        let _ = writeln!(out, "  {v} [label=\"{label}\"];");
    }
    for (u, v) in g.edges() {
        let solid = tree.is_none_or(|t| t.is_tree_edge(u, v));
        let style = if solid { "solid" } else { "dashed" };
        let _ = writeln!(out, "  {u} -- {v} [style={style}];");
    }
    out.push_str("}\n");
    out
}
