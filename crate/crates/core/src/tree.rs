//! Rooted spanning trees and the kinship relations derived from them.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// A spanning tree of a companion [`Graph`], rooted at `root`.
///
/// `parent(root) == root`; every other vertex sits exactly one level below
/// its parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: Vertex,
    parent: Vec<Vertex>,
    level: Vec<usize>,
    children: Vec<Vec<Vertex>>,
    height: usize,
}

impl RootedTree {
    /// Validates a parent array against `g`: every tree edge must be a graph
    /// edge, and following parents from any vertex must reach `root`.
    pub fn from_parents(g: &Graph, root: Vertex, parent: Vec<Vertex>) -> Result<Self> {
        let n = g.n();
        g.check_vertex(root)?;
        if parent.len() != n {
            return Err(Error::InvalidTree(format!(
                "parent array has {} entries, graph has {n} vertices",
                parent.len()
            )));
        }
        if parent[root] != root {
            return Err(Error::InvalidTree(format!("parent of root {root} must be itself")));
        }
        let mut children = vec![Vec::new(); n];
        for (v, &p) in parent.iter().enumerate() {
            if v == root {
                continue;
            }
            if p >= n {
                return Err(Error::InvalidVertex { vertex: p, n });
            }
            if p == v {
                return Err(Error::InvalidTree(format!("non-root vertex {v} is its own parent")));
            }
            if !g.has_edge(v, p) {
                return Err(Error::InvalidTree(format!("tree edge {v}-{p} is not a graph edge")));
            }
            children[p].push(v);
        }
        // Levels by BFS over child lists; unreached vertices sit on a cycle.
        let mut level = vec![usize::MAX; n];
        level[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &c in &children[v] {
                level[c] = level[v] + 1;
                queue.push_back(c);
            }
        }
        if let Some(v) = level.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidTree(format!(
                "vertex {v} does not reach the root (parent cycle)"
            )));
        }
        let height = level.iter().copied().max().unwrap_or(0);
        Ok(Self {
            root,
            parent,
            level,
            children,
            height,
        })
    }

    /// Breadth-first (shortest-path) tree. Each vertex adopts its unvisited
    /// neighbors in ascending ID order.
    pub fn bfs(g: &Graph, root: Vertex) -> Result<Self> {
        g.check_vertex(root)?;
        let n = g.n();
        let mut parent = vec![usize::MAX; n];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &x in g.neighbors(v) {
                if parent[x] == usize::MAX {
                    parent[x] = v;
                    queue.push_back(x);
                }
            }
        }
        if parent.contains(&usize::MAX) {
            return Err(Error::Disconnected);
        }
        Self::from_parents(g, root, parent)
    }

    /// Depth-first tree, descending into the lowest-ID unvisited neighbor first.
    pub fn dfs(g: &Graph, root: Vertex) -> Result<Self> {
        g.check_vertex(root)?;
        let n = g.n();
        let mut parent = vec![usize::MAX; n];
        parent[root] = root;
        // Stack of (vertex, next neighbor index).
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let nbrs = g.neighbors(v);
            match nbrs[*next..].iter().position(|&x| parent[x] == usize::MAX) {
                Some(off) => {
                    let x = nbrs[*next + off];
                    *next += off + 1;
                    parent[x] = v;
                    stack.push((x, 0));
                }
                None => {
                    stack.pop();
                }
            }
        }
        if parent.contains(&usize::MAX) {
            return Err(Error::Disconnected);
        }
        Self::from_parents(g, root, parent)
    }

    /// Uniformly random spanning tree (Wilson's algorithm), rooted at `root`.
    pub fn random<R: Rng + ?Sized>(g: &Graph, root: Vertex, rng: &mut R) -> Result<Self> {
        g.check_vertex(root)?;
        g.ensure_connected()?;
        let n = g.n();
        let mut in_tree = vec![false; n];
        let mut next = vec![usize::MAX; n];
        in_tree[root] = true;
        let mut parent = vec![usize::MAX; n];
        parent[root] = root;
        for start in 0..n {
            let mut u = start;
            while !in_tree[u] {
                next[u] = *g.neighbors(u).choose(rng).expect("connected graph has no isolated vertex");
                u = next[u];
            }
            let mut u = start;
            while !in_tree[u] {
                in_tree[u] = true;
                parent[u] = next[u];
                u = next[u];
            }
        }
        Self::from_parents(g, root, parent)
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// Parent of `v`; the root is its own parent.
    pub fn parent(&self, v: Vertex) -> Vertex {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Vertex] {
        &self.parent
    }

    /// Tree distance from the root.
    pub fn level(&self, v: Vertex) -> usize {
        self.level[v]
    }

    pub fn levels(&self) -> &[usize] {
        &self.level
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Children of `v` in ascending order.
    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn is_tree_edge(&self, u: Vertex, v: Vertex) -> bool {
        u != v
            && ((u != self.root && self.parent[u] == v) || (v != self.root && self.parent[v] == u))
    }

    /// Tree edges as `(parent, child)` pairs in child order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n())
            .filter(move |&v| v != self.root)
            .map(move |v| (self.parent[v], v))
    }

    /// Maximum vertex degree within the tree.
    pub fn max_degree(&self) -> usize {
        (0..self.n())
            .map(|v| self.children[v].len() + usize::from(v != self.root))
            .max()
            .unwrap_or(0)
    }

    /// Checks that this tree spans `g` (same vertex count, tree edges in `g`).
    pub fn check_spans(&self, g: &Graph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::InvalidTree(format!(
                "tree has {} vertices, graph has {}",
                self.n(),
                g.n()
            )));
        }
        match self.edges().find(|&(p, v)| !g.has_edge(p, v)) {
            Some((p, v)) => Err(Error::InvalidTree(format!("tree edge {p}-{v} is not a graph edge"))),
            None => Ok(()),
        }
    }
}

/// How a neighbor relates to a vertex under a rooted spanning tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kin {
    Parent,
    Child,
    /// A non-tree neighbor one level closer to the root.
    Stepparent,
    /// A non-tree neighbor one level further from the root.
    Stepchild,
    /// Any other non-tree neighbor (same level, or two or more levels apart).
    Other,
}

/// Per-vertex kinship lists derived from a graph and a spanning tree.
#[derive(Debug, Clone)]
pub struct Kinship {
    parent: Vec<Option<Vertex>>,
    children: Vec<Vec<Vertex>>,
    stepparents: Vec<Vec<Vertex>>,
    stepchildren: Vec<Vec<Vertex>>,
    relations: Vec<Vec<(Vertex, Kin)>>,
}

impl Kinship {
    pub fn new(g: &Graph, t: &RootedTree) -> Result<Self> {
        t.check_spans(g)?;
        let n = g.n();
        let mut kin = Self {
            parent: vec![None; n],
            children: vec![Vec::new(); n],
            stepparents: vec![Vec::new(); n],
            stepchildren: vec![Vec::new(); n],
            relations: vec![Vec::new(); n],
        };
        for v in 0..n {
            if v != t.root() {
                kin.parent[v] = Some(t.parent(v));
            }
            kin.children[v] = t.children(v).to_vec();
            for &u in g.neighbors(v) {
                let rel = if v != t.root() && t.parent(v) == u {
                    Kin::Parent
                } else if u != t.root() && t.parent(u) == v {
                    Kin::Child
                } else if t.level(u) + 1 == t.level(v) {
                    kin.stepparents[v].push(u);
                    Kin::Stepparent
                } else if t.level(v) + 1 == t.level(u) {
                    kin.stepchildren[v].push(u);
                    Kin::Stepchild
                } else {
                    Kin::Other
                };
                kin.relations[v].push((u, rel));
            }
        }
        Ok(kin)
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// `None` for the root.
    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        self.parent[v]
    }

    pub fn children(&self, v: Vertex) -> &[Vertex] {
        &self.children[v]
    }

    pub fn stepparents(&self, v: Vertex) -> &[Vertex] {
        &self.stepparents[v]
    }

    pub fn stepchildren(&self, v: Vertex) -> &[Vertex] {
        &self.stepchildren[v]
    }

    /// What `u` is to `v`, or `None` if they are not adjacent.
    pub fn relation(&self, v: Vertex, u: Vertex) -> Option<Kin> {
        let rel = &self.relations[v];
        rel.binary_search_by_key(&u, |&(x, _)| x).ok().map(|i| rel[i].1)
    }
}

/// Smallest band count `d` satisfying either sufficient condition for the
/// d-band algorithm to yield a T-pseudo-schedule: `d` at least the largest
/// level gap across a graph edge plus two, or `d` greater than the tree height.
pub fn min_valid_d(g: &Graph, t: &RootedTree) -> Result<usize> {
    t.check_spans(g)?;
    let max_gap = g
        .edges()
        .map(|(u, v)| t.level(u).abs_diff(t.level(v)))
        .max()
        .unwrap_or(0);
    Ok((max_gap + 2).min(t.height() + 1))
}
