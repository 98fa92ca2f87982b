//! Undirected graphs on vertices `0..n` and the structural predicates used to
//! reason about thresholding patterns.
//!
//! The library API is 0-based. File formats, the CLI and JSON reports are
//! 1-based.

mod chordal;

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use chordal::{
    chordality, perfect_clique_ordering, CliqueOrdering, PerfectEliminationOrder,
};

/// Simple undirected graph. No self-loops, no parallel edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UndirectedGraph {
    n: usize,
    adj: Vec<BTreeSet<usize>>,
}

/// Result of [`UndirectedGraph::induced_subgraph`]: the subgraph plus the map
/// from new labels to old labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: UndirectedGraph,
    /// `vertices[new] = old`, ascending.
    pub vertices: Vec<usize>,
}

impl InducedSubgraph {
    /// New label of an old vertex, if it was kept.
    pub fn local(&self, old: usize) -> Option<usize> {
        self.vertices.binary_search(&old).ok()
    }
}

impl UndirectedGraph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n);
        for (u, v) in edges {
            if !g.add_edge(u, v)? {
                return Err(Error::DuplicateEdge(u.min(v) + 1, u.max(v) + 1));
            }
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert(u, v);
            }
        }
        g
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let mut g = Self::new(n);
        for u in 1..n {
            g.insert(u - 1, u);
        }
        g
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooSmall {
                required: 3,
                found: n,
            });
        }
        let mut g = Self::path(n);
        g.insert(0, n - 1);
        Ok(g)
    }

    /// Star with center 0.
    pub fn star(n: usize) -> Self {
        let mut g = Self::new(n);
        for v in 1..n {
            g.insert(0, v);
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange {
                vertex: v + 1,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    fn insert(&mut self, u: usize, v: usize) -> bool {
        let fresh = self.adj[u].insert(v);
        self.adj[v].insert(u);
        fresh
    }

    /// Adds `{u, v}`. Returns `false` if the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u + 1));
        }
        Ok(self.insert(u, v))
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        let had = self.adj[u].remove(&v);
        self.adj[v].remove(&u);
        had
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.range(u + 1..).map(move |&v| (u, v)))
    }

    /// True iff both graphs share the vertex set and every edge of `self` is
    /// an edge of `other`.
    pub fn is_subgraph_of(&self, other: &UndirectedGraph) -> bool {
        self.n == other.n && self.edges().all(|(u, v)| other.has_edge(u, v))
    }

    /// Breadth-first distances from `start`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, start: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[start] = Some(0);
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest path from `from` to `to` as a vertex sequence, if one exists.
    /// Neighbors are explored in ascending order, so the result is
    /// deterministic.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.n];
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Vertex sets of the connected components, each ascending, ordered by
    /// smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut comp = vec![s];
            label[s] = id;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for w in self.neighbors(u) {
                    if label[w] == usize::MAX {
                        label[w] = id;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.connected_components().len() == 1
    }

    /// True iff every pair of distinct vertices in `s` is adjacent.
    pub fn is_complete(&self, s: &[usize]) -> Result<bool> {
        for &v in s {
            self.check_vertex(v)?;
        }
        Ok(s.iter().enumerate().all(|(i, &u)| {
            s[i + 1..].iter().all(|&v| u == v || self.has_edge(u, v))
        }))
    }

    pub fn is_union_of_complete_components(&self) -> bool {
        self.connected_components().iter().all(|c| {
            c.iter()
                .all(|&u| self.degree(u) == c.len() - 1)
        })
    }

    /// Subgraph induced by `s` (duplicates ignored), relabeled in ascending
    /// order of the kept vertices.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<InducedSubgraph> {
        if s.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        for &v in s {
            self.check_vertex(v)?;
        }
        let vertices: Vec<usize> = s.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let mut graph = UndirectedGraph::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    graph.insert(i, j);
                }
            }
        }
        Ok(InducedSubgraph { graph, vertices })
    }

    /// Connected with exactly `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.edge_count() + 1 == self.n && self.is_connected()
    }

    /// Every component is a tree, i.e. the graph is acyclic.
    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.connected_components().len() == self.n
    }

    /// If the graph is a path (as a spanning subgraph: connected, max degree
    /// two, `n - 1` edges), the vertices in path order starting from the
    /// smaller endpoint.
    pub fn path_order(&self) -> Option<Vec<usize>> {
        if self.n == 1 {
            return Some(vec![0]);
        }
        if !self.is_tree() || (0..self.n).any(|v| self.degree(v) > 2) {
            return None;
        }
        let start = (0..self.n).find(|&v| self.degree(v) == 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while order.len() < self.n {
            let next = self.neighbors(cur).find(|&w| w != prev)?;
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    /// A vertex whose removal leaves the graph connected: the vertex farthest
    /// from vertex 0 in breadth-first distance, lowest index on ties.
    pub fn removable_vertex(&self) -> Result<usize> {
        if self.n < 2 {
            return Err(Error::TooSmall {
                required: 2,
                found: self.n,
            });
        }
        let dist = self.bfs_distances(0);
        if dist.iter().any(Option::is_none) {
            return Err(Error::NotConnected);
        }
        let mut best = 0;
        let mut best_d = 0;
        for (v, d) in dist.iter().enumerate() {
            let d = d.unwrap_or(0);
            if d > best_d {
                best = v;
                best_d = d;
            }
        }
        Ok(best)
    }

    /// Looks for a component of `h` that is not induced in `self`. When one
    /// exists, returns a cycle of `self` made of a shortest `h`-path between
    /// the endpoints of an edge in `E(self) \ E(h)` closed by that edge. Among
    /// all such edges the one giving the shortest cycle is chosen, ties broken
    /// lexicographically.
    pub fn broken_cycle_witness(&self, h: &UndirectedGraph) -> Result<Option<Vec<usize>>> {
        if !h.is_subgraph_of(self) {
            return Err(Error::NotASubgraph);
        }
        let mut best: Option<Vec<usize>> = None;
        for (u, v) in self.edges() {
            if h.has_edge(u, v) {
                continue;
            }
            if let Some(path) = h.shortest_path(u, v) {
                if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                    best = Some(path);
                }
            }
        }
        Ok(best)
    }

    /// A shortest cycle of the graph, if it has one.
    pub fn shortest_cycle(&self) -> Option<Vec<usize>> {
        let mut best: Option<Vec<usize>> = None;
        let mut work = self.clone();
        for (u, v) in self.edges() {
            work.remove_edge(u, v);
            if let Some(path) = work.shortest_path(u, v) {
                if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                    best = Some(path);
                }
            }
            work.insert(u, v);
        }
        best
    }
}

/// A decomposition `(A, B, C)` of a graph: a partition of the vertices where
/// the complete separator `C` splits `A` from `B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    part_a: Vec<usize>,
    part_b: Vec<usize>,
    separator_c: Vec<usize>,
}

impl Decomposition {
    pub fn new(g: &UndirectedGraph, a: &[usize], b: &[usize], c: &[usize]) -> Result<Self> {
        let invalid = |m: &str| Err(Error::InvalidDecomposition(m.to_string()));
        if a.is_empty() || b.is_empty() || c.is_empty() {
            return invalid("all three parts must be nonempty");
        }
        let mut owner = vec![None; g.vertex_count()];
        for (k, part) in [a, b, c].iter().enumerate() {
            for &v in part.iter() {
                g.check_vertex(v)?;
                if owner[v].replace(k).is_some() {
                    return invalid("parts are not disjoint");
                }
            }
        }
        if owner.iter().any(Option::is_none) {
            return invalid("parts do not cover the vertex set");
        }
        if !g.is_complete(c)? {
            return invalid("separator is not complete");
        }
        if a.iter().any(|&x| b.iter().any(|&y| g.has_edge(x, y))) {
            return invalid("separator does not separate A from B");
        }
        let sorted = |s: &[usize]| {
            let mut v = s.to_vec();
            v.sort_unstable();
            v
        };
        Ok(Self {
            part_a: sorted(a),
            part_b: sorted(b),
            separator_c: sorted(c),
        })
    }

    pub fn part_a(&self) -> &[usize] {
        &self.part_a
    }

    pub fn part_b(&self) -> &[usize] {
        &self.part_b
    }

    pub fn separator(&self) -> &[usize] {
        &self.separator_c
    }
}
