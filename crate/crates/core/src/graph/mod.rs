//! Immutable digraph storage and the access layer shared by every local
//! algorithm.
//!
//! A [`DirectedGraph`] is a multigraph in compressed out-list form. Arc slots
//! keep the order in which arcs were supplied, which is what makes seeded runs
//! reproducible. Undirected inputs are stored as symmetric digraphs.

mod certificate;
mod io;
mod scc;
mod split;
pub(crate) mod view;

pub use certificate::sparse_certificate;
pub use io::{load_graph, parse_graph, write_graph};
pub use scc::{is_strongly_connected, strongly_connected_components};
pub use split::{split_graph, SplitSide, SplitView};
pub use view::{LocalView, QueryAnswer, ViewError};

use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

/// Dense vertex index in `0..n`.
pub type VertexId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: vertex {vertex} ≥ n={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("missing problem line `p <n> <m> directed|undirected`")]
    MissingHeader,
    #[error("operation requires an undirected graph")]
    NotUndirected,
    #[error("vertex {0} has out-degree 0")]
    ZeroOutDegree(VertexId),
}

/// Query-level access to out-lists.
///
/// Everything the local algorithms know about a graph goes through this
/// trait: a degree lookup and the incidence query `head(v, slot)`.
pub trait Adjacency {
    /// Number of vertices.
    fn vertex_count(&self) -> usize;
    /// Number of arcs.
    fn arc_count(&self) -> usize;
    fn out_degree(&self, v: VertexId) -> usize;
    /// Head of the `slot`-th out-arc of `v`. `slot < out_degree(v)`.
    fn head(&self, v: VertexId, slot: usize) -> VertexId;
}

/// Immutable adjacency-list digraph with parallel arcs and self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    offsets: Vec<usize>,
    heads: Vec<VertexId>,
    undirected_origin: bool,
    /// Undirected edges in input order (empty for directed graphs).
    edges: Vec<(VertexId, VertexId)>,
}

impl DirectedGraph {
    /// Builds a digraph from arcs given in slot order.
    pub fn from_arcs(n: usize, arcs: &[(VertexId, VertexId)]) -> Self {
        let mut g = Self::build(n, arcs.iter().copied());
        g.undirected_origin = false;
        g
    }

    /// Builds a symmetric digraph; every edge `{u, v}` becomes `u→v` and `v→u`.
    /// A self-loop contributes two arcs `u→u`.
    pub fn from_undirected_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Self {
        let arcs = edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]);
        let mut g = Self::build(n, arcs);
        g.undirected_origin = true;
        g.edges = edges.to_vec();
        g
    }

    fn build(n: usize, arcs: impl Iterator<Item = (VertexId, VertexId)> + Clone) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for (u, v) in arcs.clone() {
            assert!(u < n && v < n, "arc ({u},{v}) out of range for n={n}");
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut heads = vec![0; offsets[n]];
        for (u, v) in arcs {
            heads[fill[u]] = v;
            fill[u] += 1;
        }
        DirectedGraph {
            n,
            offsets,
            heads,
            undirected_origin: false,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.heads.len()
    }

    pub fn is_undirected(&self) -> bool {
        self.undirected_origin
    }

    /// Undirected edge list in input order; empty for directed graphs.
    pub fn undirected_edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.heads[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Arcs as `(tail, head)` pairs; the position in the iterator is the arc id.
    pub fn arcs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n).flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    /// Index of the first arc of `v` in the global arc numbering.
    pub fn arc_offset(&self, v: VertexId) -> usize {
        self.offsets[v]
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.out_neighbors(u).contains(&v)
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &h in &self.heads {
            deg[h] += 1;
        }
        deg
    }

    /// The same graph with every arc reversed. In-arcs keep tail order.
    pub fn reversed(&self) -> DirectedGraph {
        let arcs: Vec<_> = self.arcs().map(|(u, v)| (v, u)).collect();
        let mut r = Self::build(self.n, arcs.iter().copied());
        r.undirected_origin = self.undirected_origin;
        r.edges = self.edges.clone();
        r
    }

    /// Subgraph induced by `vertices`, relabelled densely in the given order.
    pub fn induced(&self, vertices: &[VertexId]) -> DirectedGraph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        if self.undirected_origin {
            let edges: Vec<_> = self
                .edges
                .iter()
                .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
                .map(|&(u, v)| (local[u], local[v]))
                .collect();
            return Self::from_undirected_edges(vertices.len(), &edges);
        }
        let arcs: Vec<_> = vertices
            .iter()
            .flat_map(|&u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
            .filter(|&(_, v)| local[v] != usize::MAX)
            .map(|(u, v)| (local[u], local[v]))
            .collect();
        Self::from_arcs(vertices.len(), &arcs)
    }

    /// Distinct out-neighbours of `v`, excluding `v` itself.
    pub fn out_neighborhood(&self, v: VertexId) -> Vec<VertexId> {
        let set: BTreeSet<_> = self.out_neighbors(v).iter().copied().filter(|&w| w != v).collect();
        set.into_iter().collect()
    }

    pub fn stats(&self) -> GraphStats {
        let degrees = (0..self.n).map(|v| self.out_degree(v));
        let min = degrees.clone().min().unwrap_or(0);
        let max = degrees.max().unwrap_or(0);
        GraphStats {
            min_out_degree: min,
            max_degree: max.max(self.in_degrees().into_iter().max().unwrap_or(0)),
            arcs: self.m(),
            vertices: self.n,
        }
    }

    /// Vertex with the smallest out-degree, ties to the lowest id.
    pub fn min_out_degree_vertex(&self) -> Option<VertexId> {
        (0..self.n).min_by_key(|&v| (self.out_degree(v), v))
    }

    pub fn min_out_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).min().unwrap_or(0)
    }

    /// Fails with the first vertex of out-degree zero, if any.
    pub fn require_positive_out_degree(&self) -> Result<(), GraphError> {
        match (0..self.n).find(|&v| self.out_degree(v) == 0) {
            Some(v) => Err(GraphError::ZeroOutDegree(v)),
            None => Ok(()),
        }
    }
}

impl Adjacency for DirectedGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn arc_count(&self) -> usize {
        self.heads.len()
    }

    #[inline]
    fn out_degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    fn head(&self, v: VertexId, slot: usize) -> VertexId {
        self.heads[self.offsets[v] + slot]
    }
}

impl<A: Adjacency + ?Sized> Adjacency for &A {
    fn vertex_count(&self) -> usize {
        (**self).vertex_count()
    }
    fn arc_count(&self) -> usize {
        (**self).arc_count()
    }
    fn out_degree(&self, v: VertexId) -> usize {
        (**self).out_degree(v)
    }
    fn head(&self, v: VertexId, slot: usize) -> VertexId {
        (**self).head(v, slot)
    }
}

/// Degree summary. `min_out_degree ≤ m/n ≤ max_degree`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GraphStats {
    pub min_out_degree: usize,
    /// Largest in- or out-degree.
    pub max_degree: usize,
    pub arcs: usize,
    pub vertices: usize,
}

impl GraphStats {
    pub fn average_degree(&self) -> f64 {
        if self.vertices == 0 {
            0.0
        } else {
            self.arcs as f64 / self.vertices as f64
        }
    }
}

/// Partition `(L, S, R)` of the vertex set with no arc from `L` to `R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationTriple {
    pub left: Vec<VertexId>,
    pub separator: Vec<VertexId>,
    pub right: Vec<VertexId>,
}

impl SeparationTriple {
    /// Checks the defining properties against `g`: a partition of `V`, both
    /// sides nonempty, and `E(L, R) = ∅`.
    pub fn is_valid_in(&self, g: &DirectedGraph) -> bool {
        if self.left.is_empty() || self.right.is_empty() {
            return false;
        }
        let mut side = vec![0u8; g.n()];
        for (tag, set) in [(1u8, &self.left), (2, &self.separator), (3, &self.right)] {
            for &v in set.iter() {
                if v >= g.n() || side[v] != 0 {
                    return false;
                }
                side[v] = tag;
            }
        }
        if side.contains(&0) {
            return false;
        }
        self.left
            .iter()
            .all(|&u| g.out_neighbors(u).iter().all(|&w| side[w] != 3))
    }

    /// The triple read in the reverse graph: `(R, S, L)`.
    pub fn flipped(&self) -> SeparationTriple {
        SeparationTriple {
            left: self.right.clone(),
            separator: self.separator.clone(),
            right: self.left.clone(),
        }
    }
}

/// Number of arcs leaving `set`, i.e. `|E(S, V − S)|`. Self-loops never count.
pub fn cut_size(g: &DirectedGraph, set: &[VertexId]) -> usize {
    let member = membership(g.n(), set);
    set.iter()
        .flat_map(|&u| g.out_neighbors(u))
        .filter(|&&w| !member[w])
        .count()
}

/// Number of arcs entering `set`.
pub fn in_cut_size(g: &DirectedGraph, set: &[VertexId]) -> usize {
    let member = membership(g.n(), set);
    g.arcs().filter(|&(u, v)| !member[u] && member[v]).count()
}

/// Out-volume `Σ_{v∈S} deg⁺(v)`.
pub fn out_volume(g: &DirectedGraph, set: &[VertexId]) -> usize {
    set.iter().map(|&v| g.out_degree(v)).sum()
}

/// Distinct out-neighbours of `set` outside `set`.
pub fn out_neighborhood_of_set(g: &DirectedGraph, set: &[VertexId]) -> Vec<VertexId> {
    let member = membership(g.n(), set);
    let found: BTreeSet<_> = set
        .iter()
        .flat_map(|&u| g.out_neighbors(u).iter().copied())
        .filter(|&w| !member[w])
        .collect();
    found.into_iter().collect()
}

pub(crate) fn membership(n: usize, set: &[VertexId]) -> Vec<bool> {
    let mut member = vec![false; n];
    for &v in set {
        member[v] = true;
    }
    member
}

/// Vertices reachable from `sources` when the vertices in `removed` are deleted.
pub fn reachable_avoiding(g: &DirectedGraph, sources: &[VertexId], removed: &[VertexId]) -> Vec<bool> {
    let mut seen = membership(g.n(), removed);
    let blocked = seen.clone();
    let mut stack = Vec::new();
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(u) = stack.pop() {
        for &w in g.out_neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    for (s, b) in seen.iter_mut().zip(blocked) {
        if b {
            *s = false;
        }
    }
    seen
}
